"""Kernel backend selection.

The compiled kernel is used when importable; setting ``HZLAB_PURE=1`` forces
the numpy fallback.
"""
import os

import numpy as np

from . import _fallback

BACKEND = "python"
_compiled = None

if os.environ.get("HZLAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
        BACKEND = "cython"
    except ImportError:  # extension not built
        _compiled = None

REANCHOR = 1024


def expsum_grid(freqs, coeffs, t0, step, count, backend=None):
    """Return ``sum_k coeffs[k] * exp(1j*freqs[k]*(t0 + j*step))`` for j < count."""
    freqs = np.ascontiguousarray(freqs, dtype=float)
    coeffs = np.asarray(coeffs, dtype=complex)
    cre = np.ascontiguousarray(coeffs.real)
    cim = np.ascontiguousarray(coeffs.imag)
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available")
        return _compiled.expsum_grid(freqs, cre, cim, float(t0), float(step),
                                     int(count), REANCHOR)
    return _fallback.expsum_grid(freqs, cre, cim, float(t0), float(step),
                                 int(count), REANCHOR)


BLOCK = 4 * REANCHOR


def map_blocks(fn, count, threads=1, block=BLOCK):
    """Evaluate ``fn(start, stop)`` over fixed contiguous blocks of ``range(count)``.

    The block layout depends only on ``count`` and ``block``, never on
    ``threads``, and results are concatenated in block order, so output is
    bit-identical for any thread count.
    """
    bounds = [(a, min(a + block, count)) for a in range(0, count, block)]
    if not bounds:
        return np.empty(0, dtype=np.complex128)
    if threads <= 1 or len(bounds) == 1:
        parts = [fn(a, b) for a, b in bounds]
    else:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ab: fn(*ab), bounds))
    return np.concatenate(parts)
