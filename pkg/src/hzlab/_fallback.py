"""Pure numpy implementation of the exponential-sum kernel.

Same algorithm and re-anchoring cadence as the compiled kernel; results agree
to rounding, not bit-for-bit (summation order differs).
"""
import numpy as np


def expsum_grid(freqs, cre, cim, t0, step, count, reanchor=1024):
    freqs = np.asarray(freqs, dtype=float)
    coeffs = np.asarray(cre, dtype=float) + 1j * np.asarray(cim, dtype=float)
    out = np.empty(count, dtype=np.complex128)
    if freqs.size == 0:
        out[:] = 0.0
        return out
    rot = np.exp(1j * freqs * step)
    for start in range(0, count, reanchor):
        stop = min(start + reanchor, count)
        state = coeffs * np.exp(1j * (freqs * (t0 + start * step)))
        out[start] = state.sum()
        for j in range(start + 1, stop):
            state *= rot
            out[j] = state.sum()
    return out
