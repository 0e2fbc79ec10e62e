# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled exponential-sum kernel.

out[j] = sum_k coeffs[k] * exp(1j * freqs[k] * (t0 + j*step))

Each term's phase is advanced by a fixed rotation and re-anchored from the
exact phase every ``reanchor`` grid points.
"""
import numpy as np
from libc.math cimport cos, sin
from libc.stdlib cimport malloc, free


cdef extern from "_expsum.h" nogil:
    void hz_rotate(Py_ssize_t n, double *zr, double *zi, const double *rr, const double *ri)
    double hz_sum(Py_ssize_t n, const double *x)


def expsum_grid(const double[::1] freqs, const double[::1] cre,
                const double[::1] cim, double t0, double step,
                Py_ssize_t count, Py_ssize_t reanchor=1024):
    cdef Py_ssize_t n = freqs.shape[0]
    cdef Py_ssize_t j, k
    cdef double t, ph, c, s
    out = np.empty(count, dtype=np.complex128)
    cdef double[::1] ore = np.empty(count)
    cdef double[::1] oim = np.empty(count)
    cdef Py_ssize_t m = n if n > 0 else 1
    cdef double *rr = <double *> malloc(m * sizeof(double))
    cdef double *ri = <double *> malloc(m * sizeof(double))
    cdef double *zr = <double *> malloc(m * sizeof(double))
    cdef double *zi = <double *> malloc(m * sizeof(double))
    if rr == NULL or ri == NULL or zr == NULL or zi == NULL:
        free(rr); free(ri); free(zr); free(zi)
        raise MemoryError()
    try:
        with nogil:
            for k in range(n):
                ph = freqs[k] * step
                rr[k] = cos(ph)
                ri[k] = sin(ph)
            for j in range(count):
                if j % reanchor == 0:
                    t = t0 + j * step
                    for k in range(n):
                        ph = freqs[k] * t
                        c = cos(ph)
                        s = sin(ph)
                        zr[k] = cre[k] * c - cim[k] * s
                        zi[k] = cre[k] * s + cim[k] * c
                else:
                    hz_rotate(n, zr, zi, rr, ri)
                ore[j] = hz_sum(n, zr)
                oim[j] = hz_sum(n, zi)
    finally:
        free(rr); free(ri); free(zr); free(zi)
    out.real = ore
    out.imag = oim
    return out
