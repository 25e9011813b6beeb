# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_pykernels``."""
import numpy as np

from libc.math cimport exp, cos, sin, M_PI


cdef inline double complex _half_power(double complex x) noexcept nogil:
    # exp(pi i x)
    cdef double r = exp(-M_PI * x.imag)
    return r * cos(M_PI * x.real) + 1j * (r * sin(M_PI * x.real))


def theta_product(x, double complex q, int nterms):
    cdef double complex[::1] flat = np.ascontiguousarray(x, dtype=np.complex128).ravel()
    cdef Py_ssize_t n = flat.shape[0]
    res = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = res
    cdef Py_ssize_t k
    cdef int s
    cdef double complex half, inv_half, u, inv_u, acc, qs
    with nogil:
        for k in range(n):
            half = _half_power(flat[k])
            inv_half = 1.0 / half
            u = half * half
            inv_u = inv_half * inv_half
            acc = half - inv_half
            qs = 1.0
            for s in range(nterms):
                qs = qs * q
                acc = acc * (1.0 - qs * u) * (1.0 - qs * inv_u)
            out[k] = acc
    return res.reshape(np.shape(x))


def twisted_fma(double complex[:, :, ::1] out,
                const double complex[:, :, ::1] a,
                const Py_ssize_t[::1] ra, const Py_ssize_t[::1] ca,
                const double complex[:, :, ::1] b,
                const Py_ssize_t[::1] rb, const Py_ssize_t[::1] cb):
    cdef Py_ssize_t nx = out.shape[0], ny = out.shape[1], np_ = out.shape[2]
    cdef Py_ssize_t i, j, p, ai, aj, bi, bj
    with nogil:
        for i in range(nx):
            ai = ra[i]
            bi = rb[i]
            for j in range(ny):
                aj = ca[j]
                bj = cb[j]
                for p in range(np_):
                    out[i, j, p] = out[i, j, p] + a[ai, aj, p] * b[bi, bj, p]
