# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: secular-function sweeps, bracketed Newton root polish,
Cauchy-kernel sums and mode sums.  Mirrors kondo._kernels_py exactly."""

import numpy as np

cimport numpy as cnp
from libc.float cimport DBL_EPSILON
from libc.math cimport fabs, sqrt

cnp.import_array()


cdef void _f_fp(double nu, const double[::1] om, double gsq,
                double* f_out, double* fp_out) noexcept nogil:
    cdef Py_ssize_t m, n = om.shape[0]
    cdef double s = 0.0, sp = 0.0, d, r
    for m in range(n):
        d = om[m] * om[m] - nu * nu
        r = 2.0 * gsq / d
        s += r
        sp += r * 2.0 * nu / d
    f_out[0] = 1.0 + s
    fp_out[0] = sp


def secular_fn(nu, omega_pos, double gsq):
    """f(nu) evaluated elementwise; no pole checking here."""
    cdef const double[::1] nv = np.ascontiguousarray(np.asarray(nu, dtype=float).ravel())
    cdef const double[::1] om = np.ascontiguousarray(np.asarray(omega_pos, dtype=float).ravel())
    out = np.empty(nv.shape[0])
    cdef double[::1] ov = out
    cdef double f, fp
    cdef Py_ssize_t i
    with nogil:
        for i in range(nv.shape[0]):
            _f_fp(nv[i], om, gsq, &f, &fp)
            ov[i] = f
    return out


def xprime(nu, omega_pos, double gsq):
    """X'(nu) elementwise.  Diverges (inf) if nu sits exactly on a pole."""
    cdef const double[::1] nv = np.ascontiguousarray(np.asarray(nu, dtype=float).ravel())
    cdef const double[::1] om = np.ascontiguousarray(np.asarray(omega_pos, dtype=float).ravel())
    out = np.empty(nv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, m
    cdef double s, dm, dp, x
    with nogil:
        for i in range(nv.shape[0]):
            x = nv[i]
            s = 1.0
            for m in range(om.shape[0]):
                dm = x - om[m]
                dp = x + om[m]
                s += gsq / (dm * dm) + gsq / (dp * dp)
            ov[i] = s
    return out


cdef double _refine(double lo, double hi, const double[::1] om, double gsq) noexcept nogil:
    # f(lo+) = -inf; f(hi) >= 0 on every starting bracket.  Never evaluates
    # at the endpoints, so poles at interior interval edges are harmless.
    cdef double x = 0.5 * (lo + hi), f, fp, xn
    cdef int it
    for it in range(200):
        _f_fp(x, om, gsq, &f, &fp)
        if f < 0.0:
            lo = x
        else:
            hi = x
        xn = x - f / fp
        if not (xn > lo and xn < hi):
            xn = 0.5 * (lo + hi)
        if fabs(xn - x) <= 4.0 * DBL_EPSILON * fabs(xn):
            return xn
        if hi - lo <= 4.0 * DBL_EPSILON * hi:
            return 0.5 * (lo + hi)
        x = xn
    return x


def positive_roots(omega_pos, double gsq):
    """All L positive roots of f, ascending, refined to a few ulp.

    One root per interior interval (omega_m, omega_{m+1}) plus the exterior
    root in (omega_L, sqrt(omega_L**2 + 2*L*gsq)]; the upper bound is safe
    because every folded term there is >= -1/L.
    """
    cdef const double[::1] om = np.ascontiguousarray(np.asarray(omega_pos, dtype=float).ravel())
    cdef Py_ssize_t n = om.shape[0], i
    out = np.empty(n)
    cdef double[::1] ov = out
    if gsq == 0.0:
        return np.asarray(om).copy()
    with nogil:
        for i in range(n - 1):
            ov[i] = _refine(om[i], om[i + 1], om, gsq)
        ov[n - 1] = _refine(om[n - 1], sqrt(om[n - 1] * om[n - 1] + 2.0 * n * gsq),
                            om, gsq)
    return out


def cauchy_sum(targets, poles, coeffs):
    """out[i] = sum_j coeffs[j] / (targets[i] - poles[j]), all real."""
    cdef const double[::1] t = np.ascontiguousarray(np.asarray(targets, dtype=float).ravel())
    cdef const double[::1] p = np.ascontiguousarray(np.asarray(poles, dtype=float).ravel())
    cdef const double[::1] cf = np.ascontiguousarray(np.asarray(coeffs, dtype=float).ravel())
    out = np.empty(t.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double s, ti
    with nogil:
        for i in range(t.shape[0]):
            ti = t[i]
            s = 0.0
            for j in range(p.shape[0]):
                s += cf[j] / (ti - p[j])
            ov[i] = s
    return out


def sigma_direct(y, omega_pos):
    """out[i] = sum_m 1 / (y[i]**2 + omega_m**2)."""
    cdef const double[::1] yv = np.ascontiguousarray(np.asarray(y, dtype=float).ravel())
    cdef const double[::1] om = np.ascontiguousarray(np.asarray(omega_pos, dtype=float).ravel())
    out = np.empty(yv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, m
    cdef double s, ysq
    with nogil:
        for i in range(yv.shape[0]):
            ysq = yv[i] * yv[i]
            s = 0.0
            for m in range(om.shape[0]):
                s += 1.0 / (ysq + om[m] * om[m])
            ov[i] = s
    return out
