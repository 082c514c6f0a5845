# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled Graeffe kernel; mirrors ``_pykernels.graeffe_step`` operation by operation."""
import numpy as np

from libc.float cimport DBL_EPSILON
from libc.math cimport INFINITY, M_PI, atan2, cos, exp, ldexp, log, remainder, sin

NAME = "cython"

cdef double PI = M_PI
cdef double TWO_PI = 2.0 * M_PI
cdef double NEG_INF = -INFINITY
cdef double LN2 = log(2.0)
cdef double SHORTCUT = log(DBL_EPSILON) - 1.0


cdef inline double wrap(double t) noexcept nogil:
    cdef double r = remainder(t, TWO_PI)
    if r == -PI:
        return PI
    return r


cdef inline void renplus(double a, double alpha, double b, double beta, int k,
                         double* c, double* gamma) noexcept nogil:
    cdef double hi, ha, lo, la, t, delta, e, re, im
    if a == NEG_INF:
        if b == NEG_INF:
            c[0] = NEG_INF
            gamma[0] = 0.0
        else:
            c[0] = b
            gamma[0] = beta
        return
    if b == NEG_INF:
        c[0] = a
        gamma[0] = alpha
        return
    if a > b:
        hi = a; ha = alpha; lo = b; la = beta
    else:
        hi = b; ha = beta; lo = a; la = alpha
    t = ldexp(lo - hi, k)
    if t < SHORTCUT:
        c[0] = hi
        gamma[0] = ha
        return
    delta = wrap(la - ha)
    e = exp(t)
    if delta == PI:
        re = 1.0 - e
        im = 0.0
    else:
        re = 1.0 + e * cos(delta)
        im = e * sin(delta)
    if re == 0.0 and im == 0.0:
        c[0] = NEG_INF
        gamma[0] = 0.0
        return
    c[0] = hi + ldexp(0.5 * log(re * re + im * im), -k)
    gamma[0] = wrap(ha + atan2(im, re))


def renplus_raw(double a, double alpha, double b, double beta, int k):
    cdef double c, gamma
    renplus(a, alpha, b, beta, k, &c, &gamma)
    return c, gamma


def graeffe_step(mags, args, int k):
    """One renormalized Graeffe step from index ``k`` to ``k + 1``."""
    cdef const double[::1] m_in = np.ascontiguousarray(mags, dtype=np.float64)
    cdef const double[::1] a = np.ascontiguousarray(args, dtype=np.float64)
    cdef Py_ssize_t d = m_in.shape[0] - 1
    if a.shape[0] != d + 1:
        raise ValueError("mags and args must have the same length")
    cdef int kk = k + 1
    cdef double two = ldexp(LN2, -kk)
    m_arr = np.empty(d + 1, dtype=np.float64)
    om_arr = np.empty(d + 1, dtype=np.float64)
    oa_arr = np.empty(d + 1, dtype=np.float64)
    cdef double[::1] m = m_arr
    cdef double[::1] om = om_arr
    cdef double[::1] oa = oa_arr
    cdef Py_ssize_t i, j, jmax
    cdef double sq_m, sq_a, acc_m, acc_a, x, y, t_a
    with nogil:
        for i in range(d + 1):
            m[i] = 0.5 * m_in[i]
        for i in range(d + 1):
            if m[i] == NEG_INF:
                sq_m = NEG_INF
                sq_a = 0.0
            else:
                sq_m = 2.0 * m[i]
                sq_a = wrap(2.0 * a[i])
                if (d + i) & 1:
                    sq_a = wrap(sq_a + PI)
            acc_m = NEG_INF
            acc_a = 0.0
            jmax = i if i < d - i else d - i
            for j in range(1, jmax + 1):
                x = m[i - j]
                y = m[i + j]
                if x == NEG_INF or y == NEG_INF:
                    continue
                t_a = wrap(a[i - j] + a[i + j])
                if (d + i - j) & 1:
                    t_a = wrap(t_a + PI)
                renplus(acc_m, acc_a, x + y, t_a, kk, &acc_m, &acc_a)
            if acc_m != NEG_INF:
                acc_m = acc_m + two
            renplus(sq_m, sq_a, acc_m, acc_a, kk, &om[i], &oa[i])
    return om_arr, oa_arr
