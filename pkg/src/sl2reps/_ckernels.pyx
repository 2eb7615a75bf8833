# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled circle-lift kernels; see _kernels_py for the reference version."""

from libc.math cimport atan2, cos, sin, floor, fmod, fabs, M_PI


cdef inline double _base_angle(double a, double c) nogil:
    cdef double ang = fmod(atan2(c, a), M_PI)
    if ang < 0:
        ang += M_PI
    if ang >= M_PI:
        ang = 0.0
    return ang


cdef inline double _lift_eval(double a, double b, double c, double d, long k, double x) nogil:
    cdef double q = floor(x / M_PI)
    cdef double xr = x - q * M_PI
    cdef double cx = cos(xr)
    cdef double sx = sin(xr)
    cdef double wx = a * cx + b * sx
    cdef double wy = c * cx + d * sx
    cdef double cross = (a * d - b * c) * sx
    cdef double delta = atan2(cross, a * wx + c * wy)
    return _base_angle(a, c) + delta + (q + k) * M_PI


def base_angle(double a, double c):
    return _base_angle(a, c)


def lift_eval(double a, double b, double c, double d, long k, double x):
    return _lift_eval(a, b, c, d, k, x)


cdef inline void _compose(double a, double b, double c, double d, long k,
                          double e, double f, double g, double h, long l,
                          double* out, long* kout, double* err) nogil:
    cdef double v = _lift_eval(a, b, c, d, k, _lift_eval(e, f, g, h, l, 0.0))
    out[0] = a * e + b * g
    out[1] = a * f + b * h
    out[2] = c * e + d * g
    out[3] = c * f + d * h
    cdef double w = (v - _base_angle(out[0], out[2])) / M_PI
    cdef double kk = floor(w + 0.5)
    kout[0] = <long>kk
    err[0] = fabs(w - kk)


def compose(double a, double b, double c, double d, long k,
            double e, double f, double g, double h, long l):
    cdef double out[4]
    cdef long kk
    cdef double err
    _compose(a, b, c, d, k, e, f, g, h, l, out, &kk, &err)
    return out[0], out[1], out[2], out[3], kk, err


def word_lift(mats, ks):
    cdef double out[4]
    cdef double a = 1.0, b = 0.0, c = 0.0, d = 1.0
    cdef long k = 0, kk
    cdef double err, worst = 0.0
    cdef Py_ssize_t i, n = len(ks)
    for i in range(n):
        m = mats[i]
        _compose(a, b, c, d, k, m[0], m[1], m[2], m[3], ks[i], out, &kk, &err)
        a, b, c, d, k = out[0], out[1], out[2], out[3], kk
        if err > worst:
            worst = err
    return a, b, c, d, k, worst
