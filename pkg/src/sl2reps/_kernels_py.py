"""Pure-Python versions of the hot circle-lift kernels.

These mirror ``_ckernels.pyx`` operation for operation so both back ends
return bit-identical results.
"""

from math import atan2, cos, floor, pi, sin


def base_angle(a, c):
    """Direction of the first column, in [0, pi)."""
    ang = atan2(c, a) % pi
    if ang >= pi:
        ang = 0.0
    return ang


def lift_eval(a, b, c, d, k, x):
    """Realized lift of [[a,b],[c,d]] with offset k, evaluated at x."""
    q = floor(x / pi)
    xr = x - q * pi
    cx = cos(xr)
    sx = sin(xr)
    wx = a * cx + b * sx
    wy = c * cx + d * sx
    cross = (a * d - b * c) * sx
    delta = atan2(cross, a * wx + c * wy)
    return base_angle(a, c) + delta + (q + k) * pi


def compose(a, b, c, d, k, e, f, g, h, l):
    """Compose lifts F = (a..d, k) and G = (e..h, l).

    Returns the product entries, the offset and the distance of the winding
    from the nearest integer.
    """
    v = lift_eval(a, b, c, d, k, lift_eval(e, f, g, h, l, 0.0))
    p = a * e + b * g
    q = a * f + b * h
    r = c * e + d * g
    s = c * f + d * h
    w = (v - base_angle(p, r)) / pi
    kk = floor(w + 0.5)
    return p, q, r, s, int(kk), abs(w - kk)


def word_lift(mats, ks):
    """Compose a word of lifts left to right.

    ``mats`` is a sequence of 4-tuples (or an (L, 4) array) and ``ks`` the
    matching offsets.  Returns (a, b, c, d, k, worst winding defect).
    """
    a, b, c, d, k = 1.0, 0.0, 0.0, 1.0, 0
    worst = 0.0
    for i in range(len(ks)):
        m = mats[i]
        a, b, c, d, k, err = compose(a, b, c, d, k, float(m[0]), float(m[1]), float(m[2]), float(m[3]), int(ks[i]))
        if err > worst:
            worst = err
    return a, b, c, d, k, worst
