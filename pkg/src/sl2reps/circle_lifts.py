"""The universal cover of PSL(2, R) as lifted circle maps.

PSL(2, R) acts on the projective line, parametrized by the angle
``x mod pi``.  A :class:`LiftedMap` is a matrix together with an integer
offset ``k``; its realized lift is the map of the real line

    f(x) = f0(x mod pi) + pi*floor(x/pi) + k*pi,

where ``f0`` is the canonical branch with ``f0(0)`` in ``[0, pi)``.  The
generator of the center (the lift of ``-I``) is translation by ``pi``, so a
central element ``z^m`` is ``LiftedMap(I, m)``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from . import kernels
from .errors import EllipticHasNoEulerLift, NonIntegerWinding, NotCentral
from .mat2 import (
    ELLIPTIC,
    IDENTITY,
    Mat2,
    classify,
    direction_angle,
    elliptic_conjugator,
    rotation,
)

WINDING_TOL = 1e-6
CENTRAL_MATRIX_TOL = 1e-6


@dataclass(frozen=True)
class LiftedMap:
    m: Mat2
    k: int = 0

    def __call__(self, x: float) -> float:
        return kernels.lift_eval(self.m.a, self.m.b, self.m.c, self.m.d, self.k, x)

    def __matmul__(self, other: LiftedMap) -> LiftedMap:
        return lift_compose(self, other)

    def shift(self, j: int) -> LiftedMap:
        """Multiply by the central element z^j."""
        return LiftedMap(self.m, self.k + j)


def central_element(m: int) -> LiftedMap:
    """z^m, translation by m*pi."""
    return LiftedMap(IDENTITY, int(m))


def rp1_act(m: Mat2, x: float) -> float:
    """Action of M on the projective line, angles taken mod pi."""
    cx, sx = math.cos(x), math.sin(x)
    return direction_angle(m.a * cx + m.b * sx, m.c * cx + m.d * sx)


def canonical_base(m: Mat2) -> float:
    """f0(0) for the canonical branch: the direction of M e1."""
    return kernels.base_angle(m.a, m.c)


def lift(m: Mat2, mode: str = "canonical", tol: float | None = None) -> LiftedMap:
    """Canonical lift (k = 0) or the fixed-point ("euler") lift of M."""
    if mode == "canonical":
        return LiftedMap(m, 0)
    if mode != "euler":
        raise ValueError(f"unknown lift mode {mode!r}")
    cls = classify(m) if tol is None else classify(m, tol)
    if cls.central:
        return LiftedMap(m, -int(round(canonical_base(m) / math.pi)))
    if cls.kind == ELLIPTIC:
        raise EllipticHasNoEulerLift(f"elliptic element, angle {cls.angle}")
    x0 = cls.fixed_directions[0]
    j = _integer_winding((LiftedMap(m, 0)(x0) - x0) / math.pi)
    return LiftedMap(m, -j)


def _integer_winding(w: float) -> int:
    j = math.floor(w + 0.5)
    if abs(w - j) > WINDING_TOL:
        raise NonIntegerWinding(f"winding {w!r} is not an integer")
    return int(j)


def lift_compose(f: LiftedMap, g: LiftedMap) -> LiftedMap:
    p, q, r, s, k, err = kernels.compose(
        f.m.a, f.m.b, f.m.c, f.m.d, f.k, g.m.a, g.m.b, g.m.c, g.m.d, g.k
    )
    if err > WINDING_TOL:
        raise NonIntegerWinding(f"winding defect {err!r}")
    return LiftedMap(Mat2.raw(p, q, r, s), k)


def compose_word(lifts: Sequence[LiftedMap]) -> LiftedMap:
    """Left-to-right product of lifts in one kernel call."""
    mats = [f.m.entries() for f in lifts]
    ks = [f.k for f in lifts]
    a, b, c, d, k, worst = kernels.word_lift(mats, ks)
    if worst > WINDING_TOL:
        raise NonIntegerWinding(f"winding defect {worst!r}")
    return LiftedMap(Mat2.raw(a, b, c, d), k)


def is_central_matrix(m: Mat2, tol: float = CENTRAL_MATRIX_TOL) -> bool:
    plus = max(abs(m.a - 1), abs(m.b), abs(m.c), abs(m.d - 1))
    minus = max(abs(m.a + 1), abs(m.b), abs(m.c), abs(m.d + 1))
    return min(plus, minus) <= tol


def central_degree(f: LiftedMap, tol: float = CENTRAL_MATRIX_TOL) -> int:
    """m with f equal to translation by m*pi; f must cover the PSL identity."""
    if not is_central_matrix(f.m, tol):
        raise NotCentral(f"underlying matrix {f.m!r} is not +-I")
    return f.k + int(round(canonical_base(f.m) / math.pi))


def lift_inverse(f: LiftedMap) -> LiftedMap:
    g0 = LiftedMap(f.m.inv(), 0)
    return LiftedMap(g0.m, -central_degree(lift_compose(f, g0)))


def lift_commutator(f: LiftedMap, g: LiftedMap) -> LiftedMap:
    return compose_word([f, g, lift_inverse(f), lift_inverse(g)])


def translation_number(f: LiftedMap, tol: float | None = None) -> float:
    """Translation number in units of pi (so z has translation number 1)."""
    m = f.m
    if is_central_matrix(m, 1e-10):
        return float(central_degree(f))
    cls = classify(m) if tol is None else classify(m, tol)
    if cls.central:
        return float(central_degree(f))
    if cls.kind == ELLIPTIC:
        theta = cls.angle
        p = elliptic_conjugator(m, theta)
        lp = LiftedMap(p, 0)
        model = compose_word([lp, LiftedMap(rotation(theta), 0), lift_inverse(lp)])
        offset = _integer_winding((f(0.0) - model(0.0)) / math.pi)
        return (theta % math.pi) / math.pi + offset
    x0 = cls.fixed_directions[0]
    return float(_integer_winding((f(x0) - x0) / math.pi))
