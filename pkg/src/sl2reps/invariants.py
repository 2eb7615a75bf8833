"""Rho, Toledo, relative Euler class, signature and sigma vectors.

Conventions.  Boundary images are lifted canonically to the universal
cover; with ``z^m`` the lifted relator,

    T = sum_j rot(C_j) - m,

where ``rot`` is the translation number in units of pi (one full turn of
the projective line is ``z``).  With this orientation the signature
``2T + rho`` comes out an integer and a rotation by an angle in
``(0, pi)`` around a punctured torus boundary has positive Toledo
invariant.  The relative Euler class uses fixed-point lifts instead, which
have translation number zero, so it equals ``-m`` for that product.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from .circle_lifts import (
    LiftedMap,
    central_degree,
    compose_word,
    lift,
    lift_inverse,
    translation_number,
)
from .errors import (
    CentralBoundary,
    EllipticBoundary,
    IntegralityViolation,
    NotARepresentation,
)
from .mat2 import (
    DEFAULT_TOL,
    ELLIPTIC,
    HYPERBOLIC,
    IDENTITY_KIND,
    MINUS_IDENTITY_KIND,
    PARABOLIC,
    ConjClass,
    Mat2,
    classify,
    commutator,
)

INTEGER_TOL = 1e-6
RELATION_TOL = 1e-9


def check_integer(value: float, what: str) -> int:
    k = round(value)
    if abs(value - k) > INTEGER_TOL:
        raise IntegralityViolation(f"{what} = {value!r} is not an integer")
    return int(k)


def relation_residual(rep) -> float:
    prod = Mat2.raw(1.0, 0.0, 0.0, 1.0)
    for a, b in zip(rep.A, rep.B):
        prod = prod @ commutator(a, b)
    for c in rep.C:
        prod = prod @ c
    return max(abs(prod.a - 1), abs(prod.b), abs(prod.c), abs(prod.d - 1))


def _require_rep(rep, tol: float) -> None:
    res = relation_residual(rep)
    if not res < tol:
        raise NotARepresentation(f"relation residual {res:.3g} exceeds {tol:g}")


# boundary data


@dataclass(frozen=True)
class Boundary:
    """Per-boundary classification: family tag, sigma value, rho, shear."""

    family: str
    cls: ConjClass
    sigma: int | tuple[int, int] | None
    rho: float
    s: int | None = None


def rho_element(m: Mat2, tol: float = DEFAULT_TOL) -> float:
    return _rho_of_class(classify(m, tol))


def _rho_of_class(cls: ConjClass) -> float:
    if cls.kind == ELLIPTIC:
        return 2.0 * (1.0 - cls.angle / math.pi)
    if cls.kind == PARABOLIC and cls.trace_sign > 0:
        return float(-cls.shear_sign)
    return 0.0


def boundary_datum(m: Mat2, tol: float = DEFAULT_TOL) -> Boundary:
    cls = classify(m, tol)
    rho = _rho_of_class(cls)
    if cls.kind == ELLIPTIC:
        return Boundary("elliptic", cls, 1 if cls.angle > math.pi else -1, rho)
    if cls.kind == HYPERBOLIC:
        return Boundary("hyperbolic", cls, 1 if cls.trace_sign > 0 else 0, rho)
    if cls.kind == PARABOLIC:
        s = cls.shear_sign
        sigma = (-s, 0) if cls.trace_sign > 0 else (0, s)
        return Boundary("parabolic", cls, sigma, rho, s)
    if cls.kind == MINUS_IDENTITY_KIND:
        # the elliptic-unipotent closure point theta = pi
        return Boundary("minusIdentity", cls, 0, 0.0)
    return Boundary("identity", cls, None, 0.0)


def sigma_s_value(sigma: tuple[int, int]) -> int:
    """s = Im(a) - Re(a) for a parabolic sigma value a."""
    return sigma[1] - sigma[0]


def boundary_family(data: Sequence[Boundary]) -> str:
    kinds = {b.family for b in data}
    if not data:
        return "closed"
    if kinds == {"elliptic"}:
        return "elliptic"
    if kinds <= {"elliptic", "minusIdentity"}:
        return "ellipticUnipotent"
    if kinds == {"hyperbolic"}:
        return "hyperbolic"
    if kinds == {"parabolic"}:
        return "parabolic"
    return "mixed"


def sigma_vector(rep, tol: float = DEFAULT_TOL) -> tuple[list, list[int] | None]:
    """Sigma values per boundary, plus the s-vector when all are parabolic."""
    data = [boundary_datum(c, tol) for c in rep.C]
    for j, b in enumerate(data):
        if b.family == "identity":
            raise CentralBoundary(f"boundary {j} is the identity")
    svals = [b.s for b in data] if data and all(b.family == "parabolic" for b in data) else None
    return [b.sigma for b in data], svals


# Toledo and Euler class


def _relator_degree(rep, boundary_lifts: Sequence[LiftedMap]) -> int:
    word: list[LiftedMap] = []
    for a, b in zip(rep.A, rep.B):
        la, lb = LiftedMap(a, 0), LiftedMap(b, 0)
        word += [la, lb, lift_inverse(la), lift_inverse(lb)]
    word += list(boundary_lifts)
    return central_degree(compose_word(word))


def toledo(rep, offsets: Sequence[int] | None = None, tol: float = RELATION_TOL) -> float:
    """Toledo invariant from canonical boundary lifts.

    ``offsets`` shifts the boundary lifts by central elements; the result
    does not depend on them.
    """
    _require_rep(rep, tol)
    lifts = [LiftedMap(c, 0) for c in rep.C]
    if offsets is not None:
        lifts = [f.shift(int(k)) for f, k in zip(lifts, offsets)]
    m = _relator_degree(rep, lifts)
    return sum(translation_number(f) for f in lifts) - m


def relative_euler(rep, tol: float = RELATION_TOL) -> int:
    _require_rep(rep, tol)
    lifts = []
    for j, c in enumerate(rep.C):
        cls = classify(c)
        if cls.kind == ELLIPTIC:
            raise EllipticBoundary(f"boundary {j} is elliptic")
        lifts.append(lift(c, "euler"))
    e = -_relator_degree(rep, lifts)
    t = toledo(rep, tol=tol)
    if abs(t - e) > INTEGER_TOL:
        raise IntegralityViolation(f"relative Euler class {e} differs from Toledo {t!r}")
    return e


def total_rho(rep, tol: float = DEFAULT_TOL) -> float:
    return sum(boundary_datum(c, tol).rho for c in rep.C)


def signature(rep, tol: float = RELATION_TOL) -> int:
    return check_integer(2.0 * toledo(rep, tol=tol) + total_rho(rep), "2T + rho")


# full record


def euler_characteristic(g: int, n: int) -> int:
    return 2 - 2 * g - n


@dataclass
class InvariantRecord:
    toledo: float
    rho: float
    signature: int
    sigma: list
    family: str
    s: list[int] | None = None
    psl_signature: int | None = None
    mw_slack: tuple[float, int] = (0.0, 0)
    psl_bounds: tuple[int, int] | None = None
    boundary_families: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        def enc(v):
            return list(v) if isinstance(v, tuple) else v

        out = {
            "toledo": self.toledo,
            "rho": self.rho,
            "signature": self.signature,
            "sigma": [enc(v) for v in self.sigma],
            "s": self.s,
            "psl_signature": self.psl_signature,
            "mw_slack": list(self.mw_slack),
            "family": self.family,
        }
        if self.family == "mixed":
            out["boundary_families"] = self.boundary_families
        if self.psl_bounds is not None:
            out["psl_bounds"] = list(self.psl_bounds)
        return out

    @property
    def psl_bounds_hold(self) -> bool:
        if self.psl_bounds is None:
            return True
        lo, hi = self.psl_bounds
        return lo - INTEGER_TOL <= self.toledo <= hi + INTEGER_TOL


def invariant_record(rep, tol: float = RELATION_TOL) -> InvariantRecord:
    data = [boundary_datum(c) for c in rep.C]
    t = toledo(rep, tol=tol)
    rho = sum(b.rho for b in data)
    sign = check_integer(2.0 * t + rho, "2T + rho")
    family = boundary_family(data)
    chi = abs(euler_characteristic(rep.g, rep.n))
    rec = InvariantRecord(
        toledo=t,
        rho=rho,
        signature=sign,
        sigma=[b.sigma for b in data],
        family=family,
        mw_slack=(chi - abs(t), 2 * chi - abs(sign)),
        boundary_families=[b.family for b in data],
    )
    if family == "elliptic":
        frac = sum((b.cls.angle % math.pi) / math.pi for b in data)
        rec.psl_signature = check_integer(2.0 * t + 2.0 * (rep.n - frac), "PSL signature")
    if family == "parabolic":
        rec.s = [b.s for b in data]
        if rep.g >= 1:
            s_plus = sum(1 for s in rec.s if s > 0)
            s_minus = rep.n - s_plus
            rec.psl_bounds = (-chi + s_plus, chi - s_minus)
    return rec
