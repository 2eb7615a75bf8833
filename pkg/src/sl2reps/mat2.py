"""Unit-determinant 2x2 matrices, conjugacy classification and normal forms.

A :class:`Mat2` is an immutable row-major quadruple ``(a, b, c, d)``.  The
constructor checks ``det = 1`` with a tolerance scaled by the squared
Frobenius norm, since products of well-conditioned factors can carry large
entries without being any less unimodular than float arithmetic allows.
Products and inverses formed inside the package skip the check.

The module also carries the trace identities used throughout the
constructions, each paired with the direct matrix computation it predicts.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousClass, NotUnimodular

TWO_PI = 2.0 * math.pi
DET_TOL = 1e-12
DEFAULT_TOL = 1e-9
# matrices this close to +-I (max entry) are treated as central
CENTRAL_TOL = 1e-10
# a trace within this (relative) distance of +-2 counts as exactly parabolic
EXACT_PARABOLIC_TOL = 1e-12


class Mat2:
    """Real 2x2 matrix with determinant one."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: float, b: float, c: float, d: float, *, check: bool = True):
        a, b, c, d = float(a), float(b), float(c), float(d)
        if check:
            det = a * d - b * c
            scale = max(1.0, a * a + b * b + c * c + d * d)
            if not abs(det - 1.0) <= DET_TOL * scale:
                raise NotUnimodular(f"det = {det!r} for ({a}, {b}, {c}, {d})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    @classmethod
    def raw(cls, a: float, b: float, c: float, d: float) -> Mat2:
        """Build without the determinant check (internal products)."""
        m = object.__new__(cls)
        object.__setattr__(m, "a", a)
        object.__setattr__(m, "b", b)
        object.__setattr__(m, "c", c)
        object.__setattr__(m, "d", d)
        return m

    @classmethod
    def parse(cls, obj) -> Mat2:
        """Accept ``"a,b,c,d"``, ``[a,b,c,d]``, ``[[a,b],[c,d]]`` or a Mat2."""
        if isinstance(obj, Mat2):
            return obj
        if isinstance(obj, str):
            parts = [p for p in obj.replace(";", ",").split(",") if p.strip()]
            vals = [float(p) for p in parts]
        else:
            arr = np.asarray(obj, dtype=float).reshape(-1)
            vals = [float(v) for v in arr]
        if len(vals) != 4:
            raise ValueError(f"expected four entries, got {len(vals)}")
        return cls(*vals)

    # basic algebra

    def __matmul__(self, other: Mat2) -> Mat2:
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Mat2.raw(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __neg__(self) -> Mat2:
        return Mat2.raw(-self.a, -self.b, -self.c, -self.d)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash(self.entries())

    def __repr__(self) -> str:
        return f"Mat2({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"

    def __iter__(self):
        return iter(self.entries())

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def inv(self) -> Mat2:
        # valid because det = 1
        return Mat2.raw(self.d, -self.b, -self.c, self.a)

    def transpose(self) -> Mat2:
        return Mat2.raw(self.a, self.c, self.b, self.d)

    def tr(self) -> float:
        return self.a + self.d

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def frob2(self) -> float:
        """tr(M^T M), the squared Frobenius norm."""
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def conj(self, p: Mat2) -> Mat2:
        """P M P^-1."""
        return p @ self @ p.inv()

    def max_abs_diff(self, other: Mat2) -> float:
        return max(abs(x - y) for x, y in zip(self.entries(), other.entries()))

    def to_list(self) -> list[list[float]]:
        return [[self.a, self.b], [self.c, self.d]]

    def to_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def act(self, v: tuple[float, float]) -> tuple[float, float]:
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])


IDENTITY = Mat2.raw(1.0, 0.0, 0.0, 1.0)
MINUS_IDENTITY = Mat2.raw(-1.0, 0.0, 0.0, -1.0)


def commutator(x: Mat2, y: Mat2) -> Mat2:
    """[X, Y] = X Y X^-1 Y^-1."""
    return x @ y @ x.inv() @ y.inv()


def product(mats: Iterable[Mat2]) -> Mat2:
    out = IDENTITY
    for m in mats:
        out = out @ m
    return out


# normal forms


def rotation(theta: float) -> Mat2:
    c, s = math.cos(theta), math.sin(theta)
    return Mat2.raw(c, -s, s, c)


def diagonal(lam: float) -> Mat2:
    return Mat2.raw(lam, 0.0, 0.0, 1.0 / lam)


def shear(x: float) -> Mat2:
    return Mat2.raw(1.0, x, 0.0, 1.0)


def lower_shear(x: float) -> Mat2:
    return Mat2.raw(1.0, 0.0, x, 1.0)


def unipotent(sign: int, s: float) -> Mat2:
    """sign * [[1, s], [0, 1]]."""
    return Mat2.raw(float(sign), sign * s, 0.0, float(sign))


PARABOLIC_SIGMAS: tuple[tuple[int, int], ...] = ((1, 0), (-1, 0), (0, 1), (0, -1))


def parabolic_normal_form(sigma: tuple[int, int]) -> Mat2:
    """Normal form with parabolic sigma value ``re + im*i``.

    The matrix is (-1)^(re+1) [[1, im - re], [0, 1]], so that
    ``-1 -> [[1,1],[0,1]]``, ``i -> -[[1,1],[0,1]]`` and so on.
    """
    re, im = sigma
    if (abs(re) + abs(im)) != 1:
        raise ValueError(f"not a parabolic sigma value: {sigma}")
    sign = -1 if (re + 1) % 2 else 1
    return unipotent(sign, float(im - re))


# Iwasawa coordinates


@dataclass(frozen=True)
class IwasawaCoords:
    tau: float
    r: float
    x: float

    def matrix(self) -> Mat2:
        return compose_iwasawa(self.tau, self.r, self.x)


def compose_iwasawa(tau: float, r: float, x: float) -> Mat2:
    """R(tau) diag(r, 1/r) [[1, x], [0, 1]]."""
    c, s = math.cos(tau), math.sin(tau)
    inv_r = 1.0 / r
    # diag(r,1/r) shear(x) = [[r, r x], [0, 1/r]]
    return Mat2.raw(c * r, c * r * x - s * inv_r, s * r, s * r * x + c * inv_r)


def iwasawa(m: Mat2) -> IwasawaCoords:
    r = math.hypot(m.a, m.c)
    tau = math.atan2(m.c, m.a) % TWO_PI
    # first row of R(-tau) M, second column
    ct, st = math.cos(tau), math.sin(tau)
    top_right = ct * m.b + st * m.d
    return IwasawaCoords(tau, r, top_right / r)


def random_sl2(rng: np.random.Generator) -> Mat2:
    """Draw from the package's standard distribution on SL(2, R)."""
    tau = rng.uniform(0.0, TWO_PI)
    log_r = float(np.clip(rng.normal(), -3.0, 3.0))
    x = float(np.clip(rng.normal(), -5.0, 5.0))
    return compose_iwasawa(tau, math.exp(log_r), x)


# classification


ELLIPTIC = "Elliptic"
PARABOLIC = "Parabolic"
HYPERBOLIC = "Hyperbolic"
IDENTITY_KIND = "Identity"
MINUS_IDENTITY_KIND = "MinusIdentity"


@dataclass(frozen=True)
class ConjClass:
    kind: str
    angle: float | None = None
    trace_sign: int | None = None
    shear_sign: int | None = None
    eigenvalue: float | None = None
    fixed_directions: tuple[float, ...] = ()

    @property
    def central(self) -> bool:
        return self.kind in (IDENTITY_KIND, MINUS_IDENTITY_KIND)

    def describe(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.angle is not None:
            out["theta"] = self.angle
        if self.trace_sign is not None:
            out["trace_sign"] = self.trace_sign
        if self.shear_sign is not None:
            out["shear_sign"] = self.shear_sign
        if self.eigenvalue is not None:
            out["eigenvalue"] = self.eigenvalue
        if self.fixed_directions:
            out["fixed_directions"] = list(self.fixed_directions)
        return out


def direction_angle(vx: float, vy: float) -> float:
    """Angle of the line through (vx, vy), in [0, pi)."""
    ang = math.atan2(vy, vx) % math.pi
    return 0.0 if ang >= math.pi else ang


def _sgn(x: float) -> int:
    return 1 if x > 0 else (-1 if x < 0 else 0)


def _kernel_direction(p: float, q: float, r: float, s: float) -> float:
    """Direction killed by [[p, q], [r, s]] (rank one), read off the larger row."""
    if p * p + q * q >= r * r + s * s:
        return direction_angle(q, -p)
    return direction_angle(s, -r)


def classify(m: Mat2, tol: float = DEFAULT_TOL) -> ConjClass:
    t = m.a + m.d
    band = tol * max(1.0, abs(t))
    gap = abs(t) - 2.0
    if abs(gap) < band:
        eps = 1 if t > 0 else -1
        n12, n21 = eps * m.b, eps * m.c
        n11, n22 = eps * m.a - 1.0, eps * m.d - 1.0
        nmax = max(abs(n11), abs(n12), abs(n21), abs(n22))
        if nmax <= CENTRAL_TOL:
            if eps > 0:
                return ConjClass(IDENTITY_KIND, angle=0.0)
            return ConjClass(MINUS_IDENTITY_KIND, angle=math.pi)
        exact = min(band, EXACT_PARABOLIC_TOL * max(1.0, m.frob2()))
        if abs(gap) > exact or nmax < math.sqrt(CENTRAL_TOL):
            raise AmbiguousClass(f"trace {t!r} within {tol} of +-2")
        if abs(n12) >= abs(n21):
            s = _sgn(n12)
        else:
            s = -_sgn(n21)
        fixed = _kernel_direction(n11, n12, n21, n22)
        return ConjClass(PARABOLIC, trace_sign=eps, shear_sign=s, fixed_directions=(fixed,))
    if gap < 0:
        base = math.acos(max(-1.0, min(1.0, t / 2.0)))
        theta = base if (m.c - m.b) > 0 else TWO_PI - base
        return ConjClass(ELLIPTIC, angle=theta)
    eps = 1 if t > 0 else -1
    lam = (t + eps * math.sqrt(t * t - 4.0)) / 2.0
    dirs = []
    for mu in (lam, 1.0 / lam):
        dirs.append(_kernel_direction(m.a - mu, m.b, m.c, m.d - mu))
    return ConjClass(HYPERBOLIC, trace_sign=eps, eigenvalue=lam, fixed_directions=tuple(dirs))


def elliptic_conjugator(m: Mat2, theta: float) -> Mat2:
    """P with det P = 1 and P R(theta) P^-1 = M, for elliptic M of angle theta.

    The first column is e1, the second (M e1 - cos(theta) e1)/sin(theta),
    then the whole matrix is rescaled to unit determinant.
    """
    st = math.sin(theta)
    p12 = (m.a - math.cos(theta)) / st
    p22 = m.c / st
    det = p22  # det of [[1, p12], [0, p22]]
    if det <= 0:
        raise AmbiguousClass("elliptic angle inconsistent with rotation direction")
    k = 1.0 / math.sqrt(det)
    return Mat2.raw(k, p12 * k, 0.0, p22 * k)


# trace identities: each returns (lhs, rhs) for random parameters


def _random_angle(rng) -> float:
    return rng.uniform(0.0, TWO_PI)


def _identity_rotation_conjugate(rng) -> tuple[float, float]:
    theta, theta1 = _random_angle(rng), _random_angle(rng)
    p = random_sl2(rng)
    lhs = (rotation(theta) @ rotation(theta1).conj(p)).tr()
    s = p.frob2()
    rhs = 2 * math.cos(theta) * math.cos(theta1) - s * math.sin(theta) * math.sin(theta1)
    return lhs, rhs


def _identity_diagonal_commutator(rng) -> tuple[float, float]:
    lam = math.exp(rng.uniform(-2.0, 2.0)) * (1 if rng.random() < 0.5 else -1)
    beta = random_sl2(rng)
    lhs = commutator(diagonal(lam), beta).tr()
    rhs = 2 - beta.b * beta.c * (lam - 1 / lam) ** 2
    return lhs, rhs


def _identity_rotation_commutator(rng) -> tuple[float, float]:
    theta = _random_angle(rng)
    beta = random_sl2(rng)
    lhs = commutator(rotation(theta), beta).tr()
    rhs = 2 + (beta.frob2() - 2) * math.sin(theta) ** 2
    return lhs, rhs


def _identity_unipotent_commutator(rng) -> tuple[float, float]:
    sign = 1 if rng.random() < 0.5 else -1
    s = rng.normal() * 2
    beta = random_sl2(rng)
    lhs = commutator(unipotent(sign, s), beta).tr()
    rhs = 2 + s * s * beta.c * beta.c
    return lhs, rhs


def _identity_cosine_form(rng) -> tuple[float, float]:
    lam = math.exp(rng.uniform(-2.0, 2.0))
    theta = _random_angle(rng)
    p, p2 = random_sl2(rng), random_sl2(rng)
    lhs = (diagonal(lam).conj(p) @ rotation(theta).conj(p2)).tr()
    q = p.inv() @ p2
    amp_c = lam + 1 / lam
    amp_s = (lam - 1 / lam) * (q.a * q.c + q.b * q.d)
    amplitude = math.hypot(amp_c, amp_s)
    phase = math.atan2(amp_s, amp_c)
    rhs = amplitude * math.cos(theta - phase)
    return lhs, rhs


def _identity_hyperbolic_pants(rng) -> tuple[float, float]:
    a1, a2 = int(rng.integers(2)), int(rng.integers(2))
    lam = math.exp(rng.uniform(-2.0, 2.0))
    q = random_sl2(rng)
    c1 = diagonal(lam) if a1 == 1 else -diagonal(lam)
    c2 = q if a2 == 1 else -q
    lhs = (c1 @ c2).tr()
    rhs = (-1) ** (a1 + a2) * (lam * (q.a + q.d) + q.d * (1 / lam - lam))
    return lhs, rhs


def _identity_parabolic_product(rng) -> tuple[float, float]:
    # checks every entry; the residual reported is the worst entry
    sig1 = PARABOLIC_SIGMAS[int(rng.integers(4))]
    sig2 = PARABOLIC_SIGMAS[int(rng.integers(4))]
    c1, c2 = parabolic_normal_form(sig1), parabolic_normal_form(sig2)
    s = c1.b * c1.a  # shear of c1 itself
    mu = c2.b * c2.a
    p = random_sl2(rng)
    lhs = c1 @ c2.conj(p)
    a, c = p.a, p.c
    sign = (-1) ** (sig1[0] + sig2[0])
    rhs = Mat2.raw(
        sign * (1 - mu * a * c - mu * s * c * c),
        sign * (s + mu * a * a + mu * s * a * c),
        sign * (-mu * c * c),
        sign * (1 + mu * a * c),
    )
    err = lhs.max_abs_diff(rhs)
    return err, 0.0


def _identity_parabolic_trace(rng) -> tuple[float, float]:
    sig2 = PARABOLIC_SIGMAS[int(rng.integers(4))]
    c1 = random_sl2(rng)
    c2 = parabolic_normal_form(sig2)
    s2 = c2.b * c2.a
    lhs = (c1 @ c2).tr()
    rhs = (-1) ** (sig2[0] + 1) * (c1.a + c1.d + c1.c * s2)
    return lhs, rhs


TRACE_IDENTITIES: dict[str, Callable] = {
    "rotation_conjugate_trace": _identity_rotation_conjugate,
    "diagonal_commutator_trace": _identity_diagonal_commutator,
    "rotation_commutator_trace": _identity_rotation_commutator,
    "unipotent_commutator_trace": _identity_unipotent_commutator,
    "cosine_form_trace": _identity_cosine_form,
    "hyperbolic_pants_trace": _identity_hyperbolic_pants,
    "parabolic_pants_product": _identity_parabolic_product,
    "parabolic_normal_form_trace": _identity_parabolic_trace,
}

IDENTITY_THRESHOLD = 1e-9


def trace_identities(sample_count: int, rng: np.random.Generator | int) -> dict[str, dict]:
    """Evaluate every identity on ``sample_count`` random draws.

    Returns ``{name: {"max_residual": float, "passed": bool}}``.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be positive")
    rng = np.random.default_rng(rng)
    report = {}
    for name, fn in TRACE_IDENTITIES.items():
        worst = 0.0
        for _ in range(sample_count):
            lhs, rhs = fn(rng)
            worst = max(worst, abs(lhs - rhs))
        report[name] = {"max_residual": worst, "passed": worst < IDENTITY_THRESHOLD}
    return report


def as_mats(seq: Sequence) -> list[Mat2]:
    return [Mat2.parse(m) for m in seq]
