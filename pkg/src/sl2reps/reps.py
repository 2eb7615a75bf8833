"""Surface-group representations: containers, builders and samplers.

A representation of the fundamental group of a genus ``g`` surface with
``n`` boundary circles is stored by the images ``A_i, B_i`` of the handle
generators and ``C_j`` of the boundary loops, subject to

    [A_1, B_1] ... [A_g, B_g] C_1 ... C_n = I,     [X, Y] = X Y X^-1 Y^-1,

read left to right.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousClass,
    BudgetExhausted,
    CentralBoundary,
    CentralCommutator,
    CentralCut,
    InfeasibleBranch,
    InfeasibleSigma,
    NotARepresentation,
    NotRealizable,
    PreconditionViolated,
    SumNotMultipleOf2Pi,
)
from .invariants import RELATION_TOL, relation_residual
from .mat2 import (
    ELLIPTIC,
    HYPERBOLIC,
    IDENTITY,
    MINUS_IDENTITY,
    PARABOLIC,
    PARABOLIC_SIGMAS,
    TWO_PI,
    Mat2,
    classify,
    commutator,
    compose_iwasawa,
    diagonal,
    iwasawa,
    parabolic_normal_form,
    product,
    rotation,
)

FAMILIES = ("elliptic", "ellipticUnipotent", "hyperbolic", "parabolic", "HP")


@dataclass(frozen=True)
class SurfaceRep:
    g: int
    n: int
    A: tuple[Mat2, ...]
    B: tuple[Mat2, ...]
    C: tuple[Mat2, ...]

    def __post_init__(self):
        if len(self.A) != self.g or len(self.B) != self.g or len(self.C) != self.n:
            raise ValueError("generator counts do not match (g, n)")
        if self.g < 0 or self.n < 0 or self.g + self.n < 1:
            raise ValueError("need g, n >= 0 and g + n >= 1")

    @classmethod
    def make(cls, g: int, n: int, A: Iterable, B: Iterable, C: Iterable) -> SurfaceRep:
        return cls(g, n, tuple(Mat2.parse(m) for m in A), tuple(Mat2.parse(m) for m in B),
                   tuple(Mat2.parse(m) for m in C))

    @property
    def chi(self) -> int:
        return 2 - 2 * self.g - self.n

    def residual(self) -> float:
        return relation_residual(self)

    def conjugate(self, p: Mat2) -> SurfaceRep:
        q = p.inv()
        f = lambda m: p @ m @ q  # noqa: E731
        return SurfaceRep(self.g, self.n, tuple(map(f, self.A)), tuple(map(f, self.B)),
                          tuple(map(f, self.C)))

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "n": self.n,
            "A": [m.to_list() for m in self.A],
            "B": [m.to_list() for m in self.B],
            "C": [m.to_list() for m in self.C],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> SurfaceRep:
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.make(int(obj["g"]), int(obj["n"]), obj.get("A", []), obj.get("B", []),
                        obj.get("C", []))


def validate(rep: SurfaceRep, tol: float = RELATION_TOL) -> dict:
    """Diagnostics: relation residual and worst determinant error."""
    mats = list(rep.A) + list(rep.B) + list(rep.C)
    det_err = max((abs(m.det() - 1.0) for m in mats), default=0.0)
    res = relation_residual(rep)
    return {"residual": res, "det_error": det_err, "valid": bool(res < tol)}


def close_up(g: int, A: Sequence[Mat2], B: Sequence[Mat2], c_partial: Sequence[Mat2]) -> SurfaceRep:
    """Complete a representation by solving the relation for the last boundary."""
    prod = IDENTITY
    for a, b in zip(A, B):
        prod = prod @ commutator(a, b)
    for c in c_partial:
        prod = prod @ c
    C = tuple(c_partial) + (prod.inv(),)
    return SurfaceRep(g, len(C), tuple(A), tuple(B), C)


# random ingredients


def random_conjugator(rng: np.random.Generator) -> Mat2:
    """A tamer version of the standard random matrix, for sampler conjugations.

    Bounded conditioning keeps relation residuals of closed-up products well
    below the validity threshold.
    """
    tau = rng.uniform(0.0, TWO_PI)
    log_r = float(np.clip(rng.normal(0.0, 0.5), -1.5, 1.5))
    x = float(np.clip(rng.normal(), -2.0, 2.0))
    return compose_iwasawa(tau, math.exp(log_r), x)


def random_handle_matrix(rng: np.random.Generator) -> Mat2:
    return random_conjugator(rng) @ diagonal(math.exp(rng.normal(0.0, 0.6))) @ random_conjugator(rng).inv()


ANGLE_MARGIN = 1e-3


def random_elliptic(rng: np.random.Generator) -> Mat2:
    while True:
        theta = rng.uniform(ANGLE_MARGIN, TWO_PI - ANGLE_MARGIN)
        if abs(theta - math.pi) > ANGLE_MARGIN:
            break
    return rotation(theta).conj(random_conjugator(rng))


def random_hyperbolic(rng: np.random.Generator, sign: int | None = None) -> Mat2:
    lam = math.exp(rng.uniform(0.15, 1.5))
    if sign is None:
        sign = 1 if rng.random() < 0.5 else -1
    return (diagonal(lam) if sign > 0 else -diagonal(lam)).conj(random_conjugator(rng))


def random_parabolic(rng: np.random.Generator, sigma: tuple[int, int] | None = None) -> Mat2:
    if sigma is None:
        sigma = PARABOLIC_SIGMAS[int(rng.integers(4))]
    return parabolic_normal_form(sigma).conj(random_conjugator(rng))


# Goldman trace coordinates


@dataclass(frozen=True)
class TraceCoords:
    x: float
    y: float
    z: float

    @property
    def kappa(self) -> float:
        return kappa(self.x, self.y, self.z)


def kappa(x: float, y: float, z: float) -> float:
    """Trace of the commutator of a pair with traces (x, y) and tr(XY) = z."""
    return x * x + y * y + z * z - x * y * z - 2.0


def trace_coords(X: Mat2, Y: Mat2) -> TraceCoords:
    return TraceCoords(X.tr(), Y.tr(), (X @ Y).tr())


def is_realizable(x: float, y: float, z: float) -> bool:
    return kappa(x, y, z) >= 2.0 or max(abs(x), abs(y), abs(z)) >= 2.0


def _solve_with_companion(x: float, y: float, z: float, prev: Mat2 | None):
    """Y with tr Y = y, tr(XY) = z for X = [[x, -1], [1, 0]], or None."""
    lead = x * x - 4.0
    lin = 4.0 * y - 2.0 * x * z
    const = z * z - 4.0

    def disc(p):
        return lead * p * p + lin * p + const

    if abs(lead) < 1e-14:
        if abs(lin) < 1e-14:
            if const < 0:
                return None
            p = 0.0
        else:
            p = max(0.0, -const / lin) + 1.0 if lin > 0 else min(0.0, -const / lin) - 1.0
    else:
        vertex = -lin / (2.0 * lead)
        if lead < 0:
            p = vertex
        else:
            lowest = disc(vertex)
            p = vertex + math.sqrt(max(0.0, -lowest) / lead) + 1.0
    dd = disc(p)
    if dd < 0:
        if dd > -1e-12:
            dd = 0.0
        else:
            return None
    root = math.sqrt(dd)
    candidates = []
    for q in ((z - x * p + root) / 2.0, (z - x * p - root) / 2.0):
        s = y - p
        r = x * p + q - z
        candidates.append(Mat2.raw(p, q, r, s))
    if prev is not None:
        return min(candidates, key=lambda m: m.max_abs_diff(prev))
    return candidates[0]


def solve_chi(t: TraceCoords | Sequence[float], prev: tuple[Mat2, Mat2] | None = None) -> tuple[Mat2, Mat2]:
    """A pair (X, Y) with (tr X, tr Y, tr XY) = t.

    The closed-form solution needs one trace of absolute value at least 2 to
    act as the companion matrix, or kappa >= 2 when all three are small.
    ``prev`` selects the root branch nearest a previous solution.
    """
    if not isinstance(t, TraceCoords):
        t = TraceCoords(*map(float, t))
    x, y, z = t.x, t.y, t.z
    if not is_realizable(x, y, z):
        raise NotRealizable(f"kappa = {kappa(x, y, z)!r} < 2 with all traces in (-2, 2)")
    px = prev[1] if prev is not None else None
    if abs(x) >= 2.0 or max(abs(y), abs(z)) < 2.0:
        yy = _solve_with_companion(x, y, z, px)
        if yy is not None:
            return Mat2.raw(x, -1.0, 1.0, 0.0), yy
    if abs(y) >= 2.0:
        xx = _solve_with_companion(y, x, z, None)
        if xx is not None:
            return xx, Mat2.raw(y, -1.0, 1.0, 0.0)
    # companion V with trace z: solve for (V, U) with traces (z, x, xz - y)
    uu = _solve_with_companion(z, x, x * z - y, None)
    if uu is None and abs(abs(z) - 2.0) < 1e-12 and abs(y - (x if z > 0 else -x)) < 1e-12:
        # XY = +-I; the companion of trace +-2 is parabolic and misses it
        xx = Mat2.raw(x, -1.0, 1.0, 0.0)
        return xx, xx.inv() if z > 0 else -xx.inv()
    if uu is None:
        raise NotRealizable(f"no real solution for {t}")
    v = Mat2.raw(z, -1.0, 1.0, 0.0)
    return uu, uu.inv() @ v


def _conjugator(k: Mat2, z: Mat2) -> Mat2 | None:
    """G with det 1 and G K G^-1 = Z, if one with positive determinant exists."""
    # G K - Z G = 0 as a linear map on the entries of G
    ka, kb, kc, kd = k.entries()
    za, zb, zc, zd = z.entries()
    mat = np.array([
        [ka - za, kc, -zb, 0.0],
        [kb, kd - za, 0.0, -zb],
        [-zc, 0.0, ka - zd, kc],
        [0.0, -zc, kb, kd - zd],
    ])
    _, _, vt = np.linalg.svd(mat)
    g1, g2 = vt[-1], vt[-2]
    best, best_det = None, 0.0
    for phi in np.linspace(0.0, math.pi, 73):
        v = math.cos(phi) * g1 + math.sin(phi) * g2
        det = v[0] * v[3] - v[1] * v[2]
        if det > best_det:
            best, best_det = v, det
    if best is None or best_det < 1e-12:
        return None
    sc = 1.0 / math.sqrt(best_det)
    return Mat2.raw(best[0] * sc, best[1] * sc, best[2] * sc, best[3] * sc)


FLIP = Mat2.raw(1.0, 0.0, 0.0, -1.0)  # det -1; conjugation is an automorphism


def _flip(m: Mat2) -> Mat2:
    return Mat2.raw(m.a, -m.b, -m.c, m.d)


def solve_commutator(z: Mat2, rng: np.random.Generator, budget: int = 1000) -> tuple[Mat2, Mat2]:
    """(A, B) with [A, B] = Z, for non-central Z, with A hyperbolic."""
    cz = classify(z)
    if cz.central:
        raise CentralCommutator("target commutator is central")
    t = z.tr()
    for _ in range(budget):
        x = rng.uniform(2.2, 4.0) * (1 if rng.random() < 0.5 else -1)
        y = rng.uniform(2.2, 4.0) * (1 if rng.random() < 0.5 else -1)
        disc = (x * y) ** 2 - 4.0 * (x * x + y * y - 2.0 - t)
        if disc < 0:
            continue
        zz = (x * y + (1 if rng.random() < 0.5 else -1) * math.sqrt(disc)) / 2.0
        X, Y = solve_chi(TraceCoords(x, y, zz))
        if max(abs(e) for e in X.entries() + Y.entries()) > 1e3:
            continue
        k = commutator(X, Y)
        try:
            ck = classify(k)
        except AmbiguousClass:
            continue
        if ck.kind != cz.kind:
            continue
        g = _conjugator(k, z)
        if g is None:
            X, Y = _flip(X), _flip(Y)
            g = _conjugator(commutator(X, Y), z)
            if g is None:
                continue
        A, B = X.conj(g), Y.conj(g)
        if commutator(A, B).max_abs_diff(z) < 1e-10 * max(1.0, math.sqrt(z.frob2())):
            return A, B
    raise BudgetExhausted("could not realize the commutator target")


# constructive families


def so2_rep(g: int, thetas: Sequence[float], rng: np.random.Generator | None = None) -> SurfaceRep:
    """Boundary rotations R(theta_j); handles commute (identity unless rng given)."""
    thetas = [float(t) for t in thetas]
    total = sum(thetas)
    k = round(total / TWO_PI)
    if abs(total - k * TWO_PI) > 1e-9:
        raise SumNotMultipleOf2Pi(f"angles sum to {total!r}")
    for t in thetas:
        if not 0.0 < t < TWO_PI:
            raise PreconditionViolated(f"angle {t!r} outside (0, 2pi)")
        if abs(t - math.pi) < 1e-12:
            raise CentralBoundary("angle pi gives boundary -I")
    C = [rotation(t) for t in thetas]
    if C:
        # absorb rounding so the relation holds to machine precision
        C[-1] = product(C[:-1]).inv()
    if rng is None:
        A = B = (IDENTITY,) * g
    else:
        A = tuple(rotation(rng.uniform(0, TWO_PI)) for _ in range(g))
        B = tuple(rotation(rng.uniform(0, TWO_PI)) for _ in range(g))
    return SurfaceRep(g, len(C), A, B, tuple(C))


def pants_hyp(a: Sequence[int], lam: float = 0.5, trace2: float = 3.0, target: float = 3.0,
              branch: int = 1, c_mag: float = 1.0) -> SurfaceRep:
    """Hyperbolic-boundary pants with prescribed sigma vector ``a``.

    C1 = (-1)^(a1+1) diag(lam, 1/lam), C2 = (-1)^(a2+1) Q with tr Q = trace2,
    and |tr(C1 C2)| = target.  ``branch`` is the sign of Q_21; it selects
    between the two components when the sigma sum is even.
    """
    a = tuple(int(v) for v in a)
    if len(a) != 3 or any(v not in (0, 1) for v in a):
        raise InfeasibleSigma(f"sigma vector {a} must be in {{0,1}}^3")
    if not 0.0 < lam < 1.0:
        raise InfeasibleSigma("lam must lie in (0, 1)")
    if trace2 <= 2.0 or target <= 2.0 or c_mag <= 0:
        raise InfeasibleSigma("traces must exceed 2 and c_mag must be positive")
    big_x = target if sum(a) % 2 == 1 else -target
    qd = (big_x - lam * trace2) / (1.0 / lam - lam)
    qa = trace2 - qd
    qc = c_mag if branch >= 0 else -c_mag
    qb = (qa * qd - 1.0) / qc
    c1 = diagonal(lam) if a[0] == 1 else -diagonal(lam)
    q = Mat2.raw(qa, qb, qc, qd)
    c2 = q if a[1] == 1 else -q
    return close_up(0, (), (), (c1, c2))


PANTS_PAR_BRANCHES = ("c0-small", "c0-large", "c2")


def pants_par(a1: tuple[int, int], a2: tuple[int, int], branch: str, pa: float | None = None) -> SurfaceRep:
    """Parabolic-boundary pants C1 = Phi(a1), C2 = P Phi(a2) P^-1.

    ``branch`` picks P: lower-left entry 0 with first entry below or above 1
    ("c0-small", "c0-large"), or lower-left entry 2 ("c2", needs s1*s2 = 1).
    """
    c1 = parabolic_normal_form(a1)
    phi2 = parabolic_normal_form(a2)
    s = a1[1] - a1[0]
    mu = a2[1] - a2[0]
    if branch in ("c0-small", "c0-large"):
        if pa is None:
            pa = 0.5 if branch == "c0-small" else 2.0
        if abs(s + mu * pa * pa) < 1e-12:
            raise InfeasibleBranch("product is the identity")
        p = Mat2.raw(pa, 0.0, 0.0, 1.0 / pa)
    elif branch == "c2":
        if mu * s != 1:
            raise InfeasibleBranch("lower-left entry 2 needs equal shear signs")
        if pa is None:
            pa = 1.0
        p = Mat2.raw(pa, 0.0, 2.0, 1.0 / pa)
    else:
        raise InfeasibleBranch(f"unknown branch {branch!r}")
    return close_up(0, (), (), (c1, phi2.conj(p)))


def torus_rep(lam: float, beta: Mat2) -> SurfaceRep:
    A = diagonal(lam)
    B = Mat2.parse(beta)
    k = commutator(A, B)
    if max(abs(k.a - 1), abs(k.b), abs(k.c), abs(k.d - 1)) < 1e-10 or \
            max(abs(k.a + 1), abs(k.b), abs(k.c), abs(k.d + 1)) < 1e-10:
        raise CentralCommutator("[A, B] is central")
    return SurfaceRep(1, 1, (A,), (B,), (k.inv(),))


def hyperbolic_normalizer(a: Mat2) -> Mat2:
    """P with det 1 and P^-1 A P = diag(lam, 1/lam), |lam| > 1."""
    cls = classify(a)
    if cls.kind != HYPERBOLIC:
        raise PreconditionViolated("handle generator is not hyperbolic")
    lam = cls.eigenvalue
    cols = []
    for mu in (lam, 1.0 / lam):
        r1 = (mu - a.d, a.c)
        r2 = (a.b, mu - a.a)
        cols.append(r1 if r1[0] ** 2 + r1[1] ** 2 >= r2[0] ** 2 + r2[1] ** 2 else r2)
    (p, r), (q, s) = cols
    det = p * s - q * r
    if det < 0:
        q, s, det = -q, -s, -det
    k = 1.0 / math.sqrt(det)
    return Mat2.raw(p * k, q * k, r * k, s * k)


def torus_sublabel(A: Mat2, B: Mat2) -> tuple[int, int, int]:
    """(sgn lam, sgn tr beta, sgn beta_21) after normalizing A = diag(lam, 1/lam), |lam| > 1."""
    p = hyperbolic_normalizer(A)
    lam = (p.inv() @ A @ p).a
    beta = p.inv() @ B @ p
    sg = lambda v: 1 if v > 0 else -1  # noqa: E731
    return (sg(lam), sg(beta.tr()), sg(beta.c))


# twists and surgery


def mu_flip(rep: SurfaceRep, i: int, j: int) -> SurfaceRep:
    """Multiply boundary images C_i and C_j (0-based) by -I."""
    if i == j:
        raise ValueError("mu flip needs two distinct boundaries")
    C = list(rep.C)
    C[i], C[j] = -C[i], -C[j]
    return SurfaceRep(rep.g, rep.n, rep.A, rep.B, tuple(C))


def handle_flip(rep: SurfaceRep, which: str, i: int) -> SurfaceRep:
    """Multiply A_i or B_i by -I; commutators are unchanged."""
    A, B = list(rep.A), list(rep.B)
    if which == "A":
        A[i] = -A[i]
    elif which == "B":
        B[i] = -B[i]
    else:
        raise ValueError("which must be 'A' or 'B'")
    return SurfaceRep(rep.g, rep.n, tuple(A), tuple(B), rep.C)


def group_twist(rep: SurfaceRep, twist) -> SurfaceRep:
    """Apply ``("mu", i, j)``, ``("A", i)`` or ``("B", i)``, or a list of them."""
    if twist and isinstance(twist[0], (tuple, list)):
        for t in twist:
            rep = group_twist(rep, t)
        return rep
    kind = twist[0]
    if kind == "mu":
        return mu_flip(rep, twist[1], twist[2])
    return handle_flip(rep, kind, twist[1])


def reverse_orientation(rep: SurfaceRep) -> SurfaceRep:
    g = rep.g
    A = tuple(rep.B[g - 1 - i] for i in range(g))
    B = tuple(rep.A[g - 1 - i] for i in range(g))
    C = tuple(c.inv() for c in reversed(rep.C))
    return SurfaceRep(g, rep.n, A, B, C)


def split_standard(rep: SurfaceRep, cut_index: int) -> tuple[SurfaceRep, SurfaceRep]:
    """Cut along the curve enclosing the first ``cut_index`` relator blocks.

    The relator is read as g handle blocks followed by n boundary blocks.
    Piece one keeps the first blocks plus a new boundary X^-1, where X is
    their product; piece two keeps the rest plus X, appended last (a cyclic
    rotation of the relator).  ``cut_index = g`` is the cut separating the
    handles from the boundary circles.
    """
    g, n = rep.g, rep.n
    if not 1 <= cut_index < g + n:
        raise ValueError(f"cut_index must lie in [1, {g + n - 1}]")
    g1 = min(cut_index, g)
    n1 = cut_index - g1
    x = IDENTITY
    for a, b in zip(rep.A[:g1], rep.B[:g1]):
        x = x @ commutator(a, b)
    for c in rep.C[:n1]:
        x = x @ c
    if classify(x).central:
        raise CentralCut("image of the cut curve is central")
    first = SurfaceRep(g1, n1 + 1, rep.A[:g1], rep.B[:g1], rep.C[:n1] + (x.inv(),))
    # Close piece two with its own product rather than x: reading the relator
    # from the cut conjugates its residual by x, which costs a factor |x|^2.
    rest = IDENTITY
    for a, b in zip(rep.A[g1:], rep.B[g1:]):
        rest = rest @ commutator(a, b)
    for c in rep.C[n1:]:
        rest = rest @ c
    second = SurfaceRep(g - g1, n - n1 + 1, rep.A[g1:], rep.B[g1:], rep.C[n1:] + (rest.inv(),))
    return first, second


# the explicit deformation of an elliptic pants


def lemma1_bound(theta: float, theta1: float) -> float:
    """Largest tr(P^T P) keeping |tr(R(theta) P R(theta1) P^-1)| < 2."""
    st = math.sin(theta) * math.sin(theta1)
    cc = math.cos(theta) * math.cos(theta1)
    if st > 0:
        return (2.0 + 2.0 * cc) / st
    return (-2.0 + 2.0 * cc) / st


def lemma1_path(theta: float, theta1: float, p: Mat2, steps: int = 256) -> list[SurfaceRep]:
    """Deform C2 = P R(theta1) P^-1 to R(theta1) through elliptic products.

    Stage one shrinks the rotation angle and shear of P's Iwasawa form to
    zero, stage two moves the diagonal part to the identity.  Each stage
    decreases tr(P^T P), which controls tr(C1 C2).
    """
    if steps < 2:
        raise PreconditionViolated("need at least two steps")
    for t in (theta, theta1):
        if not 0.0 < t < TWO_PI or abs(t - math.pi) < 1e-12:
            raise PreconditionViolated(f"angle {t!r} must lie in (0, pi) or (pi, 2pi)")
    if abs(theta + theta1 - TWO_PI) < 1e-12:
        raise PreconditionViolated("theta + theta1 = 2 pi")
    s0 = p.frob2()
    if not s0 < lemma1_bound(theta, theta1):
        raise PreconditionViolated(f"S = {s0!r} is not below the bound {lemma1_bound(theta, theta1)!r}")
    iw = iwasawa(p)
    c1 = rotation(theta)
    r1 = rotation(theta1)
    half = steps // 2
    out = []
    for i in range(steps + 1):
        if i <= half:
            u = i / half
            q = compose_iwasawa(iw.tau * (1.0 - u), iw.r, iw.x * (1.0 - u))
        else:
            u = (i - half) / (steps - half)
            lam = (1.0 - u) * iw.r + u
            q = diagonal(lam)
        out.append(close_up(0, (), (), (c1, r1.conj(q))))
    return out


def path_report(path: Sequence[SurfaceRep]) -> dict:
    """Trace bounds along a path, plus tr(P^T P) recovered from the trace identity."""
    theta = classify(path[0].C[0]).angle
    theta1 = classify(path[0].C[1]).angle
    cc = math.cos(theta) * math.cos(theta1)
    ss = math.sin(theta) * math.sin(theta1)
    traces = [(rep.C[0] @ rep.C[1]).tr() for rep in path]
    s_vals = [(2.0 * cc - t) / ss for t in traces]
    return {
        "steps": len(path) - 1,
        "theta": theta,
        "theta1": theta1,
        "max_abs_trace": max(abs(t) for t in traces),
        "bound_holds": all(abs(t) < 2.0 for t in traces),
        "s_start": s_vals[0],
        "s_end": s_vals[-1],
        "s_bound": lemma1_bound(theta, theta1),
        "s_monotone": all(b <= a + 1e-9 for a, b in zip(s_vals, s_vals[1:])),
    }


# samplers


def _accept_kind(m: Mat2, kinds: tuple[str, ...]) -> bool:
    try:
        return classify(m).kind in kinds
    except AmbiguousClass:
        return False


def _random_handles(g: int, rng) -> tuple[tuple[Mat2, ...], tuple[Mat2, ...]]:
    A = tuple(random_handle_matrix(rng) for _ in range(g))
    B = tuple(random_handle_matrix(rng) for _ in range(g))
    return A, B


def _cross_form(x: Mat2, u: tuple[float, float]) -> float:
    """u x (X u), the lower-left entry of Q^-1 X Q when Q has first column u."""
    vx, vy = x.a * u[0] + x.b * u[1], x.c * u[0] + x.d * u[1]
    return u[0] * vy - u[1] * vx


def _parabolic_closer(x: Mat2, sigma: tuple[int, int], trace_sign: int, rng) -> Mat2 | None:
    """Parabolic C = Q Phi(sigma) Q^-1 with tr(X C) = 2 * trace_sign, or None."""
    phi = parabolic_normal_form(sigma)
    eps, s2 = int(phi.a), sigma[1] - sigma[0]
    target = (2.0 * trace_sign * eps - x.tr()) / s2
    if abs(target) < 1e-12:
        cls = classify(x)
        if cls.kind != PARABOLIC:
            return None
        ang = cls.fixed_directions[0]
        scale = math.exp(rng.normal(0.0, 0.7))
        q1 = (scale * math.cos(ang), scale * math.sin(ang))
    else:
        for _ in range(64):
            ang = rng.uniform(0.0, math.pi)
            u = (math.cos(ang), math.sin(ang))
            f = _cross_form(x, u)
            if f * target > 0 and abs(f) > 1e-3:
                sc = math.sqrt(target / f)
                q1 = (u[0] * sc, u[1] * sc)
                break
        else:
            return None
    norm2 = q1[0] ** 2 + q1[1] ** 2
    alpha = rng.normal()
    q2 = (-q1[1] / norm2 + alpha * q1[0], q1[0] / norm2 + alpha * q1[1])
    q = Mat2.raw(q1[0], q2[0], q1[1], q2[1])
    return phi.conj(q)


def _boundary_matrix(kind: str, rng) -> Mat2:
    if kind == "elliptic":
        return random_elliptic(rng)
    if kind == "hyperbolic":
        return random_hyperbolic(rng)
    if kind == "parabolic":
        return random_parabolic(rng)
    raise ValueError(kind)


def _sample_once(g: int, n: int, family: str, rng) -> SurfaceRep | None:
    if family in ("elliptic", "ellipticUnipotent", "hyperbolic"):
        kind = "hyperbolic" if family == "hyperbolic" else "elliptic"
        A, B = _random_handles(g, rng)
        partial = [_boundary_matrix(kind, rng) for _ in range(n - 1)]
        if family == "ellipticUnipotent" and partial and rng.random() < 0.3:
            partial[int(rng.integers(len(partial)))] = MINUS_IDENTITY
        rep = close_up(g, A, B, partial)
        kinds = (ELLIPTIC,) if kind == "elliptic" else (HYPERBOLIC,)
        if not _accept_kind(rep.C[-1], kinds):
            return None
        return rep
    if family == "parabolic":
        if g == 0:
            if n < 2:
                return None
            if n == 2:
                c1 = random_parabolic(rng)
                return SurfaceRep(0, 2, (), (), (c1, c1.inv()))
            partial = [random_parabolic(rng) for _ in range(n - 2)]
            x = product(partial)
            sigma = PARABOLIC_SIGMAS[int(rng.integers(4))]
            sign = 1 if rng.random() < 0.5 else -1
            c = _parabolic_closer(x, sigma, sign, rng)
            if c is None:
                return None
            rep = close_up(0, (), (), partial + [c])
            if not _accept_kind(rep.C[-1], (PARABOLIC,)):
                return None
            return rep
        C = [random_parabolic(rng) for _ in range(n)]
        return _solve_last_handle(g, C, rng)
    if family == "HP":
        if n < 2 and g == 0:
            return None
        if g == 0:
            partial = [random_hyperbolic(rng) for _ in range(n - 2)]
            cn = random_parabolic(rng)
            closer = (cn @ product(partial)).inv()
            if not _accept_kind(closer, (HYPERBOLIC,)):
                return None
            return SurfaceRep(0, n, (), (), tuple(partial) + (closer, cn))
        C = [random_hyperbolic(rng) for _ in range(n - 1)] + [random_parabolic(rng)]
        return _solve_last_handle(g, C, rng)
    raise ValueError(f"unknown family {family!r}")


def _solve_last_handle(g: int, C: Sequence[Mat2], rng) -> SurfaceRep | None:
    A, B = _random_handles(g - 1, rng)
    prefix = IDENTITY
    for a, b in zip(A, B):
        prefix = prefix @ commutator(a, b)
    z = prefix.inv() @ product(C).inv()
    try:
        a_g, b_g = solve_commutator(z, rng, budget=50)
    except (BudgetExhausted, CentralCommutator, AmbiguousClass):
        return None
    return SurfaceRep(g, len(C), A + (a_g,), B + (b_g,), tuple(C))


# Winding defects and relation residuals of cut pieces grow like a power of
# |M|^2 times eps; beyond this the 1e-9 and 1e-6 guards downstream misfire.
MAX_FROB2 = 1e6


def _well_conditioned(rep: SurfaceRep) -> bool:
    if max(m.frob2() for m in rep.A + rep.B + rep.C) > MAX_FROB2:
        return False
    try:
        for c in rep.C:
            classify(c)
    except AmbiguousClass:
        return False
    return True


def sample(g: int, n: int, family: str, rng: np.random.Generator | int,
           budget: int = 100_000, tol: float = RELATION_TOL) -> SurfaceRep:
    """Draw one representation whose boundary lies in ``family``.

    Elliptic and hyperbolic families close up random data and reject;
    parabolic boundaries are imposed exactly by construction.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if n < 1:
        raise PreconditionViolated("sampling needs at least one boundary circle")
    rng = np.random.default_rng(rng)
    for _ in range(budget):
        rep = _sample_once(g, n, family, rng)
        if rep is not None and relation_residual(rep) < tol * 0.1 and _well_conditioned(rep):
            return rep
    raise BudgetExhausted(f"no {family} sample for (g, n) = ({g}, {n}) within {budget} draws")


def sample_many(g: int, n: int, family: str, count: int, seed: int, budget: int = 100_000) -> list[SurfaceRep]:
    rng = np.random.default_rng(seed)
    return [sample(g, n, family, rng, budget) for _ in range(count)]


def require_rep(rep: SurfaceRep, tol: float = RELATION_TOL) -> None:
    res = relation_residual(rep)
    if not res < tol:
        raise NotARepresentation(f"relation residual {res:.3g}")


# keep the names used in docs importable from one place
__all__ = [
    "FAMILIES", "SurfaceRep", "TraceCoords", "close_up", "validate", "kappa", "solve_chi",
    "solve_commutator", "so2_rep", "pants_hyp", "pants_par", "torus_rep", "torus_sublabel",
    "mu_flip", "handle_flip", "group_twist", "reverse_orientation", "split_standard",
    "lemma1_path", "lemma1_bound", "path_report", "sample", "sample_many", "random_conjugator",
    "is_realizable", "trace_coords", "FLIP", "PANTS_PAR_BRANCHES",
]
