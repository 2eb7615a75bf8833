"""Signature computed from twisted cohomology, as a check on 2T + rho.

A cocycle of the free group on ``a_1, b_1, ..., a_g, b_g, c_1, ..., c_n`` is
stored as its values on the generators, one R^2 slot each.  It descends to
the surface group when its value on the relator vanishes (Fox calculus).
Restricted classes additionally have ``u(c_j)`` in the image of
``phi(c_j) - I``; solving ``u(c_j) = (phi(c_j) - I) x_j`` lets us rewrite each
boundary letter as a collar ``t_j d_j t_j^-1`` with ``u(d_j) = 0`` and
``u(t_j) = -x_j``, which is the relative representative the cup product
needs.  The pairing is then the bar-resolution formula on the relator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CentralBoundary, DegenerateForm, RankAmbiguous
from .invariants import signature
from .mat2 import IDENTITY_KIND, PARABOLIC, Mat2, classify

DEFAULT_TOL = 1e-8
OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])

# Sign fixing the orientation of the relator 2-cell against the
# orientation in which elliptic rotations by angles below pi are positive.
ORIENTATION = -1.0


def _mat(m: Mat2) -> np.ndarray:
    return np.array([[m.a, m.b], [m.c, m.d]], dtype=float)


def _generators(rep) -> list[np.ndarray]:
    return [_mat(x) for pair in zip(rep.A, rep.B) for x in pair] + [_mat(c) for c in rep.C]


def _relator_letters(rep) -> list[tuple[int, int]]:
    """(generator index, exponent) for the relator, without collars."""
    letters = []
    for i in range(rep.g):
        a, b = 2 * i, 2 * i + 1
        letters += [(a, 1), (b, 1), (a, -1), (b, -1)]
    letters += [(2 * rep.g + j, 1) for j in range(rep.n)]
    return letters


def _fox_matrix(rep, gens) -> np.ndarray:
    """Linear map from generator values to the value on the relator."""
    k = len(gens)
    out = np.zeros((2, 2 * k))
    prefix = np.eye(2)
    for idx, e in _relator_letters(rep):
        g = gens[idx]
        if e == 1:
            out[:, 2 * idx:2 * idx + 2] += prefix
            prefix = prefix @ g
        else:
            ginv = np.linalg.inv(g)
            out[:, 2 * idx:2 * idx + 2] -= prefix @ ginv
            prefix = prefix @ ginv
    return out


def _boundary_constraints(rep, gens) -> tuple[list[np.ndarray], list[int]]:
    """Rows forcing u(c_j) into Im(phi(c_j) - I); also kernel dimensions."""
    rows, kernel_dims = [], []
    k = len(gens)
    for j in range(rep.n):
        idx = 2 * rep.g + j
        u, _, _ = np.linalg.svd(gens[idx] - np.eye(2))
        # rank of phi(c) - I read off the conjugacy class: the trace decides
        # it far more reliably than a small singular value does
        cls = classify(rep.C[j])
        if cls.kind == IDENTITY_KIND:
            raise CentralBoundary(f"boundary {j} maps to the identity")
        rank = 1 if cls.kind == PARABOLIC and cls.trace_sign > 0 else 2
        kernel_dims.append(2 - rank)
        for col in range(rank, 2):
            row = np.zeros(2 * k)
            row[2 * idx:2 * idx + 2] = u[:, col]
            rows.append(row)
    return rows, kernel_dims


def _rank(sv: np.ndarray, tol: float, absolute: bool = False) -> int:
    if sv.size == 0:
        return 0
    top = float(sv[0]) if sv[0] > 0 else 1.0
    thr = tol if absolute else tol * top
    for s in sv:
        if 0.1 * thr < s < 10 * thr:
            raise RankAmbiguous(f"singular value {s:.3g} inside the band around {thr:.3g}")
    return int(np.sum(sv > thr))


@dataclass
class CocycleBasis:
    """Representatives of restricted H^1 in generator-value coordinates."""

    ambient_dim: int
    basis: np.ndarray  # rows are cocycles
    cocycle_dim: int
    coboundary_rank: int
    boundary_kernel_dims: list[int]
    min_singular_value: float

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])


def restricted_h1(rep, tol: float = DEFAULT_TOL) -> CocycleBasis:
    gens = _generators(rep)
    k = len(gens)
    rows, kernel_dims = _boundary_constraints(rep, gens)
    cons = np.vstack([_fox_matrix(rep, gens)] + [r[None, :] for r in rows])
    _, sv, vt = np.linalg.svd(cons)
    rank = _rank(sv, tol)
    cocycles = vt[rank:]  # orthonormal rows
    cob = np.vstack([g - np.eye(2) for g in gens])  # column space = coboundaries
    uq, svb, _ = np.linalg.svd(cob, full_matrices=False)
    brank = _rank(svb, tol)
    cob_basis = uq[:, :brank]
    # orthogonal complement of the coboundaries inside the cocycles
    proj = cocycles - (cocycles @ cob_basis) @ cob_basis.T
    _, sq, vq = np.linalg.svd(proj, full_matrices=False)
    # rows of proj have norm at most one, so the threshold is absolute
    qrank = _rank(sq, tol, absolute=True) if sq.size else 0
    basis = vq[:qrank]
    min_sv = float(sv[rank - 1]) if rank else 0.0
    return CocycleBasis(2 * k, basis, cocycles.shape[0], brank, kernel_dims, min_sv)


def _letter_values(rep, gens, u: np.ndarray):
    """(matrix, cocycle value, value of x for a letter x^-1) along the collared relator."""
    vals = [u[2 * i:2 * i + 2] for i in range(len(gens))]
    out = []
    for i in range(rep.g):
        a, b = 2 * i, 2 * i + 1
        ga, gb = gens[a], gens[b]
        ia, ib = np.linalg.inv(ga), np.linalg.inv(gb)
        out += [(ga, vals[a], None), (gb, vals[b], None),
                (ia, -ia @ vals[a], vals[a]), (ib, -ib @ vals[b], vals[b])]
    eye = np.eye(2)
    for j in range(rep.n):
        idx = 2 * rep.g + j
        c = gens[idx]
        x, *_ = np.linalg.lstsq(c - eye, vals[idx], rcond=None)
        out += [(eye, -x, None), (c, np.zeros(2), None), (eye, x, -x)]
    return out


def cup_pairing(u: np.ndarray, v: np.ndarray, rep) -> float:
    """Cup product with Omega evaluated on the relative fundamental 2-chain.

    The chain is the sum of bar cells [w_{k-1} | y_k] along the relator,
    corrected by -[x^-1 | x] for each inverse letter so that its boundary
    is the sum of the boundary loops.
    """
    gens = _generators(rep)
    lu = _letter_values(rep, gens, np.asarray(u, dtype=float))
    lv = _letter_values(rep, gens, np.asarray(v, dtype=float))
    prefix = np.eye(2)
    acc_u = np.zeros(2)
    total = 0.0
    for (g, du, xu), (_, dv, xv) in zip(lu, lv):
        total += float(acc_u @ OMEGA @ (prefix @ dv))
        if xu is not None:
            # -(u cup v)[x^-1 | x] = Omega(u(x), v(x)) for x in SL(2, R)
            total += float(xu @ OMEGA @ xv)
        acc_u = acc_u + prefix @ du
        prefix = prefix @ g
    return ORIENTATION * total


def gram_matrix(rep, basis: CocycleBasis) -> np.ndarray:
    b = basis.basis
    n = b.shape[0]
    return np.array([[cup_pairing(b[i], b[j], rep) for j in range(n)] for i in range(n)])


def _symmetric_signature(gram: np.ndarray, tol: float) -> tuple[int, float, float]:
    if gram.size == 0:
        return 0, 0.0, 0.0
    sym = 0.5 * (gram + gram.T)
    norm = float(np.linalg.norm(gram, 2)) or 1.0
    skew = float(np.linalg.norm(gram - gram.T, 2)) / 2.0
    ev = np.linalg.eigvalsh(sym)
    thr = tol * norm
    if np.any(np.abs(ev) <= thr):
        raise DegenerateForm(f"eigenvalue {float(ev[np.argmin(np.abs(ev))]):.3g} within {thr:.3g}")
    return int(np.sum(ev > thr) - np.sum(ev < -thr)), skew, float(np.min(np.abs(ev)) / norm)


def direct_signature(rep, tol: float = DEFAULT_TOL) -> int:
    return oracle_report(rep, tol, with_formula=False)["signature_direct"]


def oracle_report(rep, tol: float = DEFAULT_TOL, with_formula: bool = True) -> dict:
    basis = restricted_h1(rep, tol)
    gram = gram_matrix(rep, basis)
    sign, skew, min_ev = _symmetric_signature(gram, tol)
    norm = float(np.linalg.norm(gram, 2)) if gram.size else 0.0
    report = {
        "dim": basis.dim,
        "signature_direct": sign,
        "skew_residual": skew / norm if norm else 0.0,
        "min_singular_value": basis.min_singular_value,
        "min_relative_eigenvalue": min_ev,
        "coboundary_rank": basis.coboundary_rank,
        "boundary_kernel_dims": basis.boundary_kernel_dims,
    }
    if with_formula:
        report["signature_formula"] = signature(rep)
    return report
