import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl2reps.cohomology import (
    _fox_matrix,
    _generators,
    cup_pairing,
    direct_signature,
    gram_matrix,
    oracle_report,
    restricted_h1,
)
from sl2reps.errors import CentralBoundary
from sl2reps.invariants import signature
from sl2reps.mat2 import IDENTITY, diagonal
from sl2reps.reps import SurfaceRep, pants_hyp, reverse_orientation, sample, so2_rep

SO2_PANTS = so2_rep(0, (math.pi / 2, 3 * math.pi / 4, 3 * math.pi / 4))
seeds = st.integers(0, 2**32 - 1)


def coboundary(rep, v):
    return np.concatenate([(g - np.eye(2)) @ v for g in _generators(rep)])


def random_cocycle(rep, rng):
    basis = restricted_h1(rep).basis
    return rng.normal(size=basis.shape[0]) @ basis


class TestRestrictedH1:
    def test_so2_pants(self):
        assert restricted_h1(SO2_PANTS).dim == 2

    def test_hyperbolic_pants(self):
        rep = pants_hyp((0, 0, 1))
        h = restricted_h1(rep)
        assert h.dim == 2 and h.coboundary_rank == 2

    def test_basis_vectors_are_cocycles(self, rng):
        rep = sample(1, 2, "hyperbolic", rng)
        h = restricted_h1(rep)
        fox = _fox_matrix(rep, _generators(rep))
        assert np.abs(fox @ h.basis.T).max() < 1e-9

    def test_coboundaries_are_cocycles(self, rng):
        rep = sample(1, 1, "elliptic", rng)
        fox = _fox_matrix(rep, _generators(rep))
        assert np.abs(fox @ coboundary(rep, rng.normal(size=2))).max() < 1e-9

    def test_identity_boundary(self):
        rep = SurfaceRep(0, 3, (), (), (diagonal(2.0), diagonal(0.5), IDENTITY))
        with pytest.raises(CentralBoundary):
            restricted_h1(rep)

    def test_dimension_twice_euler_characteristic(self, rng):
        for fam in ("elliptic", "hyperbolic"):
            for g, n in ((0, 3), (0, 4), (1, 1), (1, 2)):
                rep = sample(g, n, fam, rng)
                h = restricted_h1(rep)
                if h.coboundary_rank == 2:
                    assert h.dim == 2 * abs(rep.chi)


class TestPairing:
    def test_coboundary_pairs_to_zero(self, rng):
        for fam in ("elliptic", "hyperbolic", "parabolic"):
            rep = sample(1, 2, fam, rng)
            u = random_cocycle(rep, rng)
            # coboundaries of a vector fixed by the boundary lie in the restricted space
            w = coboundary(rep, rng.normal(size=2))
            scale = np.linalg.norm(u) * np.linalg.norm(w)
            assert abs(cup_pairing(w, u, rep)) < 1e-8 * max(1.0, scale)
            assert abs(cup_pairing(u, w, rep)) < 1e-8 * max(1.0, scale)

    def test_symmetric(self, rng):
        for fam in ("elliptic", "hyperbolic", "parabolic"):
            rep = sample(0, 4, fam, rng)
            g = gram_matrix(rep, restricted_h1(rep))
            assert np.abs(g - g.T).max() < 1e-8 * max(1.0, np.abs(g).max())

    def test_bilinear(self, rng):
        rep = sample(1, 1, "hyperbolic", rng)
        u, v, w = (random_cocycle(rep, rng) for _ in range(3))
        t = 2.5
        assert cup_pairing(t * u, v, rep) == pytest.approx(t * cup_pairing(u, v, rep), rel=1e-10, abs=1e-12)
        lhs = cup_pairing(u + w, v, rep)
        assert lhs == pytest.approx(cup_pairing(u, v, rep) + cup_pairing(w, v, rep), rel=1e-9, abs=1e-12)


class TestSignature:
    def test_so2_pants(self):
        assert direct_signature(SO2_PANTS) == 2

    def test_reversed(self):
        assert direct_signature(reverse_orientation(SO2_PANTS)) == -2

    def test_hyperbolic_pants_toledo_zero(self):
        assert direct_signature(pants_hyp((1, 1, 1))) == 0

    def test_report_fields(self):
        rep = oracle_report(SO2_PANTS)
        assert rep["signature_direct"] == rep["signature_formula"] == 2
        assert rep["skew_residual"] < 1e-6
        assert set(rep) >= {"dim", "signature_direct", "signature_formula", "skew_residual",
                            "min_singular_value"}


SHAPES = [(f, g, n) for f in ("elliptic", "hyperbolic", "parabolic", "ellipticUnipotent")
          for g, n in ((0, 3), (0, 4), (1, 1), (1, 2))]


@settings(max_examples=80)
@given(seed=seeds, shape=st.sampled_from(SHAPES))
def test_oracle_matches_formula(seed, shape):
    fam, g, n = shape
    rep = sample(g, n, fam, np.random.default_rng(seed))
    report = oracle_report(rep)
    assert report["signature_direct"] == signature(rep)
    assert report["skew_residual"] < 1e-6
