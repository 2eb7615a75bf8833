import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import as_np, elliptic_angle_from_orbit, np_commutator, rotation_np
from sl2reps.errors import AmbiguousClass, NotUnimodular
from sl2reps.mat2 import (
    ELLIPTIC,
    HYPERBOLIC,
    IDENTITY,
    IDENTITY_KIND,
    MINUS_IDENTITY,
    MINUS_IDENTITY_KIND,
    PARABOLIC,
    PARABOLIC_SIGMAS,
    Mat2,
    classify,
    commutator,
    compose_iwasawa,
    diagonal,
    iwasawa,
    parabolic_normal_form,
    random_sl2,
    rotation,
    shear,
    trace_identities,
    unipotent,
)
from sl2reps.reps import random_conjugator

angles = st.floats(0.01, 2 * math.pi - 0.01).filter(lambda t: abs(t - math.pi) > 0.01)
seeds = st.integers(0, 2**32 - 1)


def test_determinant_checked_at_construction():
    with pytest.raises(NotUnimodular):
        Mat2(1, 1, 1, 1)
    Mat2(2, 0, 0, 0.5)


def test_parse_forms_agree():
    ref = Mat2(0, -1, 1, 0)
    assert Mat2.parse("0,-1,1,0") == ref
    assert Mat2.parse([[0, -1], [1, 0]]) == ref
    assert Mat2.parse([0, -1, 1, 0]) == ref


def test_algebra_matches_numpy(rng):
    for _ in range(50):
        x, y = random_sl2(rng), random_sl2(rng)
        assert np.allclose(as_np(x @ y), as_np(x) @ as_np(y), atol=1e-10)
        assert np.allclose(as_np(commutator(x, y)), np_commutator(as_np(x), as_np(y)), atol=1e-8)
        assert np.allclose(as_np(x.inv()), np.linalg.inv(as_np(x)), atol=1e-9)


class TestClassify:
    def test_quarter_turn(self):
        cls = classify(Mat2.parse([[0, -1], [1, 0]]))
        assert cls.kind == ELLIPTIC
        assert cls.angle == pytest.approx(math.pi / 2)

    def test_negative_upper_shear(self):
        cls = classify(Mat2.parse([[1, -1], [0, 1]]))
        assert (cls.kind, cls.trace_sign, cls.shear_sign) == (PARABOLIC, 1, -1)

    def test_diagonal(self):
        cls = classify(diagonal(2.0))
        assert cls.kind == HYPERBOLIC and cls.trace_sign == 1
        assert cls.eigenvalue == pytest.approx(2.0)
        assert sorted(cls.fixed_directions) == pytest.approx([0.0, math.pi / 2])

    def test_central(self):
        assert classify(IDENTITY).kind == IDENTITY_KIND
        assert classify(MINUS_IDENTITY).kind == MINUS_IDENTITY_KIND

    def test_guard_band_rejects_near_parabolic(self):
        near = Mat2(1.0, 1.0, 1e-10, 1.0 + 1e-10)  # trace 2 + 1e-10
        with pytest.raises(AmbiguousClass):
            classify(near, tol=1e-9)

    def test_conjugated_rotation_recovers_angle(self, rng):
        for _ in range(200):
            p = random_conjugator(rng)
            m = rotation(1.2).conj(p)
            assert classify(m).angle == pytest.approx(1.2, abs=1e-9)

    @given(theta=angles, seed=seeds)
    def test_angle_agrees_with_orbit_orientation(self, theta, seed):
        p = random_conjugator(np.random.default_rng(seed))
        m = rotation(theta).conj(p)
        assert classify(m).angle == pytest.approx(elliptic_angle_from_orbit(m), abs=1e-8)
        assert np.sign(m.c - m.b) == np.sign(math.sin(theta))

    @given(seed=seeds)
    def test_conjugation_invariance(self, seed):
        r = np.random.default_rng(seed)
        m, p = random_sl2(r), random_conjugator(r)
        try:
            c0 = classify(m)
        except AmbiguousClass:
            return
        c1 = classify(m.conj(p))
        assert c0.kind == c1.kind
        if c0.kind == ELLIPTIC:
            assert c1.angle == pytest.approx(c0.angle, abs=1e-8)
        if c0.kind == HYPERBOLIC:
            assert c1.trace_sign == c0.trace_sign
            assert c1.eigenvalue == pytest.approx(c0.eigenvalue, rel=1e-8)

    @given(seed=seeds, which=st.sampled_from(PARABOLIC_SIGMAS))
    def test_shear_sign_rule(self, seed, which):
        p = random_conjugator(np.random.default_rng(seed))
        m = parabolic_normal_form(which).conj(p)
        cls = classify(m)
        assert cls.kind == PARABOLIC
        assert cls.shear_sign == which[1] - which[0]


def test_normal_forms():
    assert parabolic_normal_form((-1, 0)).entries() == (1.0, 1.0, 0.0, 1.0)
    assert parabolic_normal_form((0, 1)).entries() == (-1.0, -1.0, 0.0, -1.0)
    assert rotation(0.3).max_abs_diff(Mat2(*rotation_np(0.3).reshape(-1))) < 1e-15
    assert unipotent(-1, 2.0).entries() == (-1.0, -2.0, 0.0, -1.0)


class TestIwasawa:
    def test_diagonal(self):
        iw = iwasawa(diagonal(2.0))
        assert (iw.tau, iw.r, iw.x) == pytest.approx((0.0, 2.0, 0.0), abs=1e-12)

    def test_shear(self):
        iw = iwasawa(shear(3.0))
        assert (iw.tau, iw.r, iw.x) == pytest.approx((0.0, 1.0, 3.0), abs=1e-12)

    def test_round_trip_coordinates(self):
        m = rotation(0.7) @ diagonal(1.5) @ shear(-2.0)
        iw = iwasawa(m)
        assert (iw.tau, iw.r, iw.x) == pytest.approx((0.7, 1.5, -2.0), abs=1e-12)

    @given(tau=st.floats(0, 2 * math.pi - 1e-6), logr=st.floats(-3, 3), x=st.floats(-5, 5))
    def test_round_trip(self, tau, logr, x):
        m = compose_iwasawa(tau, math.exp(logr), x)
        iw = iwasawa(m)
        assert compose_iwasawa(iw.tau, iw.r, iw.x).max_abs_diff(m) < 1e-12 * max(1.0, m.frob2())
        assert m.frob2() == pytest.approx(iw.r**2 + iw.r**-2 + iw.r**2 * iw.x**2, rel=1e-12)


class TestTraceIdentities:
    def test_diagonal_commutator_example(self):
        beta = Mat2.parse([[1, 1], [1, 2]])
        k = commutator(diagonal(2.0), beta)
        assert k.tr() == pytest.approx(-0.25)
        assert 2 - beta.b * beta.c * (2 - 0.5) ** 2 == pytest.approx(-0.25)

    def test_unipotent_commutator_example(self):
        beta = Mat2.parse([[2, 3], [0, 0.5]])
        assert commutator(unipotent(1, 1.0), beta).tr() == pytest.approx(2.0)

    def test_rotation_commutator_with_identity(self):
        assert commutator(rotation(math.pi / 2), IDENTITY).tr() == pytest.approx(2.0)

    def test_report_shape(self):
        rep = trace_identities(50, 3)
        assert len(rep) == 8
        assert all(v["passed"] for v in rep.values())

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            trace_identities(0, 1)
