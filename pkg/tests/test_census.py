import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import count_formula, floor_sum
from sl2reps.census import (
    FAMILY_NAMES,
    ComponentLabel,
    admissible_labels,
    audit,
    census_table,
    count_components,
    family_group,
    parse_family,
    signature_range,
    source_formula,
    verify_by_sampling,
)
from sl2reps.errors import OutOfDomain, TooLarge


def in_domain(fam, g, n):
    try:
        count_components(fam, g, n)
    except OutOfDomain:
        return False
    return True


SMALL = [(f, g, n) for f in FAMILY_NAMES for g in range(3) for n in range(6) if in_domain(f, g, n)]


class TestCounts:
    @pytest.mark.parametrize("fam,g,n,expected", [
        ("Hyp", 0, 3, 12),
        ("Par", 1, 1, 16),
        ("Ell", 1, 2, 18),
        ("E", 1, 1, 8),
        ("Par_P", 0, 3, 8),
        ("Par", 0, 3, 32),
        ("HP", 0, 3, 16),
        ("Par", 0, 4, 208),
    ])
    def test_quoted_counts(self, fam, g, n, expected):
        assert count_components(fam, g, n) == expected

    def test_closed_surfaces(self):
        assert count_components("E", 2, 0) == 2 ** 5 + 4 - 3
        assert count_components("Ell_P", 3, 0) == 4 * 3 - 3
        assert source_formula("E", 2, 0).startswith("closed surface")

    @pytest.mark.parametrize("fam", ["E", "Ell_P", "Hyp", "Par_P", "HP"])
    def test_against_independent_formulas(self, fam):
        for g in range(5):
            for n in range(0, 9):
                if in_domain(fam, g, n):
                    assert count_components(fam, g, n) == count_formula(fam, g, n), (g, n)

    def test_genus_zero_elliptic_is_floor_sum(self):
        for n in range(3, 9):
            assert count_components("Ell", 0, n) == floor_sum(n)

    def test_par_splits_on_parity_of_n(self):
        # n even: 8^(n/2) copies of the hyperbolic count
        for g in range(1, 4):
            for n in (2, 4, 6):
                assert count_components("Par", g, n) == 8 ** (n // 2) * count_components("Hyp", g, n // 2)

    def test_domain_errors(self):
        with pytest.raises(OutOfDomain):
            count_components("Hyp", 0, 1)
        with pytest.raises(OutOfDomain):
            count_components("HP", 1, 1)
        with pytest.raises(OutOfDomain):
            count_components("Hyp", 2, 0)
        with pytest.raises(OutOfDomain):
            count_components("Loxodromic", 1, 1)
        with pytest.raises(TooLarge):
            count_components("Hyp", 0, 13)

    def test_family_names(self):
        assert parse_family("hyp") == "Hyp"
        assert family_group("Par_P") == family_group("Ell_P") == "PSL"
        assert family_group("Par") == "SL"


class TestRanges:
    def test_examples(self):
        assert signature_range("E", 0, 4) == [-4, 0, 4]
        assert signature_range("Ell_P", 1, 2) == [0, 2, 4]
        assert signature_range("Hyp", 1, 1) == [-2, 0, 2]

    @pytest.mark.parametrize("fam,g,n", SMALL)
    def test_label_invariants_in_range(self, fam, g, n):
        if fam in ("Hyp", "Par", "Par_P", "HP"):
            return  # these labels carry the Toledo invariant, not the signature
        rng = set(signature_range(fam, g, n))
        for lab in admissible_labels(fam, g, n):
            if lab.invariant is not None:
                assert lab.invariant in rng


class TestLabels:
    def test_elliptic_pants_all_small_angles(self):
        labels = admissible_labels("Ell", 0, 3)
        assert {lab.invariant for lab in labels if lab.sigma == (-1, -1, -1)} == {2}

    def test_hyperbolic_pants(self):
        labels = admissible_labels("Hyp", 0, 3)
        assert len(labels) == 12
        for lab in labels:
            assert (lab.invariant - sum(lab.sigma) - 3) % 2 == 0

    def test_parabolic_pants(self):
        assert len(admissible_labels("Par", 0, 3)) == 32

    @pytest.mark.parametrize("fam,g,n", SMALL)
    def test_size_matches_count(self, fam, g, n):
        if count_components(fam, g, n) > 200_000:
            pytest.skip("enumeration too large for the unit suite")
        assert len(admissible_labels(fam, g, n)) == count_components(fam, g, n)

    def test_json(self):
        lab = ComponentLabel(((0, 1), (1, 0)), 1, ("x", 2))
        assert lab.to_json() == {"sigma": [[0, 1], [1, 0]], "invariant": 1, "sub": ["x", 2]}

    def test_too_large(self):
        with pytest.raises(TooLarge):
            admissible_labels("Par", 3, 9)


@given(shape=st.sampled_from([s for s in SMALL if s[1] <= 1 and s[2] <= 4]))
def test_labels_have_consistent_shape(shape):
    fam, g, n = shape
    # E and Ell_P components are told apart by the signature alone
    width = 0 if fam in ("E", "Ell_P") else n
    for lab in admissible_labels(fam, g, n):
        assert len(lab.sigma) == width


def test_audit_passes():
    report = audit()
    assert report["passed"]
    assert set(report["checks"]) >= {"floor_sum", "par_even_covers_hyp", "closed_surface_limits",
                                      "pants_counts", "four_holed_sphere_split"}
    assert all(v["failures"] == [] for v in report["checks"].values())


class TestVerify:
    @pytest.mark.parametrize("fam,g,n,samples", [
        ("Hyp", 0, 3, 1500),
        ("Par", 0, 3, 3000),
        ("HP", 0, 3, 1500),
        ("Par", 1, 1, 1500),
        ("Ell", 1, 1, 800),
        ("E", 1, 1, 800),
        ("Par_P", 1, 1, 500),
    ])
    def test_small_runs_see_everything(self, fam, g, n, samples):
        report = verify_by_sampling(fam, g, n, samples, seed=5)
        assert report["inadmissible"] == 0
        assert report["all_observed"], report

    def test_deterministic(self):
        a = verify_by_sampling("Hyp", 1, 1, 200, seed=9)
        b = verify_by_sampling("Hyp", 1, 1, 200, seed=9)
        assert a == b

    def test_genus_two_is_admissible(self):
        report = verify_by_sampling("Hyp", 2, 1, 200, seed=1)
        assert report["inadmissible"] == 0

    def test_table_row(self):
        assert census_table("hyp", 0, 3) == {"family": "Hyp", "g": 0, "n": 3, "count": 12,
                                             "source": source_formula("Hyp", 0, 3)}
