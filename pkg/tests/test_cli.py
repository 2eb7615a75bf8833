import io
import json
import math
import subprocess
import sys

import pytest

from sl2reps import census
from sl2reps.cli import main
from sl2reps.reps import so2_rep


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def so2_file(tmp_path):
    path = tmp_path / "pants_so2.json"
    rep = so2_rep(0, (math.pi / 2, 3 * math.pi / 4, 3 * math.pi / 4))
    path.write_text(json.dumps(rep.to_json()))
    return str(path)


class TestClassify:
    def test_quarter_turn(self):
        code, out, _ = run("classify", "--matrix", "0,-1,1,0")
        assert code == 0
        obj = json.loads(out)
        assert obj["kind"] == "Elliptic"
        assert obj["theta"] == pytest.approx(math.pi / 2)

    def test_bad_matrix(self):
        assert run("classify", "--matrix", "1,1,1,1")[0] == 1
        assert run("classify", "--matrix", "nonsense")[0] == 1
        assert run("classify")[0] == 1

    def test_ambiguous_is_a_property_failure(self):
        code, _, err = run("classify", "--matrix", "1,1,1e-10,1.0000000001", "--tol", "1e-9")
        assert code == 2 and "AmbiguousClass" in err


class TestInvariants:
    def test_so2_pants(self, so2_file):
        code, out, _ = run("invariants", "--rep", so2_file)
        assert code == 0
        obj = json.loads(out)
        assert obj["signature"] == 2
        assert obj["toledo"] == pytest.approx(0.0, abs=1e-12)

    def test_with_oracle(self, so2_file):
        obj = json.loads(run("invariants", "--rep", so2_file, "--oracle")[1])
        assert obj["oracle"]["signature_direct"] == 2

    def test_missing_file(self, tmp_path):
        assert run("invariants", "--rep", str(tmp_path / "nope.json"))[0] == 1

    def test_not_a_representation(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"g": 0, "n": 3, "C": [[[2, 0], [0, 0.5]]] * 3}))
        assert run("invariants", "--rep", str(path))[0] == 1


class TestSample:
    def test_round_trip_into_invariants(self, tmp_path):
        out_path = tmp_path / "rep.json"
        code, out, _ = run("sample", "--family", "hyperbolic", "--g", "1", "--n", "1", "--seed", "3",
                           "--out", str(out_path))
        assert code == 0 and out == ""
        code, out, _ = run("invariants", "--rep", str(out_path))
        assert code == 0 and json.loads(out)["family"] == "hyperbolic"

    def test_census_family_name(self):
        code, out, _ = run("sample", "--family", "Par", "--g", "0", "--n", "3", "--seed", "1",
                           "--samples", "2")
        assert code == 0 and len(json.loads(out)) == 2

    def test_seed_required(self):
        assert run("sample", "--family", "hyperbolic", "--g", "0", "--n", "3")[0] == 1

    def test_unknown_family(self):
        assert run("sample", "--family", "weird", "--g", "0", "--n", "3", "--seed", "1")[0] == 1

    def test_byte_identical(self):
        args = ("sample", "--family", "elliptic", "--g", "1", "--n", "2", "--seed", "8", "--samples", "3")
        assert run(*args)[1] == run(*args)[1]


class TestCensus:
    def test_count(self):
        assert run("census", "--family", "hyp", "--g", "0", "--n", "3") == (0, "12\n", "")

    def test_json(self):
        obj = json.loads(run("census", "--family", "Par", "--g", "0", "--n", "3", "--format", "json")[1])
        assert obj["count"] == 32 and len(obj["labels"]) == 32

    def test_csv_grid(self):
        code, out, _ = run("census", "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "family,g,n,count,source"
        assert "Hyp,0,3,12," in out
        assert len(lines) > 30

    def test_out_of_domain(self):
        assert run("census", "--family", "HP", "--g", "1", "--n", "1")[0] == 1

    def test_missing_option(self):
        assert run("census", "--family", "Hyp")[0] == 1


class TestAudit:
    def test_passes(self):
        code, out, _ = run("audit")
        assert code == 0 and json.loads(out)["passed"]

    def test_failure_names_property(self, monkeypatch):
        monkeypatch.setattr(census, "audit", lambda: {"passed": False, "checks": {
            "floor_sum": {"passed": False, "cases": 1, "failures": [3]}}})
        code, _, err = run("audit")
        assert code == 2 and "audit:floor_sum" in err


class TestVerify:
    def test_hyperbolic_pants(self):
        code, out, _ = run("verify", "--family", "Hyp", "--g", "0", "--n", "3", "--samples", "400",
                           "--seed", "1")
        obj = json.loads(out)
        assert code == 0 and obj["inadmissible"] == 0 and obj["labels_observed"] == 12

    def test_inadmissible_label(self, monkeypatch):
        real = census.verify_by_sampling

        def broken(*a, **k):
            rep = real(*a, **k)
            rep["inadmissible"] = 1
            return rep

        monkeypatch.setattr(census, "verify_by_sampling", broken)
        code, _, err = run("verify", "--family", "Hyp", "--g", "0", "--n", "3", "--samples", "10",
                           "--seed", "1")
        assert code == 2 and "admissible_labels" in err

    def test_out_of_domain(self):
        assert run("verify", "--family", "Hyp", "--g", "0", "--n", "1", "--samples", "5",
                   "--seed", "1")[0] == 1


class TestOracle:
    def test_sampled(self):
        code, out, _ = run("oracle", "--family", "elliptic", "--g", "0", "--n", "3", "--seed", "1",
                           "--samples", "5")
        obj = json.loads(out)
        assert code == 0 and obj["count"] == 5 and obj["mismatches"] == 0

    def test_from_file(self, so2_file):
        obj = json.loads(run("oracle", "--rep", so2_file)[1])
        assert obj["reports"][0]["signature_direct"] == 2

    def test_mismatch(self, monkeypatch, so2_file):
        from sl2reps import cohomology
        real = cohomology.oracle_report

        def shifted(*a, **k):
            rep = real(*a, **k)
            rep["signature_direct"] += 2
            return rep

        monkeypatch.setattr(cohomology, "oracle_report", shifted)
        code, _, err = run("oracle", "--rep", so2_file)
        assert code == 2 and "signature_oracle" in err


class TestPath:
    def test_trivial_path(self):
        code, out, _ = run("path", str(math.pi / 2), str(math.pi / 4))
        assert code == 0
        assert json.loads(out)["max_abs_trace"] == pytest.approx(math.sqrt(2))

    def test_precondition(self):
        assert run("path", str(math.pi / 2), str(math.pi / 2))[0] == 1
        assert run("path", str(math.pi / 2), str(math.pi / 4), "--matrix", "1,1,0,1")[0] == 1

    def test_arity(self):
        assert run("path", "1.0")[0] == 1
        assert run("audit", "extra")[0] == 1


def test_unknown_verb():
    assert run("frobnicate")[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sl2reps", "census", "--family", "hyp", "--g", "0",
                           "--n", "3"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "12\n"
