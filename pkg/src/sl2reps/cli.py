"""Command line front end.

    sl2reps classify --matrix "0,-1,1,0"
    sl2reps invariants --rep rep.json [--oracle]
    sl2reps sample --family hyperbolic --g 0 --n 3 --seed 1 [--samples 5]
    sl2reps census --family hyp --g 0 --n 3 [--format json|csv]
    sl2reps audit
    sl2reps verify --family Hyp --g 0 --n 3 --samples 1000 --seed 1
    sl2reps oracle --rep rep.json | --family elliptic --g 0 --n 3 --seed 1 --samples 50
    sl2reps path THETA THETA1 [--matrix P] [--samples STEPS]

Exit status: 0 on success, 1 on usage errors, 2 when a checked property
fails (the property name goes to stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Sequence

import numpy as np

from . import census, cohomology
from .errors import (
    NotARepresentation,
    NotUnimodular,
    OutOfDomain,
    PreconditionViolated,
    Sl2Error,
    TooLarge,
)
from .invariants import invariant_record
from .mat2 import IDENTITY, Mat2, classify
from .reps import FAMILIES, SurfaceRep, lemma1_path, path_report, sample

EXIT_OK, EXIT_USAGE, EXIT_PROPERTY = 0, 1, 2
# library errors that mean the input was unusable rather than a failed check
INPUT_ERRORS = (OutOfDomain, TooLarge, PreconditionViolated, NotARepresentation, NotUnimodular)
VERBS = ("classify", "invariants", "sample", "census", "audit", "verify", "oracle", "path")


class UsageError(Exception):
    pass


class PropertyFailure(Exception):
    def __init__(self, prop: str, payload=None):
        super().__init__(prop)
        self.prop = prop
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sl2reps", description="Surface group representations into SL(2, R).")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("args", nargs="*", help="positional values (path: THETA THETA1)")
    p.add_argument("--family")
    p.add_argument("--g", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--matrix")
    p.add_argument("--rep")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--oracle", action="store_true")
    return p


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _need(ns, *names):
    missing = [f"--{k}" for k in names if getattr(ns, k) is None]
    if missing:
        raise UsageError(f"{ns.verb} needs {' '.join(missing)}")


def _load_reps(path: str) -> list[SurfaceRep]:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not JSON: {exc}") from exc
    items = obj if isinstance(obj, list) else [obj]
    try:
        return [SurfaceRep.from_json(x) for x in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad representation in {path}: {exc}") from exc


def _sampler_family(name: str) -> str:
    if name in FAMILIES:
        return name
    try:
        return census.SAMPLER_FAMILY[census.parse_family(name)]
    except Sl2Error:
        raise UsageError(f"unknown family {name!r}") from None


def cmd_classify(ns) -> str:
    _need(ns, "matrix")
    try:
        m = Mat2.parse(ns.matrix)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cls = classify(m) if ns.tol is None else classify(m, ns.tol)
    return _dump(cls.describe())


def cmd_invariants(ns) -> str:
    _need(ns, "rep")
    out = []
    for rep in _load_reps(ns.rep):
        rec = invariant_record(rep).to_json()
        if ns.oracle:
            rec["oracle"] = _oracle_one(rep, ns.tol)
        out.append(rec)
    return _dump(out[0] if len(out) == 1 else out)


def cmd_sample(ns) -> str:
    _need(ns, "family", "g", "n", "seed")
    fam = _sampler_family(ns.family)
    count = 1 if ns.samples is None else ns.samples
    rng = np.random.default_rng(ns.seed)
    reps = [sample(ns.g, ns.n, fam, rng).to_json() for _ in range(count)]
    return _dump(reps[0] if ns.samples is None else reps)


CSV_COLUMNS = ("family", "g", "n", "count", "source")


def _census_rows(ns) -> list[dict]:
    fams = [census.parse_family(ns.family)] if ns.family else list(census.FAMILY_NAMES)
    gs = [ns.g] if ns.g is not None else range(0, 3)
    ns_ = [ns.n] if ns.n is not None else range(0, 6)
    rows = []
    single = ns.family is not None and ns.g is not None and ns.n is not None
    for fam in fams:
        for g in gs:
            for n in ns_:
                try:
                    rows.append(census.census_table(fam, g, n))
                except OutOfDomain:
                    if single:
                        raise
    return rows


def cmd_census(ns) -> str:
    if ns.format is None:
        _need(ns, "family", "g", "n")
        return f"{census.count_components(ns.family, ns.g, ns.n)}\n"
    rows = _census_rows(ns)
    if ns.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    if len(rows) == 1:
        row = dict(rows[0])
        fam, g, n = row["family"], row["g"], row["n"]
        try:
            row["signature_range"] = census.signature_range(fam, g, n)
        except OutOfDomain:
            pass
        if row["count"] <= 4096:
            labels = sorted(census.admissible_labels(fam, g, n), key=repr)
            row["labels"] = [lab.to_json() for lab in labels]
        return _dump(row)
    return _dump(rows)


def cmd_audit(ns) -> str:
    report = census.audit()
    if not report["passed"]:
        bad = sorted(k for k, v in report["checks"].items() if not v["passed"])
        raise PropertyFailure("audit:" + ",".join(bad), report)
    return _dump(report)


def cmd_verify(ns) -> str:
    _need(ns, "family", "g", "n", "samples", "seed")
    report = census.verify_by_sampling(ns.family, ns.g, ns.n, ns.samples, ns.seed)
    if report["inadmissible"]:
        raise PropertyFailure("admissible_labels", report)
    return _dump(report)


def _oracle_one(rep, tol) -> dict:
    rep_tol = cohomology.DEFAULT_TOL if tol is None else tol
    return cohomology.oracle_report(rep, rep_tol)


def cmd_oracle(ns) -> str:
    if ns.rep is not None:
        reps = _load_reps(ns.rep)
    else:
        _need(ns, "family", "g", "n", "seed")
        fam = _sampler_family(ns.family)
        rng = np.random.default_rng(ns.seed)
        reps = [sample(ns.g, ns.n, fam, rng) for _ in range(ns.samples or 1)]
    reports = [_oracle_one(rep, ns.tol) for rep in reps]
    mismatches = sum(1 for r in reports if r["signature_direct"] != r["signature_formula"])
    summary = {"count": len(reports), "mismatches": mismatches, "reports": reports}
    if mismatches:
        raise PropertyFailure("signature_oracle", summary)
    return _dump(summary)


def cmd_path(ns) -> str:
    if len(ns.args) != 2:
        raise UsageError("path needs THETA THETA1")
    try:
        theta, theta1 = (float(v) for v in ns.args)
        p = IDENTITY if ns.matrix is None else Mat2.parse(ns.matrix)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    steps = 256 if ns.samples is None else ns.samples
    report = path_report(lemma1_path(theta, theta1, p, steps))
    if not (report["bound_holds"] and report["s_monotone"]):
        raise PropertyFailure("lemma1_path", report)
    return _dump(report)


COMMANDS = {
    "classify": cmd_classify,
    "invariants": cmd_invariants,
    "sample": cmd_sample,
    "census": cmd_census,
    "audit": cmd_audit,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "path": cmd_path,
}


def _emit(text: str, out: str | None, stdout) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
        if ns.args and ns.verb != "path":
            raise UsageError(f"{ns.verb} takes no positional arguments")
        text = COMMANDS[ns.verb](ns)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except PropertyFailure as exc:
        stderr.write(f"property violated: {exc.prop}\n")
        if exc.payload is not None:
            _emit(_dump(exc.payload), ns.out, stdout)
        return EXIT_PROPERTY
    except INPUT_ERRORS as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except Sl2Error as exc:
        stderr.write(f"property violated: {type(exc).__name__}: {exc}\n")
        return EXIT_PROPERTY
    _emit(text, ns.out, stdout)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
