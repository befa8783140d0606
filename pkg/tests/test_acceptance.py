"""Acceptance criteria 1-9, one pass/fail line each.

Run under pytest (the lines are printed even with output capture on) or
directly with ``python3 tests/test_acceptance.py``.
"""

import contextlib
import io
import json
import os
import sys
import time
from pathlib import Path

import pytest

from cainfty import suites
from cainfty.report import PASS

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"


def _records(rep, check):
    return [r for r in rep.records if r.check == check]


def criterion_1():
    from cainfty.fuzz import stasheff_cases
    n = len(stasheff_cases(0, 100))
    rep = suites.fuzz_equivalence(seed=0, count=100, p_max=4, W=6)
    eq = _records(rep, "oracle-equivalence")[0]
    ok = rep.passed and n >= 100 and _records(rep, "mutation-detection")[0].status == PASS
    return ok, f"{n} structures; {eq.detail}", 60


def criterion_2():
    rep = suites.k3_suite()
    checks = {r.check for r in rep.records}
    ok = rep.passed and {"cdg-d-squared", "cdg-dc", "cdg-leibniz", "stasheff", "mc-residual"} <= checks
    return ok, f"{len(rep.records)} records", 1


def criterion_3():
    rep = suites.twisting_suite(seed=0, count=50)
    trips = sum(1 for r in rep.records if r.check.startswith("roundtrip-"))
    return rep.passed and trips == 4 * 51, f"{trips} round trips, {rep.summary()['skipped']} skipped", 30


def criterion_4():
    first, second = suites.calibration_suite(), suites.calibration_suite()
    ok = first.passed and first.to_json() == second.to_json()
    return ok, first.records[0].detail + ", identical on a second run", None


def criterion_5():
    rep = suites.lemma_suite(W=5)
    lemmas = _records(rep, "g-lemma")
    squares = _records(rep, "twisted-d-squared")
    ok = rep.passed and len(lemmas) == 2 and len(squares) >= 1
    return ok, f"{len(lemmas)} lemma checks, {len(squares)} twisted squares; MC {_records(rep, 'mc-elements-found')[0].detail}", None


def criterion_6():
    rep = suites.adjunction_suite(seed=0, count=25)
    ranks = _records(rep, "adjunction-cocycle-ranks")
    return rep.passed and len(ranks) == 26, f"{len(ranks)} triples, ranks agree", None


def criterion_7():
    rep = suites.resolution_suite(W=5)
    done = [r for r in rep.records if r.status == PASS]
    return rep.passed and len(done) == 2, "; ".join(f"{','.join(r.objects)}: {r.detail}" for r in done), 30


def criterion_8():
    rep = suites.unit_homotopy_suite(W=5)
    main = _records(rep, "unit-homotopy")[0]
    ok = rep.passed and "0 with a = 1" not in main.detail and _records(rep, "unit-homotopy-descends")
    return bool(ok), main.detail, None


def criterion_9():
    from cainfty.cli import COMMANDS, main
    cases = json.loads((GOLDEN / "cases.json").read_text())
    codes = set()
    bad = []
    old = os.getcwd()
    os.chdir(FIXTURES)
    try:
        for case in cases:
            out = io.StringIO()
            with contextlib.redirect_stdout(out):
                code = main(case["argv"] + ["--format", "json"])
            codes.add(code)
            if code != case["exit"] or out.getvalue() != (GOLDEN / f"{case['name']}.json").read_text():
                bad.append(case["name"])
        for path in ("bad-coef.json", "bad-kind.json"):
            with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
                code = main(["check-coalgebra", path])
            codes.add(code)
            if code != 2:
                bad.append(path)
    finally:
        os.chdir(old)
    covered = {c["argv"][0] for c in cases} == set(COMMANDS)
    ok = not bad and covered and codes == {0, 1, 2}
    return ok, f"{len(cases)} golden cases, exit codes {sorted(codes)}" + (f", mismatched {bad}" if bad else ""), None


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def run_criterion(n: int):
    start = time.perf_counter()
    ok, detail, limit = CRITERIA[n - 1]()
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed >= limit:
        ok = False
        detail += f"; over the {limit}s limit"
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {detail}"
    return ok, line


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, capsys):
    ok, line = run_criterion(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(n) for n in range(1, 10)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
