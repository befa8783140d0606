import contextlib
import io
import json
import os
import subprocess
import sys

import pytest

from cainfty.cli import main
from cainfty.report import Report

from conftest import FIXTURES, GOLDEN

CASES = json.loads((GOLDEN / "cases.json").read_text())


def run(argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    old = os.getcwd()
    os.chdir(FIXTURES)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            if stdin is not None:
                sys.stdin, saved = io.StringIO(stdin), sys.stdin
            try:
                code = main(argv)
            finally:
                if stdin is not None:
                    sys.stdin = saved
    finally:
        os.chdir(old)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden_json_is_byte_identical(case):
    code, out, _ = run(case["argv"] + ["--format", "json"])
    assert code == case["exit"]
    assert out == (GOLDEN / f"{case['name']}.json").read_text()


def test_golden_text():
    code, out, _ = run(["check-algebra", "k3.json", "--pmax", "4"])
    assert code == 0
    assert out == (GOLDEN / "check-algebra-k3.txt").read_text()


def test_every_subcommand_has_a_golden_case():
    from cainfty.cli import COMMANDS
    assert {c["argv"][0] for c in CASES} == set(COMMANDS)


def test_exit_codes_cover_zero_one_two():
    assert {c["exit"] for c in CASES} == {0, 1}
    assert run(["check-coalgebra", "bad-coef.json"])[0] == 2
    assert run(["check-coalgebra", "bad-kind.json"])[0] == 2
    assert run(["check-coalgebra", "bad-syntax.json"])[0] == 2


def test_parse_error_goes_to_stderr():
    code, out, err = run(["check-coalgebra", "bad-coef.json"])
    assert code == 2 and out == ""
    assert err.startswith("cainfty: parse error: objects.C2.codifferential")


def test_usage_errors_exit_two():
    assert run(["no-such-command"])[0] == 2
    assert run(["check-algebra"])[0] == 2
    assert run(["check-algebra", "k3.json", "--name", "nothing"])[0] == 2
    assert run(["check-coalgebra", "k3.json"])[0] == 2
    assert run(["check-algebra", "missing.json"])[0] == 2


def test_stdin_input():
    code, out, _ = run(["check-coalgebra", "-"], stdin=(FIXTURES / "c2.json").read_text())
    assert code == 0 and out.endswith("0 failed, 0 skipped\n")


def test_bar_output_feeds_check_coalgebra(tmp_path):
    target = tmp_path / "bk3.json"
    code, out, _ = run(["bar", "k3.json", "-W", "3", "-o", str(target)])
    assert code == 0 and target.exists()
    code, out, _ = run(["check-coalgebra", str(target)])
    assert code == 0
    code, out, _ = run(["cobar", str(target), "-L", "2"])
    assert code == 0


def test_report_output_file(tmp_path):
    target = tmp_path / "rep.json"
    code, out, _ = run(["check-algebra", "k3.json", "--format", "json", "-o", str(target)])
    assert code == 0 and out == ""
    assert Report.from_json(target.read_text()).passed


def test_mutated_algebra_reports_a_witness():
    code, out, _ = run(["check-algebra", "k3-mutated.json", "--format", "json"])
    rep = json.loads(out)
    assert code == 1
    assert any(r["status"] == "fail" and "witness" in r for r in rep["records"])


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cainfty.cli", "check-algebra", str(FIXTURES / "k3.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.endswith("0 failed, 0 skipped\n")


def test_version_flag():
    code, out, _ = run(["--version"])
    assert code == 0 and out.startswith("cainfty ")
