"""Regenerate the golden CLI reports under tests/golden.

Run from the repository root after make_fixtures.py: python3 tools/make_golden.py
"""

import contextlib
import io
import json
import os
from pathlib import Path

from cainfty.cli import main

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"


def run(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def main_():
    os.chdir(ROOT / "tests" / "fixtures")
    for case in json.loads((GOLDEN / "cases.json").read_text()):
        code, out = run(case["argv"] + ["--format", "json"])
        if code != case["exit"]:
            raise SystemExit(f"{case['name']}: exit {code}, expected {case['exit']}")
        (GOLDEN / f"{case['name']}.json").write_text(out, encoding="utf-8")
    code, out = run(["check-algebra", "k3.json", "--pmax", "4"])
    (GOLDEN / "check-algebra-k3.txt").write_text(out, encoding="utf-8")


if __name__ == "__main__":
    main_()
