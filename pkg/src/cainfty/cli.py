"""Command-line front end.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage
or parse errors.  Skipped (out-of-window) records never change the code.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Dict, List, Optional

from . import __version__
from .ainfty import (CdgAlgebra, CurvedAInftyAlgebra, AInftyMorphism, check_cdg_axioms, check_morphism,
                     check_stasheff, check_strict_unit)
from .bar import TwistingCochain, bar
from .coalgebra import DgCoalgebra, check_coalgebra_axioms, materialize, regular_comodule
from .cobar import check_cobar, cobar
from .homcomplex import AdjunctionTriple, check_adjunction_isos, check_hom_square
from .io import ParseError, load, serialize
from .modules import (CdgModule, CurvedAInftyModule, ModuleMorphism, check_lemma, check_module,
                      check_module_morphism, check_unital_module, naive_cohomology)
from .report import BudgetExceeded, PASS, Report, WindowExceeded
from .resolution import bar_resolution_homotopy, unit_homotopy
from .suites import fuzz_equivalence, twisting_roundtrip


class UsageError(Exception):
    pass


def _select(objects: Dict[str, Any], types, name: Optional[str], what: str) -> List[tuple]:
    if name is not None:
        if name not in objects:
            raise UsageError(f"no object named {name!r}")
        if not isinstance(objects[name], types):
            raise UsageError(f"{name!r} is not {what}")
        return [(name, objects[name])]
    found = [(n, o) for n, o in objects.items() if isinstance(o, types)]
    if not found:
        raise UsageError(f"the file contains no {what}")
    return found


def _embed(A):
    return A.embed() if isinstance(A, CdgAlgebra) else A


def cmd_check_algebra(args, ring, objects) -> Report:
    rep = Report()
    for name, A in _select(objects, (CdgAlgebra, CurvedAInftyAlgebra), args.name, "an algebra"):
        if isinstance(A, CdgAlgebra):
            rep.extend(check_cdg_axioms(A))
        Ae = _embed(A)
        rep.extend(check_stasheff(Ae, args.pmax))
        if Ae.unit is not None:
            rep.extend(check_strict_unit(Ae))
    return rep


def cmd_check_module(args, ring, objects) -> Report:
    rep = Report()
    for name, M in _select(objects, (CdgModule, CurvedAInftyModule), args.name, "a module"):
        rep.extend(check_module(M, args.pmax))
        if M.algebra.unit is not None:
            rep.extend(check_unital_module(M))
    return rep


def cmd_check_morphism(args, ring, objects) -> Report:
    rep = Report()
    for name, f in _select(objects, (AInftyMorphism, ModuleMorphism), args.name, "a morphism"):
        if isinstance(f, AInftyMorphism):
            rep.extend(check_morphism(f, args.pmax))
        else:
            rep.extend(check_module_morphism(f, args.pmax))
    return rep


def cmd_check_coalgebra(args, ring, objects) -> Report:
    rep = Report()
    for name, C in _select(objects, DgCoalgebra, args.name, "a coalgebra"):
        rep.extend(check_coalgebra_axioms(C))
    return rep


def cmd_check_twisting(args, ring, objects) -> Report:
    rep = Report()
    for name, tau in _select(objects, TwistingCochain, args.name, "a twisting cochain"):
        rep.extend(twisting_roundtrip(tau, args.weight, args.length, name))
    return rep


def cmd_bar(args, ring, objects) -> Report:
    (name, A), = _select(objects, (CdgAlgebra, CurvedAInftyAlgebra), args.name, "an algebra")[:1]
    B = bar(_embed(A), args.weight)
    C = materialize(B, name=f"B{name}")
    rep = check_coalgebra_axioms(C)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize(ring, {C.name: C}))
        args.output = None
    return rep


def cmd_cobar(args, ring, objects) -> Report:
    rep = Report()
    for name, C in _select(objects, DgCoalgebra, args.name, "a coalgebra"):
        rep.extend(check_cobar(cobar(C, args.length)))
    return rep


def _module_over(objects, A, name):
    for n, M in objects.items():
        if isinstance(M, CdgModule) and M.algebra is A and (name is None or n == name):
            return M
    raise UsageError("no cdg module over the cochain's target algebra")


def cmd_check_adjunction(args, ring, objects) -> Report:
    rep = Report()
    for name, tau in _select(objects, TwistingCochain, args.name, "a twisting cochain"):
        A = getattr(tau, "algebra_object", tau.target)
        M = _module_over(objects, A, args.module)
        T = AdjunctionTriple(regular_comodule(tau.source), M, tau, name=name)
        rep.extend(check_hom_square(T.hom))
        rep.extend(check_adjunction_isos(T))
        rep.extend(check_lemma(M, tau))
    return rep


def cmd_resolve(args, ring, objects) -> Report:
    rep = Report()
    for name, M in _select(objects, CdgModule, args.module, "a cdg module"):
        rep.extend(bar_resolution_homotopy(M, args.weight))
        if args.unit:
            rep.extend(unit_homotopy(M, args.weight))
    return rep


def cmd_naive_cohomology(args, ring, objects) -> Report:
    rep = Report()
    for name, M in _select(objects, (CdgModule, CurvedAInftyModule), args.module, "a module"):
        ranks = naive_cohomology(M)
        rep.add("naive-cohomology", [name], "all", PASS,
                detail=", ".join(f"H^{d}={r}" for d, r in sorted(ranks.items())) or "zero")
    return rep


def cmd_fuzz(args, ring, objects) -> Report:
    return fuzz_equivalence(args.seed, args.count, args.pmax, args.weight)


COMMANDS = {
    "check-algebra": (cmd_check_algebra, "verify cdg axioms, Stasheff identities and units"),
    "check-module": (cmd_check_module, "verify module identities"),
    "check-morphism": (cmd_check_morphism, "verify algebra or module morphism identities"),
    "check-coalgebra": (cmd_check_coalgebra, "verify dg coalgebra axioms"),
    "check-twisting": (cmd_check_twisting, "verify twisting cochains and their two bijections"),
    "bar": (cmd_bar, "materialise a truncated bar construction"),
    "cobar": (cmd_cobar, "verify a truncated cobar construction"),
    "check-adjunction": (cmd_check_adjunction, "verify the hom-set isomorphisms and the g-lemma"),
    "resolve": (cmd_resolve, "verify the bar-resolution contracting homotopy"),
    "naive-cohomology": (cmd_naive_cohomology, "ranks of ker d / im d of a module"),
    "fuzz-equivalence": (cmd_fuzz, "Stasheff versus bar d^2 on seeded random structures"),
}

DEFAULTS = {"pmax": 4, "weight": 4, "length": 3}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cainfty", description="Exact verification of curved A-infinity structures.")
    p.add_argument("--version", action="version", version=f"cainfty {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        if name != "fuzz-equivalence":
            sp.add_argument("file", help="structure file, or - for stdin")
        sp.add_argument("--name", help="restrict to one named object")
        sp.add_argument("--module", help="name of the module to use")
        sp.add_argument("--pmax", type=int, default=DEFAULTS["pmax"])
        sp.add_argument("-W", "--weight", type=int, default=6 if name == "fuzz-equivalence" else DEFAULTS["weight"])
        sp.add_argument("-L", "--length", type=int, default=DEFAULTS["length"])
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--count", type=int, default=100)
        sp.add_argument("--unit", action="store_true", help="also verify the unit homotopy (resolve)")
        sp.add_argument("-o", "--output", help="write the report (or, for bar, the coalgebra) to this file")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fn, _ = COMMANDS[args.command]
    try:
        if args.command == "fuzz-equivalence":
            ring, objects = None, {}
        else:
            ring, objects = load(args.file)
        rep = fn(args, ring, objects)
    except ParseError as exc:
        print(f"cainfty: parse error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, WindowExceeded, BudgetExceeded) as exc:
        print(f"cainfty: {exc}", file=sys.stderr)
        return 2
    text = rep.to_json() if args.format == "json" else rep.to_text()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
