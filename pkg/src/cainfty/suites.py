"""Composite verification runs shared by the acceptance tests and the CLI.

Each function returns a :class:`Report`; none of them record timings, so
reports are deterministic for a given seed.
"""

from __future__ import annotations

from collections import Counter

from .ainfty import check_cdg_axioms, check_stasheff, find_mc_elements, is_mc, mc_residual, project_cdg
from .bar import (bar, universal_twisting_cochain, check_codiff_square, check_coalgebra_morphism, check_twisting, coalgebra_morphisms_equal,
                  cochain_from_table, cochain_to_coalgebra_morphism, morphism_to_cochain)
from .coalgebra import check_coalgebra_axioms, regular_comodule
from .cobar import (calibrate_cobar_signs, cdg_morphism_to_cochain, check_cdg_morphism, cochain_to_cdg_morphism,
                    default_calibration_cases, pinned_signs)
from .fixtures import X, c2, c2_cochain_table, exterior, k3
from .fuzz import FUZZ_RING, coalgebra_cases, stasheff_cases
from .homcomplex import AdjunctionTriple, check_adjunction_isos, check_hom_square
from .modules import (check_lemma, check_twisted_square, regular_module, tilde_module)
from .report import FAIL, PASS, Report, fmt_vec
from .resolution import bar_resolution_homotopy, unit_homotopy
from .ring import QQ


def fuzz_equivalence(seed: int = 0, count: int = 100, p_max: int = 4, W: int = 6) -> Report:
    """check_stasheff and the bar d^2 check agree on every seeded structure;
    arity <= 2 cases are also compared with the cdg axioms."""
    rep = Report()
    stats: Counter = Counter()
    disagreements = []
    undetected = []
    for case in stasheff_cases(seed, count):
        A = case.algebra
        a = check_stasheff(A, p_max).passed
        b = check_codiff_square(bar(A, W)).passed
        third = None
        if not any(A.is_nonzero(k) for k in range(3, A.arity + 1)):
            third = check_cdg_axioms(project_cdg(A)).passed
        stats[(case.family, a)] += 1
        if a != b or (third is not None and third != a):
            disagreements.append(case.name)
        if case.expected_valid and not a:
            disagreements.append(case.name)
        if case.family == "mutation" and a and third is not True:
            undetected.append(case.name)
    detail = "; ".join(f"{fam} {'pass' if ok else 'fail'}={n}" for (fam, ok), n in sorted(stats.items()))
    rep.add("oracle-equivalence", ["stasheff", "bar-d-squared"], f"seed={seed}",
            FAIL if disagreements else PASS, witness=",".join(disagreements) or None, detail=detail)
    rep.add("mutation-detection", ["stasheff", "bar-d-squared"], f"seed={seed}",
            FAIL if undetected else PASS, witness=",".join(undetected) or None,
            detail="mutants that still satisfy every identity are confirmed by the cdg axioms")
    return rep


def k3_suite() -> Report:
    A = k3(QQ)
    rep = check_cdg_axioms(A)
    rep.extend(check_stasheff(A.embed(), 4))
    r = mc_residual(A.embed(), {X: -1})
    rep.add("mc-residual", ["K3", "-x"], 0, FAIL if r else PASS)
    return rep


def twisting_roundtrip(tau, W: int, L: int, name: str) -> Report:
    """Forward images and both round trips for the two bijections."""
    C = tau.source
    keys = C.basis()
    rep = Report()
    rep.extend(check_twisting(tau))
    F = cochain_to_coalgebra_morphism(tau, W=W)
    rep.extend(check_coalgebra_morphism(F, keys))
    back = morphism_to_cochain(F)
    bad = next((k for k in keys if back(k) != tau(k)), None)
    rep.add("roundtrip-cochain-comorphism-cochain", [name], "all", FAIL if bad is not None else PASS,
            witness=repr(bad) if bad is not None else None)
    F2 = cochain_to_coalgebra_morphism(back, B=F.target)
    bad = coalgebra_morphisms_equal(F, F2, keys)
    rep.add("roundtrip-comorphism-cochain-comorphism", [name], "all", FAIL if bad is not None else PASS,
            witness=repr(bad) if bad is not None else None)
    phi = cochain_to_cdg_morphism(tau, L=L)
    rep.extend(check_cdg_morphism(phi))
    back = cdg_morphism_to_cochain(phi)
    bad = next((k for k in keys if back(k) != tau(k)), None)
    rep.add("roundtrip-cochain-cdgmorphism-cochain", [name], "all", FAIL if bad is not None else PASS,
            witness=repr(bad) if bad is not None else None)
    phi2 = cochain_to_cdg_morphism(back, O=phi.source)
    bad = next((u for u in phi.source.basis() if phi(u) != phi2(u)), None)
    rep.add("roundtrip-cdgmorphism-cochain-cdgmorphism", [name], "all", FAIL if bad is not None else PASS,
            witness=repr(bad) if bad is not None else None)
    return rep


def twisting_suite(seed: int = 0, count: int = 50, W: int = 4, L: int = 3) -> Report:
    A = k3(QQ).embed()
    C = c2(QQ)
    rep = twisting_roundtrip(cochain_from_table(C, A, c2_cochain_table()), W, L, "C2->K3")
    for case in coalgebra_cases(seed, count):
        rep.extend(check_coalgebra_axioms(case.coalgebra))
        rep.extend(twisting_roundtrip(case.tau, W, L, case.name))
    return rep


def calibration_suite() -> Report:
    rep = Report()
    best, log = calibrate_cobar_signs(default_calibration_cases())
    pinned = pinned_signs()
    ok = best is not None and best.as_tuple() == pinned.as_tuple()
    rep.add("cobar-calibration", ["pinned"], "all", PASS if ok else FAIL,
            detail=f"recalibrated {best.as_tuple() if best else None}, pinned {pinned.as_tuple()}")
    return rep


def lemma_suite(W: int = 5) -> Report:
    """The g-lemma for C2 and for the universal cochain on B_{<=W} K3, then
    d_a^2 = 0 on the quotient module for every Maurer-Cartan element found
    by exhaustive search over GF(101), and for -x over Q."""
    A = k3(QQ)
    M = tilde_module(A)
    C = c2(QQ)
    tau = cochain_from_table(C, A.embed(), c2_cochain_table())
    rep = check_lemma(M, tau)
    B = bar(A.embed(), W)
    rep.extend(check_lemma(M, universal_twisting_cochain(B), keys=B.basis(W - 2)))
    Af = k3(FUZZ_RING)
    found = find_mc_elements(Af.embed())
    Mf = tilde_module(Af)
    for a in found:
        rep.extend(check_twisted_square(Mf, a))
    minus_x = {X: -1}
    if is_mc(A.embed(), minus_x):
        rep.extend(check_twisted_square(M, minus_x))
    rep.add("mc-elements-found", ["K3"], 1, PASS if found else FAIL,
            detail="; ".join(" + ".join(f"{c}*{k}" for k, c in fmt_vec(a, FUZZ_RING).items()) or "0"
                             for a in found) or "none")
    return rep


def _fixture_triple() -> AdjunctionTriple:
    A = k3(QQ)
    C = c2(QQ)
    tau = cochain_from_table(C, A.embed(), c2_cochain_table())
    return AdjunctionTriple(regular_comodule(C), tilde_module(A), tau, name="fixture")


def adjunction_suite(seed: int = 0, count: int = 25) -> Report:
    T = _fixture_triple()
    rep = check_hom_square(T.hom)
    rep.extend(check_adjunction_isos(T))
    for case in coalgebra_cases(seed + 1, count):
        M = tilde_module(case.target)
        T = AdjunctionTriple(regular_comodule(case.coalgebra), M, case.tau, name=case.name)
        rep.extend(check_hom_square(T.hom))
        rep.extend(check_adjunction_isos(T))
    return rep


def resolution_suite(W: int = 5) -> Report:
    rep = bar_resolution_homotopy(tilde_module(k3(QQ)), W)
    rep.extend(bar_resolution_homotopy(regular_module(exterior(QQ), name="Ext_A"), W))
    return rep


def unit_homotopy_suite(W: int = 5) -> Report:
    return unit_homotopy(regular_module(exterior(QQ), name="Ext_A"), W)
