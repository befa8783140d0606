import random
from fractions import Fraction

import pytest

from cainfty.ainfty import CurvedAInftyAlgebra, identity_morphism
from cainfty.bar import (bar, bar_morphism, check_codiff_square, check_coalgebra_morphism, check_twisting,
                         cochain_from_table, cochain_to_coalgebra_morphism, coalgebra_morphisms_equal,
                         morphism_to_cochain, twisting_residual, universal_twisting_cochain)
from cainfty.coalgebra import (CoalgebraError, DgCoalgebra, check_coalgebra_axioms, check_comodule_axioms,
                               materialize, regular_comodule, trivial_coalgebra, validate_coalgebra)
from cainfty.cobar import (CobarSigns, adjunction_algebras, calibrate_cobar_signs, canonical_cochain,
                           cdg_morphism_to_cochain, check_adjunction, check_cdg_morphism, check_cobar, cobar,
                           cochain_to_cdg_morphism, default_calibration_cases, pinned_signs)
from cainfty.fixtures import ONE, X, X2, Z, c2, c2_cochain_table, cone_algebra, exterior, k3
from cainfty.fuzz import change_coalgebra_basis, coalgebra_cases, conjugate
from cainfty.graded import BasisElement, GradedModule, s, w
from cainfty.report import PASS, SKIPPED, WindowExceeded
from cainfty.ring import QQ


def K3():
    return k3(QQ).embed()


def tau_c2(sign=-1):
    return cochain_from_table(c2(QQ), K3(), c2_cochain_table(sign))


# ---------------------------------------------------------------- bar construction

def test_bar_of_zero_algebra_is_tensor_coalgebra():
    A = CurvedAInftyAlgebra(QQ, GradedModule.of({}), {}, arity=2, name="0")
    B = bar(A, 3)
    assert B.basis() == [()]
    assert check_codiff_square(B).passed


def test_bar_codifferential_on_k3_by_hand():
    B = bar(K3(), 4)
    # b_0 = -s m_0 inserts the curvature
    assert B.codiff(()) == {(s(X2),): -1}
    # -s d x plus curvature inserted on either side
    assert B.codiff((s(X),)) == {(s(X2),): -2, (s(X2), s(X)): -1, (s(X), s(X2)): -1}


def test_bar_codifferential_squares_to_zero_on_k3():
    rep = check_codiff_square(bar(K3(), 4))
    assert rep.passed
    statuses = {r.clause: r.status for r in rep.records}
    assert statuses[0] == statuses[2] == PASS
    assert statuses[3] == SKIPPED


def test_window_bookkeeping_curved_versus_flat():
    assert bar(K3(), 5).exact_through == 4
    assert bar(exterior(QQ).embed(), 5).exact_through == 5
    # enlarging the window verifies the clauses the smaller one skipped
    small = check_codiff_square(bar(K3(), 4))
    large = check_codiff_square(bar(K3(), 6))
    skipped = {r.clause for r in small.records if r.status == SKIPPED}
    assert skipped and all(r.status == PASS for r in large.records if r.clause in skipped)


def test_bar_of_uncurved_algebra_has_no_curvature_term():
    B = bar(exterior(QQ).embed(), 3)
    assert B.codiff(()) == {}
    assert check_codiff_square(B).passed


def test_bar_coalgebra_axioms_after_materialising():
    C = materialize(bar(K3(), 3), name="BK3")
    assert check_coalgebra_axioms(C).passed
    assert C.module.total_rank == 1 + 3 + 9 + 27


def test_bar_weight_cap_must_be_positive():
    with pytest.raises(ValueError):
        bar(K3(), 0)


def test_bar_of_identity_is_identity():
    A = K3()
    B = bar(A, 3)
    F = bar_morphism(identity_morphism(A), B, B)
    for word in B.basis():
        assert F(word) == {word: 1}


# ---------------------------------------------------------------- twisting cochains

def test_universal_twisting_cochain():
    B = bar(K3(), 4)
    tau = universal_twisting_cochain(B)
    assert tau(()) == {}
    assert tau((s(X),)) == {X: 1}
    assert tau((s(X), s(X))) == {}
    assert check_twisting(tau, B.basis(3)).passed


def test_c2_cochain_minus_x_squared_is_twisting():
    assert twisting_residual(tau_c2(-1)) == {}
    assert check_twisting(tau_c2(-1)).passed


def test_c2_cochain_plus_x_squared_fails_with_residual():
    # curvature plus tau(d 1) = x^2 + x^2
    assert twisting_residual(tau_c2(+1)) == {ONE: {X2: 2}}
    rep = check_twisting(tau_c2(+1))
    assert not rep.passed


def test_cochain_to_comorphism_round_trips():
    tau = tau_c2()
    F = cochain_to_coalgebra_morphism(tau, W=4)
    assert check_coalgebra_morphism(F).passed
    back = morphism_to_cochain(F)
    assert all(back(k) == tau(k) for k in tau.source.basis())
    F2 = cochain_to_coalgebra_morphism(back, B=F.target)
    assert coalgebra_morphisms_equal(F, F2, tau.source.basis()) is None


def test_comorphism_needs_a_window():
    with pytest.raises(ValueError):
        cochain_to_coalgebra_morphism(tau_c2())


def test_comorphism_beyond_the_weight_cap_raises():
    B = bar(K3(), 4)
    BB = materialize(B, name="BK3")
    tau = morphism_to_cochain(cochain_to_coalgebra_morphism(
        cochain_from_table(BB, K3(), {e: {} for e in BB.basis()}), W=4))
    with pytest.raises(WindowExceeded):
        cochain_to_coalgebra_morphism(tau, W=2)(BB.basis()[-1])


def test_non_twisting_cochain_gives_non_morphism():
    F = cochain_to_coalgebra_morphism(tau_c2(+1), W=4)
    assert not check_coalgebra_morphism(F).passed


# ---------------------------------------------------------------- cobar construction

def test_cobar_of_ground_ring_is_zero():
    O = cobar(trivial_coalgebra(QQ), 3)
    assert O.basis() == [] and O.curvature == {}
    assert check_cobar(O).passed


def test_cobar_of_c2():
    O = cobar(c2(QQ), 3)
    u = w(Z)
    assert O.letters() == [u]
    assert O.curvature == {(u,): 1}
    # z is primitive and closed, so the generator is a cycle
    assert O.d((u,)) == {}
    assert O.d((u, u)) == {}
    assert check_cobar(O).passed


def test_cobar_product_beyond_length_cap_raises():
    O = cobar(c2(QQ), 2)
    u = w(Z)
    with pytest.raises(WindowExceeded):
        O.mul({(u, u): 1}, {(u,): 1})


def test_cobar_length_cap_must_be_positive():
    with pytest.raises(ValueError):
        cobar(c2(QQ), 0)


@pytest.mark.parametrize("A", [exterior(QQ), cone_algebra(QQ)], ids=["exterior", "cone"])
def test_cobar_of_bar_passes(A):
    O = cobar(bar(A.embed(), 3), 3)
    assert check_cobar(O).passed
    assert O.curvature == {}


def test_cobar_of_curved_bar_has_curvature_from_the_codifferential():
    O = cobar(bar(K3(), 3), 3)
    assert O.curvature == {(w((s(X2),)),): -1}


def test_canonical_cochain_is_twisting():
    O = cobar(c2(QQ), 3)
    tau = canonical_cochain(O)
    assert tau(Z) == {(w(Z),): -1}
    assert check_twisting(tau, [ONE, Z]).passed


def test_wrong_signs_break_the_cobar():
    pinned = pinned_signs().as_tuple()
    flipped = CobarSigns(pinned[0], pinned[1], pinned[2], -pinned[3])
    O = cobar(c2(QQ), 3, flipped)
    tau = canonical_cochain(O)
    assert not check_twisting(tau, [ONE, Z]).passed


def test_pinned_signs_are_the_calibrated_ones():
    best, log = calibrate_cobar_signs(default_calibration_cases())
    assert best == pinned_signs()
    assert pinned_signs().as_tuple() == (-1, -1, 1, 1)
    assert any("passes all cases" in line for line in log)


def test_cochain_to_cdg_morphism_round_trips():
    tau = tau_c2()
    phi = cochain_to_cdg_morphism(tau, L=3)
    assert check_cdg_morphism(phi).passed
    back = cdg_morphism_to_cochain(phi)
    assert all(back(k) == tau(k) for k in tau.source.basis())
    phi2 = cochain_to_cdg_morphism(back, O=phi.source)
    assert all(phi(u) == phi2(u) for u in phi.source.basis())


def test_non_twisting_cochain_gives_non_cdg_morphism():
    phi = cochain_to_cdg_morphism(tau_c2(+1), L=3)
    assert not check_cdg_morphism(phi).passed


@pytest.mark.parametrize("A", [exterior(QQ), cone_algebra(QQ), k3(QQ)], ids=["exterior", "cone", "k3"])
def test_adjunction_unit_counit_envelope(A):
    data = adjunction_algebras(A.embed(), c2(QQ), 3, 3)
    assert check_adjunction(data).passed


# ---------------------------------------------------------------- coalgebras and fuzzing

def test_c2_axioms_and_levels():
    C = c2(QQ)
    assert check_coalgebra_axioms(C).passed
    assert C.level(ONE) == 0 and C.level(Z) == 1


def test_non_coassociative_coalgebra_is_rejected():
    C = c2(QQ)
    bad = DgCoalgebra(QQ, C.module, ONE, {ONE: {(ONE, ONE): 1}, Z: {(Z, ONE): 1, (ONE, Z): 2}},
                      {ONE: {Z: 1}}, name="bad")
    assert not check_coalgebra_axioms(bad).passed
    with pytest.raises(CoalgebraError):
        validate_coalgebra(bad)


def test_regular_comodule_axioms():
    assert check_comodule_axioms(regular_comodule(c2(QQ))).passed
    assert check_comodule_axioms(regular_comodule(materialize(bar(K3(), 3)))).passed


def test_coalgebra_basis_change_preserves_axioms():
    rng = random.Random(3)
    C2, P = change_coalgebra_basis(materialize(bar(exterior(QQ).embed(), 2)), rng)
    assert check_coalgebra_axioms(C2).passed


def test_fuzzed_coalgebra_cases_are_valid():
    for case in coalgebra_cases(11, 8):
        assert check_coalgebra_axioms(case.coalgebra).passed, case.name
        assert check_twisting(case.tau).passed, case.name


def test_fuzzed_coalgebra_cases_are_deterministic():
    a = [c.name for c in coalgebra_cases(5, 6)]
    b = [c.name for c in coalgebra_cases(5, 6)]
    assert a == b


def test_group_like_element_is_not_cocomplete():
    g = BasisElement(0, 1)
    D = DgCoalgebra(QQ, GradedModule.of({0: 2}), ONE,
                    {ONE: {(ONE, ONE): 1}, g: {(g, ONE): 1, (ONE, g): 1, (g, g): 1}}, {}, name="G")
    rep = check_coalgebra_axioms(D)
    assert rep.first_failure().check == "coalgebra-cocomplete"
    with pytest.raises(CoalgebraError):
        twisting_residual(cochain_from_table(D, exterior(QQ).embed(), {}))


# ---------------------------------------------------------------- naturality and windows

def test_cdg_morphism_is_natural_in_the_target():
    # g = P : K3s -> K3 is a strict cdg morphism and g tau' = tau
    A = K3()
    P = {ONE: {ONE: 1}, X: {X: 2}, X2: {X2: 4}}
    As = conjugate(A, P, name="K3s")
    tau_s = cochain_from_table(c2(QQ), As, {Z: {X2: Fraction(-1, 4)}})
    assert check_twisting(tau_s).passed
    phi = cochain_to_cdg_morphism(tau_c2(), L=3)
    phi_s = cochain_to_cdg_morphism(tau_s, O=phi.source)

    def g(vec):
        out = {}
        for k, c in vec.items():
            for o, d in P[k].items():
                out[o] = out.get(o, 0) + c * d
        return {k: c for k, c in out.items() if c}
    for u in phi.source.basis():
        assert phi(u) == g(phi_s(u))


@pytest.mark.parametrize("W", [3, 4])
def test_truncated_codifferential_agrees_with_larger_window(W):
    small, big = bar(K3(), W), bar(K3(), W + 2)
    for word in small.basis(small.exact_through):
        assert small.codiff(word) == big.codiff(word)


def test_codifferential_beyond_exactness_raises():
    B = bar(K3(), 3)
    with pytest.raises(WindowExceeded):
        B.codiff((s(X),) * 3)
