import random
from fractions import Fraction
from itertools import product

import pytest

from cainfty.ainfty import (AInftyMorphism, AlgebraError, CdgAlgebra, CurvedAInftyAlgebra, cdg_from_element,
                            check_cdg_axioms, check_morphism, check_stasheff, check_strict_unit, compose_morphisms,
                            composition_sign, convolution_algebra, embed_cdg, identity_morphism, is_mc,
                            mc_residual, morphism_identity_residual, project_cdg, stasheff_value, strict_morphism)
from cainfty.bar import bar, bar_morphism, check_codiff_square, coalgebra_morphisms_equal, compose_coalgebra_morphisms
from cainfty.coalgebra import trivial_coalgebra
from cainfty.fixtures import ONE, X, X2, c2, cone_algebra, exterior, k3, truncated_polynomial
from cainfty.fuzz import FUZZ_RING, conjugate, mutate, random_cdg, random_invertible, random_morphism_components, \
    random_module, random_ops, transport
from cainfty.graded import BasisElement, GradedModule
from cainfty.ring import QQ

F = FUZZ_RING


def zero_algebra(module, arity=2, unit=None):
    return CurvedAInftyAlgebra(QQ, module, {}, arity, unit, "Z0")


# ---------------------------------------------------------------- Stasheff identities

def test_all_operations_zero_pass():
    A = zero_algebra(GradedModule.of({0: 1, 1: 2}), arity=4)
    assert check_stasheff(A, 4).passed


def test_p0_clause_is_m1_of_curvature():
    # m_0 = e2, m_1(e2) = e3: the p = 0 clause reads m_1 m_0 = e3
    M = GradedModule.of({2: 1, 3: 1})
    e2, e3 = BasisElement(2, 0), BasisElement(3, 0)
    A = CurvedAInftyAlgebra(QQ, M, {0: {(): {e2: 1}}, 1: {(e2,): {e3: 1}}}, 1)
    assert stasheff_value(A, ()) == {e3: 1}
    rep = check_stasheff(A, 1)
    assert [r.status for r in rep.ordered] == ["fail", "pass"]


def test_k3_passes_stasheff_through_p4():
    rep = check_stasheff(k3(QQ).embed(), 4)
    assert rep.passed and len(rep.records) == 5


def test_inhomogeneous_operation_rejected():
    A = k3(QQ)
    with pytest.raises(AlgebraError):
        CdgAlgebra(QQ, A.module, {X2: 1, X: 1}, A.differential, A.product, A.unit)


def test_curvature_term_in_bar_raises_weight():
    B = bar(k3(QQ).embed(), 3)
    from cainfty.graded import s
    d = B.codiff((s(X),))
    assert {len(word) for word in d} == {1, 2}


@pytest.mark.parametrize("seed", range(12))
def test_stasheff_agrees_with_bar_square_on_random_operations(seed):
    rng = random.Random(seed)
    M = random_module(rng, lo=-1, hi=2, total=(2, 3))
    A = CurvedAInftyAlgebra(F, M, random_ops(rng, F, M, 3, 0.4), 3, None, f"R{seed}")
    assert check_stasheff(A, 4).passed == check_codiff_square(bar(A, 6)).passed


# ---------------------------------------------------------------- strict units

def test_k3_unit():
    assert check_strict_unit(k3(QQ).embed()).passed


def test_zero_algebra_with_forced_unit_fails():
    A = zero_algebra(GradedModule.of({0: 1}), unit=ONE)
    rep = check_strict_unit(A)
    assert not rep.passed and rep.first_failure().check == "unit-m2"


def test_unit_slots_of_zero_m3_pass():
    A = k3(QQ).embed()
    A3 = CurvedAInftyAlgebra(QQ, A.module, dict(A.ops), 3, A.unit, "K3")
    rep = check_strict_unit(A3)
    assert rep.passed and any(r.clause == 3 for r in rep.records)


def test_missing_unit_is_an_error():
    with pytest.raises(AlgebraError):
        check_strict_unit(zero_algebra(GradedModule.of({0: 1})))


# ---------------------------------------------------------------- cdg algebras

def test_cdg_from_zero_element_is_dg():
    A = cdg_from_element(truncated_polynomial(QQ), {})
    assert A.curvature == {} and A.differential == {}


def test_k3_structure_constants():
    A = k3(QQ)
    assert A.curvature == {X2: 1}
    assert A.differential.get(ONE, {}) == {}
    assert A.differential[X] == {X2: 2}
    assert A.differential.get(X2, {}) == {}
    assert A.d(A.curvature) == {}
    assert check_cdg_axioms(A).passed


def test_cdg_from_element_rejects_wrong_degree():
    with pytest.raises(AlgebraError):
        cdg_from_element(truncated_polynomial(QQ), {ONE: 1})


def test_embed_project_round_trip():
    A = k3(QQ)
    B = project_cdg(embed_cdg(A))
    assert (B.curvature, B.differential, B.product, B.unit) == (A.curvature, A.differential, A.product, A.unit)
    Z = CdgAlgebra(QQ, GradedModule.of({}), {}, {}, {})
    assert check_stasheff(Z.embed(), 3).passed


@pytest.mark.parametrize("seed", range(20))
def test_cdg_axioms_agree_with_stasheff_under_mutation(seed):
    rng = random.Random(seed)
    A = random_cdg(rng)
    E = A.embed()
    assert check_cdg_axioms(A).passed and check_stasheff(E, 3).passed
    Mut = mutate(E, rng)
    assert check_cdg_axioms(project_cdg(Mut)).passed == check_stasheff(Mut, 3).passed


def test_flipping_one_k3_constant_is_detected():
    A = k3(QQ)
    prod = dict(A.product)
    prod[(ONE, X)] = {X: 2}
    bad = CdgAlgebra(QQ, A.module, A.curvature, A.differential, prod, A.unit)
    assert not check_cdg_axioms(bad).passed
    assert not check_stasheff(bad.embed(), 3).passed


# ---------------------------------------------------------------- morphisms

def test_identity_morphism_on_k3():
    rep = check_morphism(identity_morphism(k3(QQ).embed()), 3)
    assert rep.passed


def test_p0_clause_is_curvature_preservation():
    A = k3(QQ).embed()
    B = CurvedAInftyAlgebra(QQ, A.module, {**A.ops, 0: {(): {X2: 2}}}, 2, A.unit, "K3b")
    f = identity_morphism(A)
    f = AInftyMorphism(A, B, f.components)
    assert morphism_identity_residual(f, ()) == {X2: -1}


def test_empty_sum_sign_at_p1_matches_bar():
    rng = random.Random(3)
    A = random_cdg(rng).embed()
    P = random_invertible(rng, F, A.module, fixed=(A.unit,) if A.unit else ())
    B = conjugate(A, P, name="B")
    f = strict_morphism(B, A, P)
    rep = check_morphism(f, 3)
    assert rep.passed
    conv = [r for r in rep.records if r.check == "morphism-sign-convention"][0]
    assert "empty-sum sign at p=1 matches" in conv.detail


@pytest.mark.parametrize("seed", range(6))
def test_perturbed_component_is_caught_with_witness(seed):
    rng = random.Random(seed)
    A = random_cdg(rng).embed()
    f = identity_morphism(A)
    comps = {1: dict(f.components[1])}
    comps[2] = {}
    while not comps[2]:
        comps[2] = random_morphism_components(rng, F, A.module, 2, 0.5).get(2, {})
    g = AInftyMorphism(A, A, comps)
    rep = check_morphism(g, 3)
    bar_fail = [r for r in rep.failures if r.check == "morphism-bar"]
    id_fail = [r for r in rep.failures if r.check == "morphism-identity"]
    assert bar_fail and id_fail and bar_fail[0].witness


def test_composition_sign_example():
    assert composition_sign((1, 1)) == 1
    assert composition_sign((1, 2)) == -1
    assert composition_sign((2, 1)) == 1


def _random_algebra(rng, module, arity=2):
    return CurvedAInftyAlgebra(F, module, random_ops(rng, F, module, arity, 0.3), arity)


@pytest.mark.parametrize("seed", range(5))
def test_composition_matches_bar_functoriality(seed):
    rng = random.Random(seed)
    M = random_module(rng, lo=-1, hi=2, total=(2, 3))
    A, B, C = (_random_algebra(rng, M) for _ in range(3))
    f = AInftyMorphism(A, B, random_morphism_components(rng, F, M, 2, 0.5), "f")
    g = AInftyMorphism(B, C, random_morphism_components(rng, F, M, 2, 0.5), "g")
    gf = compose_morphisms(g, f)
    W = 3
    BA, BB, BC = bar(A, W), bar(B, W), bar(C, W)
    lhs = bar_morphism(gf, BA, BC)
    rhs = compose_coalgebra_morphisms(bar_morphism(g, BB, BC), bar_morphism(f, BA, BB))
    assert coalgebra_morphisms_equal(lhs, rhs, BA.basis(W)) is None


@pytest.mark.parametrize("seed", range(3))
def test_composition_is_associative(seed):
    rng = random.Random(10 + seed)
    M = random_module(rng, lo=0, hi=1, total=(2, 2))
    A = _random_algebra(rng, M)
    fs = [AInftyMorphism(A, A, random_morphism_components(rng, F, M, 2, 0.5), n) for n in "fgh"]
    f, g, h = fs
    left = compose_morphisms(compose_morphisms(h, g), f)
    right = compose_morphisms(h, compose_morphisms(g, f))
    assert left.components == right.components


def test_identity_is_neutral_for_composition():
    rng = random.Random(5)
    M = random_module(rng, lo=0, hi=1, total=(2, 2))
    A = _random_algebra(rng, M)
    f = AInftyMorphism(A, A, random_morphism_components(rng, F, M, 2, 0.5))
    one = identity_morphism(A)
    assert compose_morphisms(one, f).components == f.components
    assert compose_morphisms(f, one).components == f.components


def test_transported_structures_have_valid_morphisms():
    from cainfty.fuzz import _nilpotent_base
    checked = 0
    for seed in range(12):
        rng = random.Random(seed)
        A = _nilpotent_base(rng, F)
        comps = random_morphism_components(rng, F, A.module, 3, 0.6)
        comps[1] = {(e,): v for e, v in random_invertible(rng, F, A.module).items()}
        B, tail_zero = transport(A, AInftyMorphism(A, A, comps), 4, W=6)
        if not tail_zero:
            continue
        checked += 1
        assert check_stasheff(B, 4).passed
        assert check_morphism(AInftyMorphism(A, B, comps), 3).passed
    assert checked >= 3


# ---------------------------------------------------------------- Maurer-Cartan elements

@pytest.mark.parametrize("lam", [Fraction(-1), Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-3)])
def test_k3_mc_residual_is_square(lam):
    A = k3(QQ).embed()
    r = mc_residual(A, {X: lam} if lam else {})
    expected = (1 + lam) ** 2
    assert r == ({X2: expected} if expected else {})


def test_minus_x_is_mc_and_x_is_not():
    A = k3(QQ).embed()
    assert is_mc(A, {X: -1})
    assert mc_residual(A, {X: 1}) == {X2: 4}


def test_zero_is_mc_without_curvature():
    assert is_mc(exterior(QQ).embed(), {})


def test_mc_residual_rejects_wrong_degree():
    with pytest.raises(AlgebraError):
        mc_residual(k3(QQ).embed(), {ONE: 1})


@pytest.mark.parametrize("seed", range(6))
def test_mc_residual_natural_under_strict_morphisms(seed):
    rng = random.Random(seed)
    A = random_cdg(rng).embed()
    P = random_invertible(rng, F, A.module, fixed=(A.unit,) if A.unit else ())
    B = conjugate(A, P, name="B")  # P: B -> A is a strict morphism
    a = {e: rng.randrange(1, 101) for e in B.module.basis(1)}
    lhs = mc_residual(A, _apply(P, a))
    rhs = _apply(P, mc_residual(B, a))
    assert lhs == rhs


def _apply(cols, vec):
    out = {}
    for e, c in vec.items():
        for t, d in cols.get(e, {}).items():
            out[t] = (out.get(t, 0) + c * d) % 101
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------- convolution algebras

def test_convolution_with_trivial_coalgebra_is_the_algebra():
    A = k3(QQ).embed()
    H = convolution_algebra(trivial_coalgebra(QQ), A)
    k1 = trivial_coalgebra(QQ).one
    iso = {a: H.element[(k1, a)] for a in A.basis()}
    for n in range(0, 3):
        for t in product(A.basis(), repeat=n):
            expect = {iso[o]: c for o, c in A.op(n, t).items()}
            assert H.op(n, tuple(iso[a] for a in t)) == expect


def test_convolution_curvature_is_m0_counit():
    A = k3(QQ).embed()
    C = c2(QQ)
    H = convolution_algebra(C, A)
    assert H.to_map(H.curvature) == {C.one: {X2: 1}}


def test_convolution_of_zero_algebra_only_has_dual_codifferential():
    C = c2(QQ)
    A = zero_algebra(GradedModule.of({0: 1, 1: 1, 2: 1}))
    H = convolution_algebra(C, A)
    assert not H.is_nonzero(0) and not H.is_nonzero(2)
    for (c, a), E in H.element.items():
        got = H.to_map(H.op(1, (E,)))
        sign = -1 if E.degree % 2 else 1
        # b_1(f) = -(-1)^{|f|} f d_C, and d(1) = z
        expect = {C.one: {a: -sign}} if c == C.basis()[1] else {}
        assert got == expect


@pytest.mark.parametrize("make", [k3, cone_algebra, exterior])
def test_convolution_algebra_passes_stasheff(make):
    H = convolution_algebra(c2(QQ), make(QQ).embed())
    assert check_stasheff(H, 3).passed
