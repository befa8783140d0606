import pytest

from cainfty.bar import cochain_from_table
from cainfty.coalgebra import regular_comodule, trivial_coalgebra
from cainfty.fixtures import ONE, Z, c2, c2_cochain_table, exterior, k3
from cainfty.fuzz import coalgebra_cases
from cainfty.graded import BasisElement
from cainfty.homcomplex import (AdjunctionTriple, check_adjunction_isos, check_hom_square, hom_complex, phi1,
                                phi1_inverse, three_model_ranks)
from cainfty.modules import regular_module, tilde_module
from cainfty.ring import QQ

E1 = BasisElement(1, 0)


def fixture_triple():
    A = k3(QQ)
    C = c2(QQ)
    tau = cochain_from_table(C, A.embed(), c2_cochain_table())
    return AdjunctionTriple(regular_comodule(C), tilde_module(A), tau, name="fixture")


def test_hom_differential_by_hand():
    H = fixture_triple().hom
    assert H.degrees() == [-1, 0, 1]
    # f = (z -> [x]) is hit by f d_N at 1, and the tau term dies in the quotient
    assert H.d_key((Z, E1)) == {(ONE, E1): -1}
    assert H.d_key((ONE, ONE)) == {}
    assert [len(H.cocycles(d)) for d in (-1, 0, 1)] == [0, 1, 1]


def test_hom_square_on_fixture():
    assert check_hom_square(fixture_triple().hom).passed


def test_hom_square_fails_on_a_non_module():
    # K3 acting on itself does not absorb the curvature
    tau = cochain_from_table(c2(QQ), k3(QQ).embed(), c2_cochain_table())
    H = hom_complex(regular_comodule(c2(QQ)), regular_module(k3(QQ)), tau)
    assert not check_hom_square(H).passed


def test_adjunction_isos_on_fixture():
    T = fixture_triple()
    rep = check_adjunction_isos(T)
    assert rep.passed
    assert len(rep.records) == 9


@pytest.mark.parametrize("degree", [-1, 0, 1])
def test_three_models_agree_on_fixture(degree):
    ranks = three_model_ranks(fixture_triple(), degree)
    assert len(set(ranks.values())) == 1


def test_trivial_coalgebra_gives_underlying_complex():
    k = trivial_coalgebra(QQ)
    E = exterior(QQ)
    tau = cochain_from_table(k, E.embed(), {})
    T = AdjunctionTriple(regular_comodule(k), regular_module(E), tau, name="triv")
    assert T.hom.degrees() == [0, 1]
    assert three_model_ranks(T) == {"hom": 1, "comodule": 1, "module": 1}
    assert check_adjunction_isos(T).passed


def test_phi1_round_trip_on_basis_maps():
    T = fixture_triple()
    for key in T.hom.basis():
        F = phi1_inverse({key: 1}, T.N, QQ)
        assert phi1(F, T.tau.source) == {key: 1}


def test_fuzzed_triples():
    for case in coalgebra_cases(4, 4):
        T = AdjunctionTriple(regular_comodule(case.coalgebra), tilde_module(case.target), case.tau, name=case.name)
        assert check_hom_square(T.hom).passed, case.name
        assert check_adjunction_isos(T).passed, case.name
