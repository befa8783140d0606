import pytest

from cainfty.ainfty import AlgebraError, CdgAlgebra, CurvedAInftyAlgebra
from cainfty.fixtures import ONE, exterior, k3
from cainfty.graded import BasisElement, GradedModule, s
from cainfty.modules import CdgModule, regular_module, tilde_module
from cainfty.report import FAIL, PASS, SKIPPED
from cainfty.resolution import AugmentationIdeal, Resolution, UnitCokernel, bar_resolution_homotopy, unit_homotopy
from cainfty.ring import QQ

E1 = BasisElement(1, 0)


def ext_module():
    return regular_module(exterior(QQ), name="Ext_A")


def statuses(rep):
    return [r.status for r in rep.records]


def test_homotopy_on_free_exterior_module():
    rep = bar_resolution_homotopy(ext_module(), 4)
    assert statuses(rep) == [PASS, SKIPPED]


def test_homotopy_on_tilde_k3():
    assert bar_resolution_homotopy(tilde_module(k3(QQ)), 4).passed


def test_literal_sign_rule_fails():
    rep = bar_resolution_homotopy(ext_module(), 4, sign_rule="literal")
    assert statuses(rep)[0] == FAIL
    assert rep.first_failure().witness is not None


def test_unknown_sign_rule():
    with pytest.raises(ValueError):
        Resolution(ext_module(), 4, sign_rule="other")


def test_zero_module_has_nothing_to_check():
    M = CdgModule(exterior(QQ), GradedModule.of({}), {}, {}, name="0")
    rep = bar_resolution_homotopy(M, 4)
    assert rep.passed and "0 basis elements" in rep.records[0].detail


def test_unit_homotopy_on_exterior():
    rep = unit_homotopy(ext_module(), 4)
    assert rep.passed
    assert "with a = 1" in rep.records[0].detail


def test_unit_homotopy_formula():
    U = UnitCokernel(ext_module(), 4)
    # the a = 1 branch vanishes, so H descends to the cokernel
    assert U.H((ONE, (), ONE)) == {}
    assert U.H((ONE, (), E1)) == {(ONE, (s(E1),), ONE): 1}
    assert U.H((E1, (), E1)) == {(E1, (s(E1),), ONE): -1}


def test_augmentation_ideal_needs_unit_and_flatness():
    with pytest.raises(AlgebraError):
        AugmentationIdeal(k3(QQ).embed())
    A = CurvedAInftyAlgebra(QQ, GradedModule.of({0: 1}), {}, arity=2, name="nounit")
    with pytest.raises(AlgebraError):
        AugmentationIdeal(A)


def test_augmentation_ideal_must_be_closed():
    t = BasisElement(0, 1)
    prod = {(ONE, ONE): {ONE: 1}, (ONE, t): {t: 1}, (t, ONE): {t: 1}, (t, t): {ONE: 1}}
    A = CdgAlgebra(QQ, GradedModule.of({0: 2}), {}, {}, prod, unit=ONE, name="k[t]/(t^2-1)")
    with pytest.raises(AlgebraError):
        AugmentationIdeal(A.embed())


def test_unit_homotopy_refuses_curved_algebras():
    with pytest.raises(AlgebraError):
        unit_homotopy(tilde_module(k3(QQ)), 4)


def test_augmentation_ideal_basis():
    I = AugmentationIdeal(exterior(QQ).embed())
    assert I.basis() == [E1]
    assert I.op(0, ()) == {} and not I.is_nonzero(0)
