"""Named small structures used by tests, the CLI and the acceptance suite."""

from __future__ import annotations

from typing import Dict

from .ainfty import CdgAlgebra, GradedAlgebra, cdg_from_element
from .coalgebra import DgCoalgebra, validate_coalgebra
from .graded import BasisElement, GradedModule
from .ring import QQ, Ring

ONE = BasisElement(0, 0)
X = BasisElement(1, 0)
X2 = BasisElement(2, 0)
Z = BasisElement(1, 0)


def truncated_polynomial(ring: Ring = QQ) -> GradedAlgebra:
    """k[x]/(x^3) with |x| = 1 and the ordinary (not graded-commutative) product."""
    basis = [ONE, X, X2]
    powers = {ONE: 0, X: 1, X2: 2}
    prod: Dict[tuple, dict] = {}
    for a in basis:
        for b in basis:
            n = powers[a] + powers[b]
            if n <= 2:
                prod[(a, b)] = {basis[n]: 1}
    return GradedAlgebra(ring, GradedModule.of({0: 1, 1: 1, 2: 1}), prod, unit=ONE, name="k[x]/x3")


def k3(ring: Ring = QQ) -> CdgAlgebra:
    """Curvature x^2, predifferential [x, -]."""
    return cdg_from_element(truncated_polynomial(ring), {X: 1}, name="K3")


def exterior(ring: Ring = QQ) -> CdgAlgebra:
    """k[e]/(e^2), |e| = 1, zero differential, augmented with unit 1."""
    e = BasisElement(1, 0)
    prod = {(ONE, ONE): {ONE: 1}, (ONE, e): {e: 1}, (e, ONE): {e: 1}}
    return CdgAlgebra(ring, GradedModule.of({0: 1, 1: 1}), {}, {}, prod, unit=ONE, name="Ext")


def c2(ring: Ring = QQ) -> DgCoalgebra:
    """k.1 + k.z, |z| = 1, z primitive, d(1) = z."""
    C = DgCoalgebra(ring, GradedModule.of({0: 1, 1: 1}), ONE,
                    {ONE: {(ONE, ONE): 1}, Z: {(Z, ONE): 1, (ONE, Z): 1}},
                    {ONE: {Z: 1}}, name="C2", labels={ONE: "1", Z: "z"})
    return validate_coalgebra(C)


def c2_cochain_table(sign: int = -1) -> Dict[BasisElement, dict]:
    """tau(z) = sign * x^2 into K3; sign -1 gives a twisting cochain."""
    return {Z: {X2: sign}}


def cone_algebra(ring: Ring = QQ) -> CdgAlgebra:
    """span{1, u, v}, |u| = 1, |v| = 2, d u = v, all products of u, v zero."""
    u, v = BasisElement(1, 0), BasisElement(2, 0)
    prod = {(ONE, ONE): {ONE: 1}, (ONE, u): {u: 1}, (u, ONE): {u: 1}, (ONE, v): {v: 1}, (v, ONE): {v: 1}}
    return CdgAlgebra(ring, GradedModule.of({0: 1, 1: 1, 2: 1}), {}, {u: {v: 1}}, prod, unit=ONE, name="Cone")
