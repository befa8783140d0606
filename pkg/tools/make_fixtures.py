"""Regenerate the structure files under tests/fixtures.

Run from the repository root: python3 tools/make_fixtures.py
"""

from pathlib import Path

from cainfty.ainfty import CdgAlgebra, strict_morphism
from cainfty.bar import cochain_from_table
from cainfty.fixtures import ONE, X, X2, c2, c2_cochain_table, cone_algebra, exterior, k3
from cainfty.fuzz import conjugate
from cainfty.io import serialize
from cainfty.modules import identity_module_morphism, regular_module, tilde_module
from cainfty.ring import QQ

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def write(name, objects, ring=QQ):
    (OUT / name).write_text(serialize(ring, objects), encoding="utf-8")


def main():
    A = k3(QQ)
    write("k3.json", {"K3": A})

    prod = {k: dict(v) for k, v in A.product.items()}
    prod[(ONE, X)] = {X: 2}
    bad = CdgAlgebra(QQ, A.module, A.curvature, A.differential, prod, unit=A.unit, name="K3")
    write("k3-mutated.json", {"K3": bad})

    C = c2(QQ)
    write("c2.json", {"C2": C})

    tau = cochain_from_table(C, A.embed(), c2_cochain_table(), name="tau")
    tau.algebra_object = A
    write("twisting.json", {"K3": A, "C2": C, "tau": tau, "Atilde": tilde_module(A, name="Atilde")})

    E = exterior(QQ)
    write("exterior.json", {"Ext": E, "ExtA": regular_module(E, name="ExtA")})
    write("cone.json", {"Cone": cone_algebra(QQ)})

    Ae = A.embed()
    P = {ONE: {ONE: 1}, X: {X: 2}, X2: {X2: 4}}
    Aconj = conjugate(Ae, P, name="K3scaled")
    M = tilde_module(A, name="Atilde")
    write("morphism.json", {
        "K3": A, "K3scaled": Aconj, "Atilde": M,
        "scale": strict_morphism(Aconj, Ae, P, name="scale"),
        "idM": identity_module_morphism(M),
    })
    wrong = {ONE: {ONE: 1}, X: {X: 2}, X2: {X2: 2}}
    write("morphism-bad.json", {"K3": A, "K3scaled": Aconj,
                                "wrong": strict_morphism(Aconj, Ae, wrong, name="wrong")})


    # malformed inputs for the exit-code-2 paths
    text = serialize(QQ, {"C2": C})
    (OUT / "bad-coef.json").write_text(text.replace('"1"', '"1/0"', 1), encoding="utf-8")
    (OUT / "bad-kind.json").write_text(text.replace('"dg-coalgebra"', '"dg-cogebra"'), encoding="utf-8")
    (OUT / "bad-syntax.json").write_text(text[:-3], encoding="utf-8")


if __name__ == "__main__":
    main()
