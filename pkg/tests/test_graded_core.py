import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from cainfty.fixtures import ONE, X, X2, k3
from cainfty.graded import (BasisElement, GradedError, GradedMap, GradedModule, compose_maps, deg, desuspend_word,
                            evaluate, identity, koszul_tensor, poincare_coefficients, s, shift, tensor_power,
                            tensor_spaces, w, zero_map)
from cainfty.linalg import inverse, kernel, rank
from cainfty.ring import GF, QQ, ZZ, Ring, RingError, Scalar

from conftest import F101, random_map


# ---------------------------------------------------------------- scalars

def test_mod_p_values_are_canonical():
    assert F101.reduce(-1) == 100
    assert F101.reduce(203) == 1
    assert Scalar(F101, -5).value == 96


def test_rationals_in_lowest_terms():
    x = QQ.parse("6/-4")
    assert x == Fraction(-3, 2) and x.denominator == 2
    assert QQ.format(QQ.parse("4/2")) == "2"


def test_zero_denominator_is_an_error():
    with pytest.raises(RingError):
        QQ.parse("1/0")
    with pytest.raises(RingError):
        F101.parse("1/101")


def test_integers_reject_fractions():
    with pytest.raises(RingError):
        ZZ.parse("1/2")
    with pytest.raises(RingError):
        ZZ.inv(2)


def test_non_prime_modulus_rejected():
    with pytest.raises(RingError):
        Ring("Zmod", 100)


def test_scalar_ring_mismatch():
    with pytest.raises(RingError):
        Scalar(F101, 1) + Scalar(GF(7), 1)


@given(st.integers(1, 100), st.integers(1, 100))
def test_mod_p_field_axioms(a, b):
    x, y = Scalar(F101, a), Scalar(F101, b)
    assert (x * y) * y.inverse() == x
    assert x + (-x) == 0


# ---------------------------------------------------------------- linear algebra

@pytest.mark.parametrize("seed", range(8))
def test_rank_and_kernel_match_sympy_over_q(seed):
    rng = random.Random(seed)
    cols = {j: {i: rng.randrange(-3, 4) for i in range(4)} for j in range(5)}
    cols = {j: {i: c for i, c in v.items() if c} for j, v in cols.items()}
    M = sympy.Matrix(4, 5, lambda i, j: cols[j].get(i, 0))
    assert rank(QQ, [v for v in cols.values() if v]) == M.rank()
    ker = kernel(QQ, cols)
    assert len(ker) == 5 - M.rank()
    for v in ker:
        image = [sum(cols[j].get(i, 0) * v.get(j, 0) for j in cols) for i in range(4)]
        assert image == [0, 0, 0, 0]


@pytest.mark.parametrize("seed", range(8))
def test_rank_matches_sympy_over_f101(seed):
    from sympy.polys.matrices import DomainMatrix
    rng = random.Random(100 + seed)
    cols = {j: {i: rng.randrange(101) for i in range(5) if rng.random() < 0.5} for j in range(6)}
    cols = {j: {i: c for i, c in v.items() if c} for j, v in cols.items()}
    dm = DomainMatrix([[sympy.GF(101)(cols[j].get(i, 0)) for j in range(6)] for i in range(5)], (5, 6), sympy.GF(101))
    assert rank(F101, [v for v in cols.values() if v]) == dm.rank()


def test_inverse_over_f101(rng):
    cols = {0: {0: 3, 1: 5}, 1: {1: 7}, 2: {0: 1, 2: 2}}
    inv = inverse(F101, cols)
    for j in cols:
        acc = {}
        for i, c in cols[j].items():
            for k, d in inv[i].items():
                acc[k] = (acc.get(k, 0) + c * d) % 101
        assert {k: v for k, v in acc.items() if v} == {j: 1}


# ---------------------------------------------------------------- graded modules and maps

V12 = GradedModule.of({1: 1, 2: 1})


def test_zero_ranks_absent():
    assert GradedModule.of({0: 2, 3: 0}).as_dict() == {0: 2}


def test_tensor_power_zero_is_ground_ring():
    assert tensor_power(V12, 0).module.as_dict() == {0: 1}


def test_tensor_square_ranks():
    assert tensor_power(V12, 2).module.as_dict() == {2: 1, 3: 2, 4: 1}


@given(st.dictionaries(st.integers(-2, 3), st.integers(0, 2), max_size=3), st.integers(0, 4))
def test_tensor_power_ranks_match_poincare_series(ranks, n):
    V = GradedModule.of(ranks)
    if V.total_rank ** n > 200:
        return
    assert tensor_power(V, n).module.as_dict() == poincare_coefficients(V, n)


@given(st.dictionaries(st.integers(-2, 3), st.integers(0, 2), max_size=3), st.integers(0, 4))
def test_tensor_basis_encoding_is_bijective(ranks, n):
    V = GradedModule.of(ranks)
    if V.total_rank ** n > 200:
        return
    T = tensor_power(V, n)
    for t in T.basis():
        assert T.decode(T.encode(t)) == t
    assert len(set(T.encode(t) for t in T.basis())) == len(T.basis())


def test_tensor_basis_order_is_lexicographic():
    V = GradedModule.of({0: 2, 1: 1})
    T = tensor_power(V, 2)
    e00, e01, e10 = BasisElement(0, 0), BasisElement(0, 1), BasisElement(1, 0)
    assert T.basis(1) == [(e00, e10), (e01, e10), (e10, e00), (e10, e01)]


def test_identity_composition(rng):
    V = GradedModule.of({0: 2, 1: 1, 2: 1})
    g = random_map(rng, V, V, 1)
    assert compose_maps(identity(V, F101), g) == g
    assert compose_maps(g, identity(V, F101)) == g


@pytest.mark.parametrize("seed", range(5))
def test_composition_is_associative(seed):
    rng = random.Random(seed)
    V = GradedModule.of({-1: 1, 0: 2, 1: 2, 2: 1})
    f, g, h = (random_map(rng, V, V, d) for d in (1, 0, -1))
    assert compose_maps(f, compose_maps(g, h)) == compose_maps(compose_maps(f, g), h)
    assert compose_maps(f, g).degree == 1


def test_composition_checks_modules():
    U, V = GradedModule.of({0: 1}), GradedModule.of({1: 1})
    with pytest.raises(GradedError):
        compose_maps(identity(U, QQ), identity(V, QQ))


def test_k3_predifferential_squares_to_zero():
    A = k3(QQ)
    d = GradedMap(A.module, A.module, 1, QQ, A.differential)
    assert compose_maps(d, d).is_zero()
    assert evaluate(d, X) == {X2: 2}


def test_evaluate_zero_and_identity():
    V = GradedModule.of({0: 1, 1: 1})
    assert evaluate(zero_map(V, V, 0, QQ), X) == {}
    assert evaluate(identity(V, QQ), X) == {X: 1}
    with pytest.raises(GradedError):
        evaluate(identity(V, QQ), BasisElement(5, 0))


def test_koszul_identity_tensor():
    V = GradedModule.of({0: 1, 1: 1})
    one = identity(V, QQ)
    t = koszul_tensor(one, one)
    for u in t.source.basis():
        assert t(u) == {u: 1}


def test_koszul_sign_odd_map_past_odd_element():
    V = GradedModule.of({1: 1})
    W_ = GradedModule.of({1: 1, 2: 1})
    f = identity(V, QQ)
    g = GradedMap(V, W_, 1, QQ, {X: {BasisElement(2, 0): 1}})
    u = (X, X)
    assert koszul_tensor(f, g)(u) == {(X, BasisElement(2, 0)): -1}


@pytest.mark.parametrize("seed", range(6))
def test_koszul_interchange_law(seed):
    rng = random.Random(seed)
    V = GradedModule.of({0: 1, 1: 1, 2: 1})
    df, dg, df2, dg2 = (rng.choice([-1, 0, 1]) for _ in range(4))
    f, g = random_map(rng, V, V, df), random_map(rng, V, V, dg)
    f2, g2 = random_map(rng, V, V, df2), random_map(rng, V, V, dg2)
    lhs = compose_maps(koszul_tensor(f, g), koszul_tensor(f2, g2))
    rhs = koszul_tensor(compose_maps(f, f2), compose_maps(g, g2))
    sign = -1 if (dg * df2) % 2 else 1
    assert lhs == rhs.scale(sign)


def test_shift_of_zero_and_degrees():
    assert shift(GradedModule.of({}), QQ).suspended.as_dict() == {}
    assert shift(GradedModule.of({1: 1}), QQ).suspended.as_dict() == {0: 1}


def test_shift_round_trips():
    V = GradedModule.of({-1: 1, 0: 2, 3: 1})
    sh = shift(V, QQ)
    back = shift(sh.suspended, QQ)
    assert compose_maps(back.w, sh.s) == identity(V, QQ)
    down = shift(sh.desuspended, QQ)
    assert compose_maps(down.s, sh.w) == identity(V, QQ)
    for e in V.basis():
        assert w(s(e)) == e and s(w(e)) == e
        assert deg(s(e)) == deg(e) - 1 and deg(w(e)) == deg(e) + 1


def test_desuspending_a_word_carries_koszul_sign():
    a1 = BasisElement(3, 0)  # |s a1| = 2
    a2 = BasisElement(1, 0)
    sign, letters = desuspend_word((s(a1), s(a2)))
    assert letters == (a1, a2) and sign == 1
    sign, _ = desuspend_word((s(a2), s(a2)))  # |s a2| = 0
    assert sign == 1
    sign, _ = desuspend_word((s(ONE), s(a2)))  # |s 1| = -1
    assert sign == -1


def test_tensor_spaces_flatten():
    V = GradedModule.of({0: 1})
    T = tensor_spaces(tensor_power(V, 2), V)
    assert T.basis() == [(ONE, ONE, ONE)]
