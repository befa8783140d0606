import random
from collections import Counter

import pytest

from cainfty.ainfty import check_stasheff
from cainfty.bar import bar, check_codiff_square
from cainfty.fuzz import (FUZZ_RING, conjugate, mutate, random_cdg, random_invertible, random_module,
                          stasheff_cases)
from cainfty.fixtures import k3
from cainfty.graded import deg
from cainfty.linalg import inverse


def entries(A):
    out = {}
    for k, table in A.ops.items():
        for t, v in table.items():
            for o, c in v.items():
                out[(k, t, o)] = c
    return out


def test_cases_are_deterministic():
    a = stasheff_cases(3, 20)
    b = stasheff_cases(3, 20)
    assert [c.name for c in a] == [c.name for c in b]
    assert all(x.algebra.ops == y.algebra.ops for x, y in zip(a, b))


def test_family_proportions():
    fams = Counter(c.family for c in stasheff_cases(0, 100))
    assert fams == {"cdg": 20, "dg": 15, "transport": 20, "noise": 20, "mutation": 25}


def test_cases_stay_inside_the_size_bounds():
    for case in stasheff_cases(1, 40):
        M = case.algebra.module
        assert all(-2 <= d <= 3 for d in M.degrees), case.name
        assert all(M.rank(d) <= 2 for d in M.degrees), case.name
        assert case.algebra.arity <= 4
        assert case.algebra.ring == FUZZ_RING


def test_expected_valid_cases_pass_both_oracles():
    for case in stasheff_cases(2, 40):
        if case.expected_valid:
            assert check_stasheff(case.algebra, 4).passed, case.name
            assert check_codiff_square(bar(case.algebra, 6)).passed, case.name


@pytest.mark.parametrize("seed", range(5))
def test_mutation_changes_exactly_one_constant(seed):
    rng = random.Random(seed)
    A = random_cdg(rng).embed()
    B = mutate(A, rng)
    ea, eb = entries(A), entries(B)
    changed = [k for k in set(ea) | set(eb) if ea.get(k, 0) != eb.get(k, 0)]
    assert len(changed) == 1
    k, t, o = changed[0]
    assert o.degree == deg(t) + 2 - k


def test_random_module_respects_bounds():
    rng = random.Random(0)
    for _ in range(50):
        M = random_module(rng)
        assert 2 <= M.total_rank <= 3
        assert all(-2 <= d <= 3 and M.rank(d) <= 2 for d in M.degrees)


def test_random_invertible_fixes_requested_keys():
    rng = random.Random(9)
    A = k3(FUZZ_RING).embed()
    P = random_invertible(rng, FUZZ_RING, A.module, fixed=(A.unit,))
    assert P[A.unit] == {A.unit: 1}
    inverse(FUZZ_RING, P)


def test_conjugation_preserves_validity():
    rng = random.Random(4)
    A = k3(FUZZ_RING).embed()
    P = random_invertible(rng, FUZZ_RING, A.module)
    assert check_stasheff(conjugate(A, P), 4).passed
