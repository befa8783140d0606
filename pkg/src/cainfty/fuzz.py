"""Seeded random structures for the oracle-equivalence and round-trip suites."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Tuple

from .ainfty import (AInftyMorphism, CdgAlgebra, CurvedAInftyAlgebra, GradedAlgebra, cdg_from_element,
                     embed_cdg)
from .bar import BarCoalgebra, TwistingCochain, bar, bar_morphism, universal_twisting_cochain
from .coalgebra import DgCoalgebra, materialize
from .fixtures import ONE, c2, cone_algebra, exterior, truncated_polynomial
from .graded import BasisElement, GradedModule, deg, desuspend_word, s, suspend_word, w
from .linalg import Vec, add_into, add_term, inverse
from .ring import GF, Ring

FUZZ_RING = GF(101)


def _rand_unit(rng: random.Random, ring: Ring):
    return rng.randrange(1, ring.p) if ring.kind == "Zmod" else rng.choice([-2, -1, 1, 2, 3])


def _rand_coef(rng: random.Random, ring: Ring):
    return rng.randrange(ring.p) if ring.kind == "Zmod" else rng.randint(-3, 3)


def random_module(rng: random.Random, lo: int = -2, hi: int = 3, max_rank: int = 2, total: Tuple[int, int] = (2, 3)) -> GradedModule:
    """Random per-degree ranks in [lo, hi] with the total rank in ``total``."""
    n = rng.randint(*total)
    ranks: Dict[int, int] = {}
    while sum(ranks.values()) < n:
        d = rng.randint(lo, hi)
        if ranks.get(d, 0) < max_rank:
            ranks[d] = ranks.get(d, 0) + 1
    return GradedModule.of(ranks)


def random_invertible(rng: random.Random, ring: Ring, module: GradedModule, fixed=()) -> Dict[BasisElement, Vec]:
    """Columns of a random degree-0 automorphism; keys in ``fixed`` map to
    themselves and no other column has a component along them."""
    cols: Dict[BasisElement, Vec] = {}
    for d in module.degrees:
        free = [e for e in module.basis(d) if e not in fixed]
        while True:
            trial = {e: {f: _rand_coef(rng, ring) for f in free} for e in free}
            trial = {e: {f: c for f, c in v.items() if c} for e, v in trial.items()}
            try:
                inverse(ring, trial)
                break
            except Exception:
                continue
        cols.update(trial)
        for e in module.basis(d):
            if e in fixed:
                cols[e] = {e: 1}
    return cols


def _apply_cols(ring: Ring, cols, vec: Vec) -> Vec:
    out: Vec = {}
    for k, c in vec.items():
        add_into(ring, out, cols[k], c)
    return out


def conjugate(A: CurvedAInftyAlgebra, cols: Dict[BasisElement, Vec], name: Optional[str] = None) -> CurvedAInftyAlgebra:
    """m'_k = P^{-1} m_k P^{(x) k} for a degree-0 automorphism P."""
    ring = A.ring
    inv = inverse(ring, cols)
    ops = {}
    for k in range(A.arity + 1):
        table = {}
        for t in product(A.basis(), repeat=k):
            images = [cols[e] for e in t]
            acc: Vec = {}
            for combo in product(*[list(v.items()) for v in images]):
                u = tuple(e for e, _ in combo)
                c = 1
                for _, x in combo:
                    c *= x
                add_into(ring, acc, A.op(k, u), c)
            v = _apply_cols(ring, inv, acc)
            if v:
                table[t] = v
        if table:
            ops[k] = table
    unit = A.unit
    return CurvedAInftyAlgebra(ring, A.module, ops, A.arity, unit, name or A.name)


def _inverse_bar_morphism(F, BA: BarCoalgebra, f1_inv: Dict[BasisElement, Vec]):
    """G with F G = 1, built weight by weight from the linear part."""
    ring = BA.ring
    memo: Dict[tuple, Vec] = {}

    def lead(word):
        # (s f_1^{-1} w)^{(x) n} letter by letter: each factor has degree 0
        out: Vec = {(): 1}
        for letter in word:
            nxt: Vec = {}
            for t, c in out.items():
                for b, e in f1_inv[letter.item].items():
                    add_term(ring, nxt, t + (s(b),), c * e)
            out = nxt
        return out

    def G(word):
        hit = memo.get(word)
        if hit is not None:
            return hit
        u = lead(word)
        rest: Vec = {}
        for x, c in u.items():
            add_into(ring, rest, F(x), c)
        add_term(ring, rest, word, -1)
        out = dict(u)
        for x, c in rest.items():
            add_into(ring, out, G(x), -c)
        memo[word] = out
        return out

    return G


def transport(A: CurvedAInftyAlgebra, f: AInftyMorphism, arity: int, W: int = 6, name: Optional[str] = None) -> Tuple[CurvedAInftyAlgebra, bool]:
    """The structure F D F^{-1} on the bar of A for an A-infinity automorphism f,
    cut at ``arity``.  The flag reports whether the operations of arity
    ``arity + 1 .. W - 2`` vanish (so the cut loses nothing in that range)."""
    ring = A.ring
    BA = bar(A, W)
    F = bar_morphism(f, BA, BA)
    f1 = {e: f.component(1, (e,)) for e in A.basis()}
    G = _inverse_bar_morphism(F, BA, inverse(ring, f1))

    def op(k, t):
        _, word = suspend_word(t)
        tmp: Vec = {}
        for x, c in G(word).items():
            add_into(ring, tmp, BA.codiff(x), c)
        out: Vec = {}
        for x, c in tmp.items():
            for y, e in F(x).items():
                if len(y) == 1:
                    add_term(ring, out, w(y[0]), c * e)
        s2, _ = desuspend_word(word)
        return {k_: -s2 * v for k_, v in out.items()}

    ops = {}
    for k in range(arity + 1):
        table = {}
        for t in product(A.basis(), repeat=k):
            v = op(k, t)
            v = {a: ring.reduce(c) for a, c in v.items() if ring.reduce(c)}
            if v:
                table[t] = v
        if table:
            ops[k] = table
    tail_zero = True
    for k in range(arity + 1, W - 1):
        for t in product(A.basis(), repeat=k):
            if {a: c for a, c in op(k, t).items() if ring.reduce(c)}:
                tail_zero = False
                break
        if not tail_zero:
            break
    return CurvedAInftyAlgebra(ring, A.module, ops, arity, None, name or f"T{A.name}"), tail_zero


def random_ops(rng: random.Random, ring: Ring, module: GradedModule, arity: int, density: float) -> Dict[int, Dict[tuple, Vec]]:
    ops = {}
    basis = module.basis()
    for k in range(arity + 1):
        table = {}
        for t in product(basis, repeat=k):
            outs = module.basis(deg(t) + 2 - k)
            v = {o: _rand_unit(rng, ring) for o in outs if rng.random() < density}
            if v:
                table[t] = v
        if table:
            ops[k] = table
    return ops


def random_morphism_components(rng, ring, module, arity, density) -> Dict[int, Dict[tuple, Vec]]:
    comps = {}
    basis = module.basis()
    for k in range(2, arity + 1):
        table = {}
        for t in product(basis, repeat=k):
            outs = module.basis(deg(t) + 1 - k)
            v = {o: _rand_unit(rng, ring) for o in outs if rng.random() < density}
            if v:
                table[t] = v
        if table:
            comps[k] = table
    return comps


def mutate(A: CurvedAInftyAlgebra, rng: random.Random, name: Optional[str] = None) -> CurvedAInftyAlgebra:
    """Change exactly one structure constant (possibly from zero)."""
    ring = A.ring
    slots = []
    for k in range(A.arity + 1):
        for t in product(A.basis(), repeat=k):
            for o in A.module.basis(deg(t) + 2 - k):
                slots.append((k, t, o))
    k, t, o = rng.choice(slots)
    ops = {i: {u: dict(v) for u, v in tab.items()} for i, tab in A.ops.items()}
    tab = ops.setdefault(k, {})
    v = tab.setdefault(t, {})
    v[o] = ring.reduce(v.get(o, 0) + _rand_unit(rng, ring))
    return CurvedAInftyAlgebra(ring, A.module, ops, A.arity, None, name or f"{A.name}*")


# --------------------------------------------------------------------------
# pools of small algebras


def _dual_numbers(ring: Ring, d: int) -> GradedAlgebra:
    e = BasisElement(d, 0)
    basis_ranks = {0: 1} if d != 0 else {0: 2}
    if d == 0:
        e = BasisElement(0, 1)
    else:
        basis_ranks[d] = 1
    prod = {(ONE, ONE): {ONE: 1}, (ONE, e): {e: 1}, (e, ONE): {e: 1}}
    return GradedAlgebra(ring, GradedModule.of(basis_ranks), prod, unit=ONE, name=f"k[e{d}]/e2")


def graded_pool(ring: Ring) -> List[GradedAlgebra]:
    return [truncated_polynomial(ring), _dual_numbers(ring, 1), _dual_numbers(ring, -1), _dual_numbers(ring, 2)]


def dg_pool(ring: Ring) -> List[CdgAlgebra]:
    return [exterior(ring), cone_algebra(ring)]


def _graded_as_cdg(G: GradedAlgebra) -> CdgAlgebra:
    return CdgAlgebra(G.ring, G.module, {}, {}, dict(G.product), unit=G.unit, name=G.name)


def random_cdg(rng: random.Random, ring: Ring = FUZZ_RING, name: str = "A") -> CdgAlgebra:
    """cdg_from_element on a conjugated graded algebra with a random degree-1 element."""
    G = rng.choice([g for g in graded_pool(ring) if g.module.rank(1)])
    P = random_invertible(rng, ring, G.module, fixed=(G.unit,))
    Gc = conjugate(embed_cdg(_graded_as_cdg(G)), P)
    G2 = GradedAlgebra(ring, G.module, dict(Gc.ops.get(2, {})), unit=G.unit, name=G.name)
    x = {e: _rand_unit(rng, ring) for e in G.module.basis(1)}
    return cdg_from_element(G2, x, name=name)


def random_dg(rng: random.Random, ring: Ring = FUZZ_RING, name: str = "A") -> CdgAlgebra:
    """A conjugate of a pool dg algebra by an automorphism fixing the unit."""
    from .ainfty import project_cdg
    A = rng.choice(dg_pool(ring))
    P = random_invertible(rng, ring, A.module, fixed=(A.unit,))
    B = project_cdg(conjugate(A.embed(), P, name=name))
    return B


@dataclass
class FuzzCase:
    name: str
    algebra: CurvedAInftyAlgebra
    family: str
    expected_valid: Optional[bool]


def _nilpotent_base(rng: random.Random, ring: Ring) -> CurvedAInftyAlgebra:
    """span{a, b} with a a = lambda b the only product, so associativity holds trivially."""
    d = rng.choice([-1, 0, 1])
    a = BasisElement(d, 0)
    b = BasisElement(2 * d, 1 if d == 0 else 0)
    module = GradedModule.of({0: 2} if d == 0 else {d: 1, 2 * d: 1})
    return CurvedAInftyAlgebra(ring, module, {2: {(a, a): {b: _rand_unit(rng, ring)}}}, 2, None, "N")


def stasheff_cases(seed: int, count: int = 100, ring: Ring = FUZZ_RING) -> List[FuzzCase]:
    """Families, in proportions 4:3:4:4:5 of ``count``: cdg conjugates and
    dg conjugates (valid), A-infinity transports (valid when the cut tail
    vanishes), random noise, and single-entry mutations of valid cases."""
    rng = random.Random(seed)
    sizes = [count * k // 20 for k in (4, 3, 4, 4)]
    cases: List[FuzzCase] = []
    valid: List[CurvedAInftyAlgebra] = []
    for i in range(sizes[0]):
        A = random_cdg(rng, ring, name=f"cdg{i}").embed()
        cases.append(FuzzCase(A.name, A, "cdg", True))
        valid.append(A)
    for i in range(sizes[1]):
        A = random_dg(rng, ring, name=f"dg{i}").embed()
        cases.append(FuzzCase(A.name, A, "dg", True))
        valid.append(A)
    for i in range(sizes[2]):
        base = _nilpotent_base(rng, ring) if i % 2 == 0 else random_dg(rng, ring).embed()
        P = random_invertible(rng, ring, base.module)
        comps = {1: {(e,): v for e, v in P.items()}, **random_morphism_components(rng, ring, base.module, 3, 0.6)}
        T, tail_zero = transport(base, AInftyMorphism(base, base, comps, name="f"), 4, W=6, name=f"tr{i}")
        cases.append(FuzzCase(T.name, T, "transport", True if tail_zero else None))
        if tail_zero:
            valid.append(T)
    for i in range(sizes[3]):
        module = random_module(rng, lo=-1, hi=2, total=(3, 3))
        A = CurvedAInftyAlgebra(ring, module, random_ops(rng, ring, module, rng.randint(2, 4), 0.5), 4, None, f"noise{i}")
        cases.append(FuzzCase(A.name, A, "noise", None))
    j = 0
    while len(cases) < count:
        A = mutate(valid[j % len(valid)], rng, name=f"mut{j}")
        cases.append(FuzzCase(A.name, A, "mutation", None))
        j += 1
    return cases


# --------------------------------------------------------------------------
# finite coalgebras with twisting cochains


def change_coalgebra_basis(C: DgCoalgebra, rng: random.Random, name: Optional[str] = None) -> Tuple[DgCoalgebra, Dict]:
    """New basis e'_i = P e_i with P fixing the coaugmentation and preserving
    the counit kernel.  Returns the coalgebra and the columns of P."""
    ring = C.ring
    P = random_invertible(rng, ring, C.module, fixed=(C.one,))
    inv = inverse(ring, P)
    cop = {}
    codiff = {}
    for e in C.basis():
        v: Vec = {}
        for (a, b), c in _vec_coproduct(C, P[e]).items():
            for a2, x in inv[a].items():
                for b2, y in inv[b].items():
                    add_term(ring, v, (a2, b2), c * x * y)
        cop[e] = v
        dv: Vec = {}
        for k, c in P[e].items():
            add_into(ring, dv, C.codiff(k), c)
        codiff[e] = _apply_cols(ring, inv, dv)
    D = DgCoalgebra(ring, C.module, C.one, cop, codiff, name=name or f"{C.name}'")
    return D, P


def _vec_coproduct(C, vec: Vec) -> Vec:
    out: Vec = {}
    for k, c in vec.items():
        add_into(C.ring, out, C.coproduct(k), c)
    return out


@dataclass
class CoalgebraCase:
    name: str
    coalgebra: DgCoalgebra
    target: CdgAlgebra
    tau: TwistingCochain


def random_coalgebra_case(rng: random.Random, index: int, ring: Ring = FUZZ_RING) -> CoalgebraCase:
    """Either C2 into a random cdg algebra with tau(z) = -c, or a truncated
    bar construction B_{<=2} of a random dg algebra with its universal
    cochain; both after a random change of coalgebra basis."""
    if index % 2 == 0:
        A = random_cdg(rng, ring, name=f"A{index}")
        C = c2(ring)
        z = C.module.basis(1)[0]
        base_tau = {z: {k: -v for k, v in A.curvature.items()}}
    else:
        A = random_dg(rng, ring, name=f"A{index}")
        B = bar(A.embed(), 2)
        C = materialize(B, name=f"B{index}")
        tauA = universal_twisting_cochain(B)
        base_tau = {C._relabel[k]: tauA(k) for k in B.basis()}
    D, P = change_coalgebra_basis(C, rng, name=f"C{index}")

    def fn(e, P=P, base_tau=base_tau):
        out: Vec = {}
        for k, c in P[e].items():
            add_into(ring, out, base_tau.get(k, {}), c)
        return out
    tau = TwistingCochain(D, A.embed(), fn, name=f"tau{index}")
    return CoalgebraCase(f"case{index}", D, A, tau)


def coalgebra_cases(seed: int, count: int = 50, ring: Ring = FUZZ_RING) -> List[CoalgebraCase]:
    rng = random.Random(seed)
    return [random_coalgebra_case(rng, i, ring) for i in range(count)]
