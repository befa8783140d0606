"""Weight-truncated bar constructions, bar morphisms and twisting cochains.

A bar word is a tuple of suspended letters ``Susp(a, -1)``; its weight is its
length.  The codifferential on a weight-p word is the sum of
``1^j (x) b_k (x) 1^l`` over j + k + l = p with ``b_k = -s m_k w^{(x) k}``, so
the curvature term inserts a letter and raises weight by one.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, Dict, Hashable, Iterable, List, Optional

from .coalgebra import CoalgebraBase
from .graded import Susp, apply_at, deg, desuspend_word, s, tensor_apply, w
from .linalg import Vec, add_into, add_term
from .report import FAIL, PASS, SKIPPED, Report, WindowExceeded, fmt_key, fmt_vec


class BarCoalgebra(CoalgebraBase):
    """T^c(SA) truncated at weight ``W``.

    Separating coproduct, counit = weight-0 projection, coaugmentation = ().
    The codifferential is exact on words of weight <= ``exact_through``:
    W - 1 when A is curved, W otherwise.
    """

    def __init__(self, A, W: int, name: Optional[str] = None):
        if W < 1:
            raise ValueError("weight cap must be at least 1")
        self.algebra = A
        self.ring = A.ring
        self.weight_cap = W
        self.one = ()
        self.name = name or f"B{A.name}"
        self.curved = bool(A.curvature)
        self.exact_through = W - 1 if self.curved else W
        self._d_cache: Dict[tuple, Vec] = {}
        self._b_cache: Dict[tuple, Vec] = {}

    def letters(self) -> List[Susp]:
        return [s(a) for a in self.algebra.basis()]

    def basis(self, max_weight: Optional[int] = None) -> List[tuple]:
        top = self.weight_cap if max_weight is None else max_weight
        letters = self.letters()
        out = []
        for p in range(top + 1):
            out.extend(product(letters, repeat=p))
        return out

    def weight(self, word) -> int:
        return len(word)

    def level(self, word) -> int:
        return len(word)

    def coproduct(self, word) -> Vec:
        return {(word[:j], word[j:]): 1 for j in range(len(word) + 1)}

    def reduced_iterated(self, word, n: int) -> Vec:
        """Components of Delta^{(n)} with no empty factor."""
        p = len(word)
        if n == 0 or n > p:
            return {}
        out: Vec = {}
        for cuts in _cut_points(p, n):
            bounds = (0,) + cuts + (p,)
            out[tuple(word[bounds[i]:bounds[i + 1]] for i in range(n))] = 1
        return out

    def _b(self, chunk: tuple) -> Vec:
        """b_k = -s m_k w^{(x) k} on a chunk of letters, as 1-tuples."""
        hit = self._b_cache.get(chunk)
        if hit is not None:
            return hit
        k = len(chunk)
        sign, letters = desuspend_word(chunk)
        out = {}
        for a, c in self.algebra.op(k, letters).items():
            out[(s(a),)] = -sign * c
        self._b_cache[chunk] = out
        return out

    def codiff(self, word) -> Vec:
        word = tuple(word)
        if len(word) > self.exact_through:
            raise WindowExceeded(f"d on a weight-{len(word)} word needs weight above {self.weight_cap}")
        hit = self._d_cache.get(word)
        if hit is not None:
            return hit
        ring = self.ring
        A = self.algebra
        p = len(word)
        out: Vec = {}
        for k in range(0, min(A.arity, p) + 1):
            if not A.is_nonzero(k):
                continue
            for j in range(p - k + 1):
                add_into(ring, out, apply_at(ring, self._b, 1, k, word, j))
        self._d_cache[word] = out
        return out

    def apply_codiff(self, vec: Vec) -> Vec:
        out: Vec = {}
        for word, c in vec.items():
            add_into(self.ring, out, self.codiff(word), c)
        return out


def _cut_points(p: int, n: int):
    """Strictly increasing (n-1)-tuples in 1..p-1."""
    def rec(start, left):
        if left == 0:
            yield ()
            return
        for c in range(start, p - left + 1):
            for rest in rec(c + 1, left - 1):
                yield (c,) + rest
    yield from rec(1, n - 1)


def bar(A, W: int, name: Optional[str] = None) -> BarCoalgebra:
    return BarCoalgebra(A, W, name)


def check_codiff_square(B: BarCoalgebra) -> Report:
    """d^2 = 0 on every word of weight <= W - 2; heavier weights are listed
    as skipped.  A failing weight names the smallest Stasheff clause seen
    among the consecutive sub-words of the witness."""
    rep = Report()
    ring = B.ring
    W = B.weight_cap
    for p in range(0, W - 1):
        bad = None
        for word in product(B.letters(), repeat=p):
            v = B.apply_codiff(B.codiff(word))
            if v:
                bad = (word, v)
                break
        if bad is None:
            rep.add("bar-d-squared", [B.name], p, PASS)
        else:
            clause = _stasheff_clause(B, bad[0])
            rep.add("bar-d-squared", [B.name], p, FAIL, witness=fmt_key(bad[0]),
                    residual=fmt_vec(bad[1], ring), detail=f"stasheff clause {clause}")
    for p in range(max(W - 1, 0), W + 1):
        rep.add("bar-d-squared", [B.name], p, SKIPPED, detail="needs weight above the cap")
    return rep


def _p1_square(B: BarCoalgebra, word) -> Vec:
    out: Vec = {}
    for x, c in B.codiff(word).items():
        for y, e in B._b(x).items():
            add_term(B.ring, out, y, c * e)
    return out


def _stasheff_clause(B: BarCoalgebra, word) -> Optional[int]:
    p = len(word)
    for q in range(p + 1):
        for j in range(p - q + 1):
            if _p1_square(B, word[j:j + q]):
                return q
    return None


# --------------------------------------------------------------------------
# coalgebra morphisms


class CoalgebraMorphism:
    """Degree-0 map between coalgebra-like objects given on basis keys."""

    def __init__(self, source, target, fn: Callable[[Hashable], Vec], name: str = "F"):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name
        self._cache: Dict[Hashable, Vec] = {}

    @property
    def ring(self):
        return self.source.ring

    def __call__(self, key) -> Vec:
        hit = self._cache.get(key)
        if hit is None:
            hit = self.fn(key)
            self._cache[key] = hit
        return hit

    def apply(self, vec: Vec) -> Vec:
        out: Vec = {}
        for k, c in vec.items():
            add_into(self.ring, out, self(k), c)
        return out


def compose_coalgebra_morphisms(G: CoalgebraMorphism, F: CoalgebraMorphism) -> CoalgebraMorphism:
    return CoalgebraMorphism(F.source, G.target, lambda k: G.apply(F(k)), name=f"{G.name}{F.name}")


def check_coalgebra_morphism(F: CoalgebraMorphism, keys: Optional[Iterable] = None) -> Report:
    """Counit, coaugmentation, comultiplication and codifferential compatibility."""
    C, D = F.source, F.target
    ring = F.ring
    keys = list(C.basis() if keys is None else keys)
    names = [F.name, C.name, D.name]
    rep = Report()
    fails = {}
    skipped = 0
    one_img = F(C.one)
    if one_img != {D.one: 1}:
        fails["comorphism-coaugmentation"] = (C.one, one_img)
    for x in keys:
        fx = F(x)
        cu = sum(D.counit(y) * c for y, c in fx.items())
        if ring.reduce(cu - C.counit(x)) and "comorphism-counit" not in fails:
            fails["comorphism-counit"] = (x, {"counit": cu})
        lhs: Vec = {}
        for y, c in fx.items():
            add_into(ring, lhs, D.coproduct(y), c)
        for (a, b), c in C.coproduct(x).items():
            for ya, ca in F(a).items():
                for yb, cb in F(b).items():
                    add_term(ring, lhs, (ya, yb), -c * ca * cb)
        if lhs and "comorphism-coproduct" not in fails:
            fails["comorphism-coproduct"] = (x, lhs)
        try:
            v: Vec = {}
            for y, c in fx.items():
                add_into(ring, v, D.codiff(y), c)
            add_into(ring, v, F.apply(C.codiff(x)), -1)
        except WindowExceeded:
            skipped += 1
            continue
        if v and "comorphism-codiff" not in fails:
            fails["comorphism-codiff"] = (x, v)
    for check in ("comorphism-coaugmentation", "comorphism-counit", "comorphism-coproduct", "comorphism-codiff"):
        if check in fails:
            key, vec = fails[check]
            rep.add(check, names, "all", FAIL, witness=fmt_key(key), residual=fmt_vec(vec, ring))
        else:
            rep.add(check, names, "all", PASS)
    if skipped:
        rep.add("comorphism-codiff", names, "window", SKIPPED, detail=f"{skipped} keys outside the window")
    return rep


def coalgebra_morphisms_equal(F: CoalgebraMorphism, G: CoalgebraMorphism, keys: Iterable) -> Optional[Hashable]:
    """First key where F and G differ, or None."""
    for k in keys:
        if F(k) != G(k):
            return k
    return None


def bar_morphism(f, BA: BarCoalgebra, BB: BarCoalgebra) -> CoalgebraMorphism:
    """Bf on a word: sum over splittings into consecutive nonempty blocks of
    F_{i_1} (x) ... (x) F_{i_r}, with F_i = s f_i w^{(x) i} of degree 0."""
    ring = f.ring

    def F(chunk):
        sign, letters = desuspend_word(chunk)
        return {s(b): sign * c for b, c in f.component(len(chunk), letters).items()}

    memo: Dict[tuple, Vec] = {}

    def rec(word):
        hit = memo.get(word)
        if hit is not None:
            return hit
        if not word:
            return {(): 1}
        out: Vec = {}
        for i in range(1, min(f.arity, len(word)) + 1):
            head = F(word[:i])
            if not head:
                continue
            for tail, c in rec(word[i:]).items():
                for y, e in head.items():
                    add_term(ring, out, (y,) + tail, c * e)
        memo[word] = out
        return out

    def fn(word):
        word = tuple(word)
        if len(word) > BB.weight_cap:
            raise WindowExceeded("image weight exceeds the target cap")
        return rec(word)

    return CoalgebraMorphism(BA, BB, fn, name=f"B{f.name}")


# --------------------------------------------------------------------------
# twisting cochains


class TwistingCochain:
    """Degree-1 map tau: C -> A given on basis keys of C."""

    def __init__(self, source, target, fn: Callable[[Hashable], Vec], name: str = "tau"):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name
        self._cache: Dict[Hashable, Vec] = {}

    @property
    def ring(self):
        return self.target.ring

    def __call__(self, key) -> Vec:
        hit = self._cache.get(key)
        if hit is None:
            hit = self.fn(key)
            for a in hit:
                if deg(a) != deg(key) + 1:
                    raise ValueError(f"tau({key!r}) is not of degree {deg(key) + 1}")
            self._cache[key] = hit
        return hit

    def tuple_fn(self, chunk):
        return {(a,): c for a, c in self(chunk[0]).items()}

    def apply(self, vec: Vec) -> Vec:
        out: Vec = {}
        for k, c in vec.items():
            add_into(self.ring, out, self(k), c)
        return out


def cochain_from_table(C, A, table: Dict[Hashable, Vec], name: str = "tau") -> TwistingCochain:
    return TwistingCochain(C, A, lambda k: dict(table.get(k, {})), name=name)


def reduced_iterated(C, key, n: int) -> Vec:
    """Terms of Delta^{(n)}(key) with every factor in the reduced coalgebra."""
    if hasattr(C, "reduced_iterated"):
        return C.reduced_iterated(key, n)
    if key == C.one or n == 0:
        return {}
    cur: Vec = {(key,): 1}
    for _ in range(n - 1):
        nxt: Vec = {}
        for t, c in cur.items():
            for pair, d in C.reduced_coproduct(t[0]).items():
                add_term(C.ring, nxt, pair + t[1:], c * d)
        cur = nxt
    return cur


def twisting_residual_at(tau: TwistingCochain, key) -> Vec:
    """eta(c) m_0 + m_1 tau(c) + tau(d c) + sum_{n>=2} m_n tau^{(x) n} Delta^{(n)}(c).

    Terms with a coaugmentation factor vanish because tau kills it, so the
    reduced iterated coproduct suffices and the sum stops at the coradical
    level of ``key``.
    """
    C, A = tau.source, tau.target
    ring = tau.ring
    out: Vec = {}
    cu = C.counit(key)
    if cu:
        add_into(ring, out, A.curvature, cu)
    for a, c in tau(key).items():
        add_into(ring, out, A.op(1, (a,)), c)
    add_into(ring, out, tau.apply(C.codiff(key)))
    top = min(A.arity, C.level(key))
    for n in range(2, top + 1):
        if not A.is_nonzero(n):
            continue
        factors = [(1, 1, tau.tuple_fn)] * n
        for t, c in reduced_iterated(C, key, n).items():
            for u, e in tensor_apply(ring, factors, t).items():
                add_into(ring, out, A.op(n, u), c * e)
    return out


def check_twisting(tau: TwistingCochain, keys: Optional[Iterable] = None) -> Report:
    C = tau.source
    ring = tau.ring
    names = [tau.name, C.name, tau.target.name]
    rep = Report()
    if tau(C.one):
        rep.add("twisting-coaugmentation", names, "all", FAIL, witness=fmt_key(C.one),
                residual=fmt_vec(tau(C.one), ring))
    else:
        rep.add("twisting-coaugmentation", names, "all", PASS)
    keys = list(C.basis() if keys is None else keys)
    bad = None
    skipped = 0
    for k in keys:
        try:
            v = twisting_residual_at(tau, k)
        except WindowExceeded:
            skipped += 1
            continue
        if v and bad is None:
            bad = (k, v)
    if bad:
        rep.add("twisting-mc", names, "all", FAIL, witness=fmt_key(bad[0]), residual=fmt_vec(bad[1], ring))
    else:
        rep.add("twisting-mc", names, "all", PASS)
    if skipped:
        rep.add("twisting-mc", names, "window", SKIPPED, detail=f"{skipped} keys outside the window")
    return rep


def twisting_residual(tau: TwistingCochain, keys: Optional[Iterable] = None) -> Dict[Hashable, Vec]:
    """Residual on every window-safe key (nonzero values only)."""
    out = {}
    for k in (tau.source.basis() if keys is None else keys):
        try:
            v = twisting_residual_at(tau, k)
        except WindowExceeded:
            continue
        if v:
            out[k] = v
    return out


def is_twisting_cochain(tau: TwistingCochain, keys: Optional[Iterable] = None) -> bool:
    return check_twisting(tau, keys).passed


def universal_twisting_cochain(B: BarCoalgebra) -> TwistingCochain:
    """tau_A = w p_1 : BA -> A."""
    def fn(word):
        if len(word) == 1:
            return {w(word[0]): 1}
        return {}
    return TwistingCochain(B, B.algebra, fn, name=f"tau_{B.algebra.name}")


def cochain_to_coalgebra_morphism(tau: TwistingCochain, B: Optional[BarCoalgebra] = None,
                                  W: Optional[int] = None) -> CoalgebraMorphism:
    """F(c) = counit(c) () + sum_n (s tau)^{(x) n} Delta^{(n)}(c); s tau has degree 0."""
    C, A = tau.source, tau.target
    if B is None:
        if W is None:
            raise ValueError("give a bar coalgebra or a weight cap")
        B = bar(A, W)
    ring = tau.ring

    def st(chunk):
        return {(s(a),): c for a, c in tau(chunk[0]).items()}

    def fn(key):
        lvl = C.level(key)
        if lvl > B.weight_cap:
            raise WindowExceeded(f"{key!r} maps beyond weight {B.weight_cap}")
        out: Vec = {}
        cu = C.counit(key)
        if cu:
            out[()] = cu
        for n in range(1, lvl + 1):
            for t, c in reduced_iterated(C, key, n).items():
                add_into(ring, out, tensor_apply(ring, [(1, 0, st)] * n, t), c)
        return out

    return CoalgebraMorphism(C, B, fn, name=f"F_{tau.name}")


def morphism_to_cochain(F: CoalgebraMorphism) -> TwistingCochain:
    """w p_1 F."""
    B = F.target

    def fn(key):
        out: Vec = {}
        for word, c in F(key).items():
            if len(word) == 1:
                add_term(F.ring, out, w(word[0]), c)
        return out
    return TwistingCochain(F.source, B.algebra, fn, name=f"tau_{F.name}")
