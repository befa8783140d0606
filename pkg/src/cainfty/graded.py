"""Free graded modules, homogeneous maps and the Koszul sign rule.

Basis vectors of a graded module are :class:`BasisElement` pairs
``(degree, index)``.  Tensors are plain tuples of factors, and a factor may
itself be a tuple (a bar word) or a :class:`Susp` wrapper recording a degree
shift.  :func:`deg` reads the degree of any such key, and the two appliers
:func:`tensor_apply` and :func:`apply_at` are the only places where Koszul
signs are produced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, Hashable, List, NamedTuple, Optional, Sequence, Tuple, Union

from .linalg import Vec, add_into, add_term
from .ring import Ring, RingError


class BasisElement(NamedTuple):
    degree: int
    index: int

    def __repr__(self):
        return f"e{self.degree}_{self.index}"


class Susp(NamedTuple):
    """``item`` regarded in a shifted module; shift -1 is ``s``, +1 is ``w``."""

    item: Hashable
    shift: int

    def __repr__(self):
        return ("s" if self.shift < 0 else "w") + repr(self.item)


def deg(x) -> int:
    t = type(x)
    if t is BasisElement:
        return x[0]
    if t is Susp:
        return deg(x[0]) + x[1]
    total = 0
    for y in x:
        total += deg(y)
    return total


def s(x) -> Susp:
    """Suspension V -> SV on a basis key (degree -1)."""
    if type(x) is Susp and x.shift == 1:
        return x.item
    return Susp(x, -1)


def w(x):
    """Desuspension V -> S^{-1}V on a basis key (degree +1)."""
    if type(x) is Susp and x.shift == -1:
        return x.item
    return Susp(x, 1)


class GradedError(ValueError):
    pass


# --------------------------------------------------------------------------
# Koszul appliers


Factor = Tuple[int, int, Callable[[tuple], Vec]]


def tensor_apply(ring: Ring, factors: Sequence[Factor], key: tuple) -> Vec:
    """Apply ``f_1 (x) ... (x) f_r`` to a basis tensor.

    Each factor is ``(arity, degree, fn)`` where ``fn`` eats a tuple of
    ``arity`` consecutive factors of ``key`` and returns a vector of output
    tuples.  The sign is the Koszul rule
    ``(f (x) g)(u (x) v) = (-1)^{|g||u|} f(u) (x) g(v)`` iterated.
    """
    results: List[Tuple[tuple, object]] = [((), 1)]
    pos = 0
    consumed_deg = 0
    for arity, fdeg, fn in factors:
        chunk = tuple(key[pos:pos + arity])
        if len(chunk) != arity:
            raise GradedError("tensor arity mismatch")
        sign = -1 if (fdeg * consumed_deg) % 2 else 1
        out = fn(chunk)
        if not out:
            return {}
        results = [(acc + o, c * oc * sign) for acc, c in results for o, oc in out.items()]
        consumed_deg += deg(chunk)
        pos += arity
    if pos != len(key):
        raise GradedError("tensor arity mismatch")
    vec: Vec = {}
    for k, c in results:
        add_term(ring, vec, k, c)
    return vec


def apply_at(ring: Ring, fn: Callable[[tuple], Vec], fdeg: int, arity: int, key: tuple, j: int) -> Vec:
    """Apply ``1^{(x) j} (x) fn (x) 1^{(x) l}`` to ``key``.

    Same sign as :func:`tensor_apply` with identity factors, specialised for
    speed: only the degree of the first ``j`` factors matters.
    """
    head = key[:j]
    tail = key[j + arity:]
    out = fn(tuple(key[j:j + arity]))
    if not out:
        return {}
    sign = -1 if (fdeg * deg(head)) % 2 else 1
    vec: Vec = {}
    for o, c in out.items():
        add_term(ring, vec, head + o + tail, c * sign)
    return vec


def apply_linear(ring: Ring, fn: Callable[[Hashable], Vec], vec: Vec) -> Vec:
    out: Vec = {}
    for k, c in vec.items():
        add_into(ring, out, fn(k), c)
    return out


def sign_of_suspensions(items: Sequence, shift_deg: int = 1) -> int:
    """Koszul sign of ``w^{(x) n}`` (or any tensor power of a degree-odd map)."""
    total = 0
    acc = 0
    for x in items:
        total += acc
        acc += deg(x)
    return -1 if (shift_deg * total) % 2 else 1


def desuspend_word(word: Sequence) -> Tuple[int, tuple]:
    """``w^{(x) n}`` on a word of suspended letters: (sign, letters)."""
    return sign_of_suspensions(word), tuple(w(x) for x in word)


def suspend_word(items: Sequence) -> Tuple[int, tuple]:
    """``s^{(x) n}`` on a tensor of plain letters: (sign, word)."""
    return sign_of_suspensions(items, -1), tuple(s(x) for x in items)


# --------------------------------------------------------------------------
# graded modules


@dataclass(frozen=True)
class GradedModule:
    """Finite-rank free graded module: degree -> rank, zero ranks absent."""

    ranks: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def of(cls, ranks: Dict[int, int]) -> "GradedModule":
        items = []
        for d, r in ranks.items():
            d, r = int(d), int(r)
            if r < 0:
                raise GradedError(f"negative rank in degree {d}")
            if r:
                items.append((d, r))
        return cls(tuple(sorted(items)))

    def rank(self, d: int) -> int:
        for dd, r in self.ranks:
            if dd == d:
                return r
        return 0

    @property
    def degrees(self) -> List[int]:
        return [d for d, _ in self.ranks]

    @property
    def total_rank(self) -> int:
        return sum(r for _, r in self.ranks)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.ranks)

    def basis(self, d: Optional[int] = None) -> List[BasisElement]:
        if d is not None:
            return [BasisElement(d, i) for i in range(self.rank(d))]
        return [BasisElement(dd, i) for dd, r in self.ranks for i in range(r)]

    def contains(self, e) -> bool:
        return type(e) is BasisElement and 0 <= e.index < self.rank(e.degree)

    def key_degree(self, e) -> int:
        return e.degree

    def index_of(self, e) -> int:
        return e.index

    def shifted(self, by: int) -> "GradedModule":
        """Module with degree p piece equal to this module's degree p+by piece."""
        return GradedModule(tuple((d - by, r) for d, r in self.ranks))

    def __repr__(self):
        return f"GradedModule({self.as_dict()})"


K = GradedModule(((0, 1),))


def _sort_key(e: BasisElement):
    return (e.degree, e.index)


@dataclass(frozen=True)
class TensorSpace:
    """Tensor product of graded modules with keys flat tuples of basis elements.

    Basis order: lexicographic in tuple position, each position ordered by
    (degree, index).  Zero factors give the ground ring in degree 0.
    """

    factors: Tuple[GradedModule, ...]
    _by_degree: Dict[int, List[tuple]] = field(default=None, compare=False, hash=False, repr=False)
    _index: Dict[tuple, int] = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        tuples = sorted(product(*(f.basis() for f in self.factors)),
                        key=lambda t: tuple(_sort_key(e) for e in t))
        by_deg: Dict[int, List[tuple]] = {}
        for t in tuples:
            by_deg.setdefault(deg(t), []).append(t)
        index = {}
        for lst in by_deg.values():
            for i, t in enumerate(lst):
                index[t] = i
        object.__setattr__(self, "_by_degree", dict(sorted(by_deg.items())))
        object.__setattr__(self, "_index", index)

    @property
    def module(self) -> GradedModule:
        return GradedModule.of({d: len(v) for d, v in self._by_degree.items()})

    @property
    def ranks(self):
        return self.module.ranks

    def rank(self, d: int) -> int:
        return len(self._by_degree.get(d, ()))

    def basis(self, d: Optional[int] = None) -> List[tuple]:
        if d is not None:
            return list(self._by_degree.get(d, ()))
        return [t for lst in self._by_degree.values() for t in lst]

    def contains(self, t) -> bool:
        return t in self._index

    def key_degree(self, t) -> int:
        return deg(t)

    def index_of(self, t) -> int:
        return self._index[t]

    def encode(self, t: tuple) -> BasisElement:
        if t not in self._index:
            raise GradedError(f"{t!r} is not a basis tensor")
        return BasisElement(deg(t), self._index[t])

    def decode(self, e: BasisElement) -> tuple:
        lst = self._by_degree.get(e.degree, ())
        if not 0 <= e.index < len(lst):
            raise GradedError(f"{e!r} out of range")
        return lst[e.index]


Space = Union[GradedModule, TensorSpace]


def tensor_power(V: GradedModule, n: int) -> TensorSpace:
    if n < 0:
        raise GradedError("negative tensor power")
    return TensorSpace(tuple([V] * n))


def tensor_spaces(U: Space, V: Space) -> TensorSpace:
    fu = U.factors if isinstance(U, TensorSpace) else (U,)
    fv = V.factors if isinstance(V, TensorSpace) else (V,)
    return TensorSpace(fu + fv)


def _as_tuple(space: Space, key) -> tuple:
    return key if isinstance(space, TensorSpace) else (key,)


def _from_tuple(space: Space, t: tuple):
    return t if isinstance(space, TensorSpace) else t[0]


# --------------------------------------------------------------------------
# homogeneous maps


@dataclass(frozen=True)
class GradedMap:
    """Homogeneous linear map of fixed degree, stored as sparse columns.

    ``columns[e]`` is the image of source basis key ``e``; the columns of
    source degree n form the block of shape rank_target(n+d) x rank_source(n).
    """

    source: Space
    target: Space
    degree: int
    ring: Ring
    columns: Dict[Hashable, Vec] = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self):
        clean = {}
        for e, vec in self.columns.items():
            if not self.source.contains(e):
                raise GradedError(f"{e!r} is not in the source")
            v = {}
            for t, c in vec.items():
                c = self.ring.reduce(c)
                if not c:
                    continue
                if not self.target.contains(t):
                    raise GradedError(f"{t!r} is not in the target")
                if self.target.key_degree(t) != self.source.key_degree(e) + self.degree:
                    raise GradedError(f"image of {e!r} is not homogeneous of degree {self.degree}")
                v[t] = c
            if v:
                clean[e] = v
        object.__setattr__(self, "columns", clean)

    def __call__(self, e) -> Vec:
        return dict(self.columns.get(e, {}))

    def apply(self, vec: Vec) -> Vec:
        out: Vec = {}
        for e, c in vec.items():
            add_into(self.ring, out, self.columns.get(e, {}), c)
        return out

    def block(self, n: int) -> List[List[object]]:
        rows = self.target.basis(n + self.degree)
        cols = self.source.basis(n)
        ridx = {t: i for i, t in enumerate(rows)}
        M = [[0] * len(cols) for _ in rows]
        for j, e in enumerate(cols):
            for t, c in self.columns.get(e, {}).items():
                M[ridx[t]][j] = c
        return M

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.degree == other.degree and self.ring == other.ring
                and self.columns == other.columns)

    def is_zero(self) -> bool:
        return not self.columns

    def __add__(self, other: "GradedMap") -> "GradedMap":
        _check_same(self, other)
        cols = {e: dict(v) for e, v in self.columns.items()}
        for e, v in other.columns.items():
            add_into(self.ring, cols.setdefault(e, {}), v)
        return GradedMap(self.source, self.target, self.degree, self.ring, cols)

    def scale(self, c) -> "GradedMap":
        cols = {e: {t: x * c for t, x in v.items()} for e, v in self.columns.items()}
        return GradedMap(self.source, self.target, self.degree, self.ring, cols)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)


def _check_same(f: GradedMap, g: GradedMap):
    if f.ring != g.ring:
        raise RingError("ring mismatch")
    if f.source != g.source or f.target != g.target or f.degree != g.degree:
        raise GradedError("maps are not parallel")


def identity(V: Space, ring: Ring) -> GradedMap:
    return GradedMap(V, V, 0, ring, {e: {e: 1} for e in V.basis()})


def zero_map(U: Space, V: Space, degree: int, ring: Ring) -> GradedMap:
    return GradedMap(U, V, degree, ring, {})


def from_function(U: Space, V: Space, degree: int, ring: Ring, fn: Callable[[Hashable], Vec]) -> GradedMap:
    return GradedMap(U, V, degree, ring, {e: fn(e) for e in U.basis()})


def compose_maps(f: GradedMap, g: GradedMap) -> GradedMap:
    """f o g."""
    if f.ring != g.ring:
        raise RingError("ring mismatch")
    if f.source != g.target:
        raise GradedError("source of f differs from target of g")
    cols = {e: f.apply(v) for e, v in g.columns.items()}
    return GradedMap(g.source, f.target, f.degree + g.degree, f.ring, cols)


def koszul_tensor(f: GradedMap, g: GradedMap) -> GradedMap:
    """f (x) g with (f (x) g)(u (x) v) = (-1)^{|g||u|} f(u) (x) g(v)."""
    if f.ring != g.ring:
        raise RingError("ring mismatch")
    ring = f.ring
    src = tensor_spaces(f.source, g.source)
    tgt = tensor_spaces(f.target, g.target)
    nf = len(f.source.factors) if isinstance(f.source, TensorSpace) else 1
    ng = len(g.source.factors) if isinstance(g.source, TensorSpace) else 1

    def lift(m: GradedMap):
        def fn(chunk):
            out = m(_from_tuple(m.source, chunk))
            return {_as_tuple(m.target, t): c for t, c in out.items()}
        return fn

    factors = [(nf, f.degree, lift(f)), (ng, g.degree, lift(g))]
    cols = {t: tensor_apply(ring, factors, t) for t in src.basis()}
    return GradedMap(src, tgt, f.degree + g.degree, ring, cols)


def evaluate(f: GradedMap, e) -> Vec:
    if not f.source.contains(e):
        raise GradedError(f"{e!r} is not a basis element of the source")
    return f(e)


@dataclass(frozen=True)
class Shift:
    """SV together with s: V -> SV and w: V -> S^{-1}V."""

    suspended: GradedModule
    desuspended: GradedModule
    s: GradedMap
    w: GradedMap


def shift(V: GradedModule, ring: Ring) -> Shift:
    SV = V.shifted(1)
    WV = V.shifted(-1)
    s_map = GradedMap(V, SV, -1, ring, {e: {BasisElement(e.degree - 1, e.index): 1} for e in V.basis()})
    w_map = GradedMap(V, WV, 1, ring, {e: {BasisElement(e.degree + 1, e.index): 1} for e in V.basis()})
    return Shift(SV, WV, s_map, w_map)


def poincare_coefficients(V: GradedModule, n: int) -> Dict[int, int]:
    """Ranks of V^{(x) n} by repeated polynomial multiplication."""
    poly = {0: 1}
    for _ in range(n):
        nxt: Dict[int, int] = {}
        for a, ca in poly.items():
            for b, cb in V.ranks:
                nxt[a + b] = nxt.get(a + b, 0) + ca * cb
        poly = nxt
    return {d: r for d, r in sorted(poly.items()) if r}


def vector_tensor_power(ring: Ring, vec: Vec, n: int) -> Vec:
    """vec^{(x) n} as a vector of n-tuples."""
    out: Vec = {(): 1}
    for _ in range(n):
        nxt: Vec = {}
        for t, c in out.items():
            for k, d in vec.items():
                add_term(ring, nxt, t + (k,), c * d)
        out = nxt
    return out
