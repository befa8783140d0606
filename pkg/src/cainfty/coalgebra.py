"""Finite counital dg coalgebras with coaugmentation and their comodules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional

from .graded import BasisElement, GradedModule, deg
from .linalg import Vec, add_into, add_term
from .report import FAIL, PASS, SKIPPED, Report, WindowExceeded, fmt_key, fmt_vec
from .ring import Ring


class CoalgebraError(ValueError):
    pass


class CoalgebraBase:
    """Interface shared by finite coalgebras and truncated bar coalgebras.

    Subclasses provide ``ring``, ``one`` (image of the coaugmentation),
    ``degree``, ``counit``, ``coproduct``, ``codiff`` and ``level``.
    """

    ring: Ring
    one: Hashable
    name: str = "C"

    def degree(self, key) -> int:
        return deg(key)

    def counit(self, key):
        return 1 if key == self.one else 0

    def codiff_defined(self, key) -> bool:
        try:
            self.codiff(key)
            return True
        except WindowExceeded:
            return False

    def iterated_coproduct(self, key, n: int) -> Vec:
        """Delta^{(n)}: C -> C^{(x) n}, with Delta^{(0)} the counit."""
        if n == 0:
            c = self.counit(key)
            return {(): c} if c else {}
        cur: Vec = {(key,): 1}
        for _ in range(n - 1):
            nxt: Vec = {}
            for t, c in cur.items():
                for pair, d in self.coproduct(t[0]).items():
                    add_term(self.ring, nxt, pair + t[1:], c * d)
            cur = nxt
        return cur

    def reduced_coproduct(self, key) -> Vec:
        out = dict(self.coproduct(key))
        if key == self.one:
            return {}
        add_term(self.ring, out, (key, self.one), -1)
        add_term(self.ring, out, (self.one, key), -1)
        return out


@dataclass(eq=False)
class DgCoalgebra(CoalgebraBase):
    """Finite-rank counital dg coalgebra.

    The coaugmentation is the basis element ``one`` and the counit is its dual
    functional, so the reduced coalgebra is spanned by the other basis
    elements.  ``d_window`` restricts the keys on which the codifferential
    is known (used for materialised bar truncations); None means all.
    """

    ring: Ring
    module: GradedModule
    one: BasisElement
    coproduct_table: Dict[BasisElement, Vec]
    codiff_table: Dict[BasisElement, Vec]
    name: str = "C"
    labels: Optional[Dict[BasisElement, str]] = None
    d_window: Optional[frozenset] = None
    weights: Optional[Dict[BasisElement, int]] = None
    _levels: Dict[BasisElement, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.module.contains(self.one) or self.one.degree != 0:
            raise CoalgebraError("coaugmentation must be a degree-0 basis element")
        for e, vec in self.coproduct_table.items():
            for (a, b), c in vec.items():
                if deg(a) + deg(b) != e.degree:
                    raise CoalgebraError(f"coproduct of {e!r} is not of degree 0")
        for e, vec in self.codiff_table.items():
            for a in vec:
                if deg(a) != e.degree + 1:
                    raise CoalgebraError(f"codifferential of {e!r} is not of degree 1")

    def basis(self) -> List[BasisElement]:
        return self.module.basis()

    def coproduct(self, key) -> Vec:
        return self.coproduct_table.get(key, {})

    def codiff(self, key) -> Vec:
        if self.d_window is not None and key not in self.d_window:
            raise WindowExceeded(f"codifferential of {key!r} lies outside the window")
        return self.codiff_table.get(key, {})

    def reduced_basis(self) -> List[BasisElement]:
        return [e for e in self.basis() if e != self.one]

    def level(self, key) -> int:
        """Coradical filtration level: least n with key in ker reduced-Delta^{(n+1)}."""
        if key == self.one:
            return 0
        if key in self._levels:
            return self._levels[key]
        bound = self.module.total_rank + 1
        cur: Vec = {(key,): 1}
        n = 1
        while cur:
            if n > bound:
                raise CoalgebraError(f"{key!r} escapes the coradical filtration (not cocomplete)")
            nxt: Vec = {}
            for t, c in cur.items():
                for pair, d in self.reduced_coproduct(t[0]).items():
                    add_term(self.ring, nxt, pair + t[1:], c * d)
            cur = nxt
            n += 1
        self._levels[key] = n - 1
        return n - 1

    def label(self, e) -> str:
        if self.labels and e in self.labels:
            return self.labels[e]
        return fmt_key(e)


def check_coalgebra_axioms(C, keys: Optional[Iterable] = None, name: Optional[str] = None) -> Report:
    """Coassociativity, counit laws, coaugmentation, Leibniz rule for the
    codifferential, d^2 = 0, counit o d = 0 and cocompleteness.

    Axioms involving the codifferential are skipped (and listed) on keys
    where the needed values lie outside the window.
    """
    ring = C.ring
    name = name or getattr(C, "name", "C")
    rep = Report()
    keys = list(C.basis() if keys is None else keys)
    fails: Dict[str, tuple] = {}
    skipped: Dict[str, int] = {}

    def fail(check, key, vec):
        if check not in fails:
            fails[check] = (key, vec)

    def lin(fn, vec):
        out: Vec = {}
        for k, c in vec.items():
            add_into(ring, out, fn(k), c)
        return out

    one_cop = C.coproduct(C.one)
    if one_cop != {(C.one, C.one): 1}:
        fail("coalgebra-coaugmentation", C.one, one_cop)
    for e in keys:
        cop = C.coproduct(e)
        # coassociativity
        left: Vec = {}
        right: Vec = {}
        for (a, b), c in cop.items():
            for (a1, a2), d in C.coproduct(a).items():
                add_term(ring, left, (a1, a2, b), c * d)
            for (b1, b2), d in C.coproduct(b).items():
                add_term(ring, right, (a, b1, b2), c * d)
        diff = dict(left)
        add_into(ring, diff, right, -1)
        if diff:
            fail("coalgebra-coassociativity", e, diff)
        # counit laws
        l1: Vec = {}
        l2: Vec = {}
        for (a, b), c in cop.items():
            add_term(ring, l1, b, c * C.counit(a))
            add_term(ring, l2, a, c * C.counit(b))
        for lv in (l1, l2):
            if lv != {e: 1}:
                fail("coalgebra-counit", e, add_into(ring, dict(lv), {e: 1}, -1))
        try:
            C.level(e)
        except CoalgebraError:
            fail("coalgebra-cocomplete", e, {})
        # codifferential axioms
        try:
            de = C.codiff(e)
            lhs = lin(C.coproduct, de)
            rhs: Vec = {}
            for (a, b), c in cop.items():
                for x, d in C.codiff(a).items():
                    add_term(ring, rhs, (x, b), c * d)
                sgn = -1 if deg(a) % 2 else 1
                for y, d in C.codiff(b).items():
                    add_term(ring, rhs, (a, y), c * d * sgn)
            add_into(ring, lhs, rhs, -1)
            if lhs:
                fail("coalgebra-coderivation", e, lhs)
            cd = sum(C.counit(x) * c for x, c in de.items())
            if ring.reduce(cd):
                fail("coalgebra-counit-codiff", e, {"counit(d)": cd})
            dd = lin(C.codiff, de)
            if dd:
                fail("coalgebra-d-squared", e, dd)
        except WindowExceeded:
            skipped["coalgebra-codiff"] = skipped.get("coalgebra-codiff", 0) + 1
    for check in ("coalgebra-coaugmentation", "coalgebra-coassociativity", "coalgebra-counit",
                  "coalgebra-cocomplete", "coalgebra-coderivation", "coalgebra-counit-codiff",
                  "coalgebra-d-squared"):
        if check in fails:
            key, vec = fails[check]
            rep.add(check, [name], "all", FAIL, witness=fmt_key(key), residual=fmt_vec(vec, ring) if vec else None)
        else:
            rep.add(check, [name], "all", PASS)
    for check, n in skipped.items():
        rep.add(check, [name], "window", SKIPPED, detail=f"{n} basis elements outside the window")
    return rep


def validate_coalgebra(C: DgCoalgebra) -> DgCoalgebra:
    rep = check_coalgebra_axioms(C)
    bad = rep.first_failure()
    if bad is not None:
        raise CoalgebraError(f"{bad.check} fails at {bad.witness}")
    return C


def trivial_coalgebra(ring: Ring, name: str = "k") -> DgCoalgebra:
    one = BasisElement(0, 0)
    return DgCoalgebra(ring, GradedModule.of({0: 1}), one, {one: {(one, one): 1}}, {}, name=name)


def materialize(C, name: Optional[str] = None) -> DgCoalgebra:
    """Turn a finite (possibly windowed) coalgebra with arbitrary keys into a
    :class:`DgCoalgebra` with basis elements ordered by (degree, key)."""
    keys = list(C.basis())
    by_deg: Dict[int, List] = {}
    for k in keys:
        by_deg.setdefault(C.degree(k), []).append(k)
    relabel = {}
    labels = {}
    for d in sorted(by_deg):
        ordered = sorted(by_deg[d], key=lambda k: (C.level(k), repr(k)))
        for i, k in enumerate(ordered):
            relabel[k] = BasisElement(d, i)
            labels[BasisElement(d, i)] = fmt_key(k)
    module = GradedModule.of({d: len(v) for d, v in by_deg.items()})
    cop = {}
    codiff = {}
    window = set()
    for k in keys:
        e = relabel[k]
        cop[e] = {(relabel[a], relabel[b]): c for (a, b), c in C.coproduct(k).items()}
        try:
            dv = C.codiff(k)
        except WindowExceeded:
            continue
        if all(x in relabel for x in dv):
            codiff[e] = {relabel[x]: c for x, c in dv.items()}
            window.add(e)
    full = len(window) == len(keys)
    weights = {relabel[k]: C.level(k) for k in keys}
    out = DgCoalgebra(C.ring, module, relabel[C.one], cop, codiff, name=name or C.name,
                      labels=labels, d_window=None if full else frozenset(window), weights=weights)
    out._relabel = relabel
    return out


# --------------------------------------------------------------------------
# comodules


@dataclass(eq=False)
class DgComodule:
    """Finite counital dg right comodule N with coaction N -> N (x) C."""

    ring: Ring
    coalgebra: object
    module: GradedModule
    coaction_table: Dict[BasisElement, Vec]
    codiff_table: Dict[BasisElement, Vec]
    name: str = "N"

    def basis(self):
        return self.module.basis()

    def degree(self, key) -> int:
        return deg(key)

    def coaction(self, key) -> Vec:
        return self.coaction_table.get(key, {})

    def codiff(self, key) -> Vec:
        return self.codiff_table.get(key, {})


def regular_comodule(C: DgCoalgebra, name: Optional[str] = None) -> DgComodule:
    """C as a right comodule over itself."""
    return _RegularComodule(C.ring, C, C.module, {e: C.coproduct(e) for e in C.basis()}, {}, name=name or C.name)


class _RegularComodule(DgComodule):
    # delegates so that windowed coalgebras keep raising outside their window
    def codiff(self, key) -> Vec:
        return self.coalgebra.codiff(key)


def check_comodule_axioms(N, keys: Optional[Iterable] = None, name: Optional[str] = None) -> Report:
    """Coassociativity and counit law of the coaction, compatibility of the
    codifferential with the coaction, and d_N^2 = 0."""
    ring = N.ring
    C = N.coalgebra
    name = name or getattr(N, "name", "N")
    rep = Report()
    keys = list(N.basis() if keys is None else keys)
    fails = {}
    skipped = 0
    for e in keys:
        co = N.coaction(e)
        left: Vec = {}
        right: Vec = {}
        counit: Vec = {}
        for (n, c), a in co.items():
            for (n2, c2), b in N.coaction(n).items():
                add_term(ring, left, (n2, c2, c), a * b)
            for (c1, c2), b in C.coproduct(c).items():
                add_term(ring, right, (n, c1, c2), a * b)
            add_term(ring, counit, n, a * C.counit(c))
        add_into(ring, left, right, -1)
        if left and "comodule-coassociativity" not in fails:
            fails["comodule-coassociativity"] = (e, left)
        if counit != {e: 1} and "comodule-counit" not in fails:
            fails["comodule-counit"] = (e, counit)
        try:
            de = N.codiff(e)
            lhs: Vec = {}
            for x, a in de.items():
                add_into(ring, lhs, N.coaction(x), a)
            for (n, c), a in co.items():
                for x, b in N.codiff(n).items():
                    add_term(ring, lhs, (x, c), -a * b)
                sgn = -1 if deg(n) % 2 else 1
                for y, b in C.codiff(c).items():
                    add_term(ring, lhs, (n, y), -a * b * sgn)
            if lhs and "comodule-codiff" not in fails:
                fails["comodule-codiff"] = (e, lhs)
            dd: Vec = {}
            for x, a in de.items():
                add_into(ring, dd, N.codiff(x), a)
            if dd and "comodule-d-squared" not in fails:
                fails["comodule-d-squared"] = (e, dd)
        except WindowExceeded:
            skipped += 1
    for check in ("comodule-coassociativity", "comodule-counit", "comodule-codiff", "comodule-d-squared"):
        if check in fails:
            key, vec = fails[check]
            rep.add(check, [name], "all", FAIL, witness=fmt_key(key), residual=fmt_vec(vec, ring))
        else:
            rep.add(check, [name], "all", PASS)
    if skipped:
        rep.add("comodule-codiff", [name], "window", SKIPPED, detail=f"{skipped} basis elements outside the window")
    return rep
