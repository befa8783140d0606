"""Length-truncated cobar constructions and the bar/cobar adjunction data.

Cobar words are tuples of desuspended letters ``Susp(x, +1)`` with ``x`` a
basis key of the reduced coalgebra.  The generator-level signs (on the
reduced differential term, the reduced coproduct term, the curvature and the
bijection with twisting cochains) are pinned in ``cobar_signs.json`` and
re-derived by :func:`calibrate_cobar_signs`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from itertools import product
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple

from .ainfty import AInftyMorphism, check_morphism
from .bar import (BarCoalgebra, CoalgebraMorphism, TwistingCochain, bar, bar_morphism, check_coalgebra_morphism,
                  check_twisting, cochain_to_coalgebra_morphism, universal_twisting_cochain)
from .graded import Susp, apply_at, deg, desuspend_word, s, w
from .linalg import Vec, add_into, add_term
from .report import FAIL, PASS, SKIPPED, Report, WindowExceeded, fmt_key, fmt_vec

SIGNS_FILE = "cobar_signs.json"


@dataclass(frozen=True)
class CobarSigns:
    tau: int
    dbar: int
    delta: int
    curvature: int

    def as_tuple(self):
        return (self.tau, self.dbar, self.delta, self.curvature)


def pinned_signs() -> CobarSigns:
    data = json.loads(resources.files("cainfty").joinpath(SIGNS_FILE).read_text())
    return CobarSigns(**data["signs"])


class CobarAlgebra:
    """Reduced tensor algebra on the desuspended reduced coalgebra, words of
    length 1..L, as a cdg algebra (arity bound 2, no unit).

    Products and differentials whose result would exceed length L raise
    :class:`WindowExceeded`.
    """

    arity = 2
    unit = None

    def __init__(self, C, L: int, signs: Optional[CobarSigns] = None, name: Optional[str] = None):
        if L < 1:
            raise ValueError("length cap must be at least 1")
        self.coalgebra = C
        self.ring = C.ring
        self.length_cap = L
        self.signs = signs or pinned_signs()
        self.name = name or f"Cobar({C.name})"
        self._d_cache: Dict[tuple, Vec] = {}
        self._gen_cache: Dict[tuple, Vec] = {}
        curv: Vec = {}
        for y, c in C.codiff(C.one).items():
            if y != C.one:
                add_term(self.ring, curv, (w(y),), self.signs.curvature * c)
        self._curvature = curv

    # algebra interface -----------------------------------------------------
    def reduced_keys(self) -> List:
        return [x for x in self.coalgebra.basis() if x != self.coalgebra.one]

    def letters(self) -> List[Susp]:
        return [w(x) for x in self.reduced_keys()]

    def basis(self, max_length: Optional[int] = None) -> List[tuple]:
        top = self.length_cap if max_length is None else max_length
        letters = self.letters()
        out = []
        for n in range(1, top + 1):
            out.extend(product(letters, repeat=n))
        return out

    def degree(self, key) -> int:
        return deg(key)

    @property
    def curvature(self) -> Vec:
        return self._curvature

    def is_nonzero(self, k: int) -> bool:
        if k == 0:
            return bool(self._curvature)
        return k in (1, 2)

    def _check(self, n: int):
        if n > self.length_cap:
            raise WindowExceeded(f"cobar word of length {n} exceeds the cap {self.length_cap}")

    def _dgen(self, chunk) -> Vec:
        """Differential on one generator w x."""
        hit = self._gen_cache.get(chunk)
        if hit is not None:
            return hit
        C = self.coalgebra
        ring = self.ring
        x = chunk[0].item
        out: Vec = {}
        for y, c in C.codiff(x).items():
            if y != C.one:
                add_term(ring, out, (w(y),), self.signs.dbar * c)
        for (x1, x2), c in C.reduced_coproduct(x).items():
            sign = -1 if deg(x1) % 2 else 1
            add_term(ring, out, (w(x1), w(x2)), self.signs.delta * sign * c)
        self._gen_cache[chunk] = out
        return out

    def d(self, word) -> Vec:
        word = tuple(word)
        hit = self._d_cache.get(word)
        if hit is not None:
            return hit
        ring = self.ring
        out: Vec = {}
        for j in range(len(word)):
            add_into(ring, out, apply_at(ring, self._dgen, 1, 1, word, j))
        for u in out:
            self._check(len(u))
        self._d_cache[word] = out
        return out

    def apply_d(self, vec: Vec) -> Vec:
        out: Vec = {}
        for u, c in vec.items():
            add_into(self.ring, out, self.d(u), c)
        return out

    def mul(self, a: Vec, b: Vec) -> Vec:
        out: Vec = {}
        for u, c in a.items():
            for v, e in b.items():
                self._check(len(u) + len(v))
                add_term(self.ring, out, u + v, c * e)
        return out

    def op(self, k: int, inputs: tuple) -> Vec:
        if k == 0:
            return self._curvature
        if k == 1:
            return self.d(inputs[0])
        if k == 2:
            u, v = inputs
            self._check(len(u) + len(v))
            return {u + v: 1}
        return {}

    def op_tuple_fn(self, k: int):
        return lambda chunk: {(o,): c for o, c in self.op(k, chunk).items()}


def cobar(C, L: int, signs: Optional[CobarSigns] = None) -> CobarAlgebra:
    return CobarAlgebra(C, L, signs)


def check_cobar(O: CobarAlgebra, max_length: Optional[int] = None) -> Report:
    """d(c) = 0, d^2 = [c, -] and the Leibniz rule on pairs of generators.

    d^2 - [c, -] is a derivation, so it vanishes once it vanishes on
    generators; by default words of length <= min(L - 2, 2) are checked.
    """
    ring = O.ring
    L = O.length_cap
    top = min(L - 2, 2) if max_length is None else max_length
    rep = Report()
    names = [O.name]
    try:
        dc = O.apply_d(O.curvature)
        rep.add("cobar-dc", names, "all", FAIL if dc else PASS, residual=fmt_vec(dc, ring) if dc else None)
    except WindowExceeded:
        rep.add("cobar-dc", names, "all", SKIPPED, detail="needs length above the cap")
    bad = None
    skipped = 0
    for u in O.basis(max(top, 0)):
        try:
            v = O.apply_d(O.d(u))
        except WindowExceeded:
            skipped += 1
            continue
        add_into(ring, v, O.mul(O.curvature, {u: 1}), -1)
        add_into(ring, v, O.mul({u: 1}, O.curvature), 1)
        if v:
            bad = (u, v)
            break
    rep.add("cobar-d-squared", names, "all", FAIL if bad else PASS, witness=fmt_key(bad[0]) if bad else None,
            residual=fmt_vec(bad[1], ring) if bad else None)
    bad = None
    pairs = product(O.basis(1), repeat=2) if L >= 3 else ()
    for u, v in pairs:
        try:
            lhs = dict(O.d(u + v))
        except WindowExceeded:
            skipped += 1
            continue
        add_into(ring, lhs, O.mul(O.d(u), {v: 1}), -1)
        add_into(ring, lhs, O.mul({u: 1}, O.d(v)), 1 if deg(u) % 2 else -1)
        if lhs and bad is None:
            bad = ((u, v), lhs)
    rep.add("cobar-leibniz", names, "all", FAIL if bad else PASS, witness=fmt_key(bad[0]) if bad else None,
            residual=fmt_vec(bad[1], ring) if bad else None)
    if top < L:
        rep.add("cobar-d-squared", names, "window", SKIPPED, detail=f"words of length {top + 1}..{L}")
    if skipped:
        rep.add("cobar-d-squared", names, "letters", SKIPPED,
                detail=f"{skipped} words with a generator outside the coalgebra window")
    return rep


# --------------------------------------------------------------------------
# strict morphisms out of the cobar construction


class CdgMorphism:
    """Strict degree-0 map on keys of a cobar algebra into a cdg algebra."""

    def __init__(self, source: CobarAlgebra, target, fn: Callable[[Hashable], Vec], name: str = "phi"):
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
            self._cache[key] = hit
        return hit

    def apply(self, vec: Vec) -> Vec:
        out: Vec = {}
        for k, c in vec.items():
            add_into(self.ring, out, self(k), c)
        return out


def _target_mul(A, a: Vec, b: Vec) -> Vec:
    out: Vec = {}
    for x, c in a.items():
        for y, e in b.items():
            add_into(A.ring, out, A.op(2, (x, y)), c * e)
    return out


def _target_d(A, a: Vec) -> Vec:
    out: Vec = {}
    for x, c in a.items():
        add_into(A.ring, out, A.op(1, (x,)), c)
    return out


def cochain_to_cdg_morphism(tau: TwistingCochain, O: Optional[CobarAlgebra] = None, L: Optional[int] = None,
                            name: Optional[str] = None) -> CdgMorphism:
    """phi(w x) = sign * tau(x) on generators, extended multiplicatively."""
    C, A = tau.source, tau.target
    if any(A.is_nonzero(k) for k in range(3, A.arity + 1)):
        raise ValueError("the target must be a cdg algebra (arity <= 2)")
    if O is None:
        if L is None:
            raise ValueError("give a cobar algebra or a length cap")
        O = cobar(C, L)
    sign = O.signs.tau

    def fn(word):
        acc = None
        for letter in word:
            img = {a: sign * c for a, c in tau(letter.item).items()}
            acc = img if acc is None else _target_mul(A, acc, img)
            if not acc:
                return {}
        return acc or {}

    return CdgMorphism(O, A, fn, name=name or f"phi_{tau.name}")


def cdg_morphism_to_cochain(phi: CdgMorphism) -> TwistingCochain:
    O = phi.source
    C = O.coalgebra
    sign = O.signs.tau

    def fn(x):
        if x == C.one:
            return {}
        return {a: sign * c for a, c in phi((w(x),)).items()}

    return TwistingCochain(C, phi.target, fn, name=f"tau_{phi.name}")


def check_cdg_morphism(phi: CdgMorphism, max_length: Optional[int] = None) -> Report:
    """Curvature preservation, compatibility with differentials and
    multiplicativity.

    Both sides of phi d = d phi are phi-derivations, so agreement on short
    words implies agreement everywhere; by default words of length
    <= min(L - 1, 2) are checked and longer ones listed as skipped.
    """
    O, A = phi.source, phi.target
    ring = phi.ring
    L = O.length_cap
    top = min(L - 1, 2) if max_length is None else max_length
    names = [phi.name, O.name, A.name]
    rep = Report()
    v = phi.apply(O.curvature)
    add_into(ring, v, A.curvature, -1)
    rep.add("cdg-morphism-curvature", names, "all", FAIL if v else PASS, residual=fmt_vec(v, ring) if v else None)
    bad = None
    skipped = 0
    for u in O.basis(top):
        try:
            lhs = phi.apply(O.d(u))
        except WindowExceeded:
            skipped += 1
            continue
        add_into(ring, lhs, _target_d(A, phi(u)), -1)
        if lhs:
            bad = (u, lhs)
            break
    if skipped:
        rep.add("cdg-morphism-differential", names, "letters", SKIPPED,
                detail=f"{skipped} words with a generator outside the coalgebra window")
    rep.add("cdg-morphism-differential", names, "all", FAIL if bad else PASS,
            witness=fmt_key(bad[0]) if bad else None, residual=fmt_vec(bad[1], ring) if bad else None)
    bad = None
    if L >= 2:
        letters = O.basis(1)
        for u in letters:
            for v2 in letters:
                lhs = dict(phi(u + v2))
                add_into(ring, lhs, _target_mul(A, phi(u), phi(v2)), -1)
                if lhs and bad is None:
                    bad = ((u, v2), lhs)
    rep.add("cdg-morphism-multiplicative", names, "all", FAIL if bad else PASS,
            witness=fmt_key(bad[0]) if bad else None, residual=fmt_vec(bad[1], ring) if bad else None)
    if top < L:
        rep.add("cdg-morphism-differential", names, "window", SKIPPED, detail=f"words of length {top + 1}..{L}")
    return rep


def canonical_cochain(O: CobarAlgebra) -> TwistingCochain:
    """tau_C = sign * w pi : C -> Omega C."""
    C = O.coalgebra
    sign = O.signs.tau

    def fn(x):
        if x == C.one:
            return {}
        return {(w(x),): sign}
    return TwistingCochain(C, O, fn, name=f"tau_{C.name}")


# --------------------------------------------------------------------------
# calibration


@dataclass
class CalibrationCase:
    """A coalgebra, a cdg target and a twisting cochain between them."""

    name: str
    coalgebra: object
    tau: TwistingCochain
    length: int


def _evaluate(case: CalibrationCase, signs: CobarSigns) -> Dict[str, bool]:
    O = CobarAlgebra(case.coalgebra, case.length, signs)
    tau_c = canonical_cochain(O)
    mc = check_twisting(tau_c, [k for k in case.coalgebra.basis()
                                if case.coalgebra.level(k) + 1 <= case.length]).passed
    phi = cochain_to_cdg_morphism(case.tau, O)
    morph = check_cdg_morphism(phi).passed
    square = check_cobar(O).passed
    return {"mc": mc, "morphism": morph, "square": square}


def calibrate_cobar_signs(cases: Iterable[CalibrationCase]) -> Tuple[Optional[CobarSigns], List[str]]:
    """Try all sixteen sign choices; keep those passing every test on every
    case; prefer curvature sign +1, then bijection sign +1."""
    cases = list(cases)
    log = []
    winners = []
    for bits in product((1, -1), repeat=4):
        signs = CobarSigns(*bits)
        ok = True
        for case in cases:
            res = _evaluate(case, signs)
            if not all(res.values()):
                ok = False
                failed = ",".join(k for k, v in res.items() if not v)
                log.append(f"{signs.as_tuple()} fails {failed} on {case.name}")
                break
        if ok:
            log.append(f"{signs.as_tuple()} passes all cases")
            winners.append(signs)
    if not winners:
        return None, log
    winners.sort(key=lambda sg: (sg.curvature != 1, sg.tau != 1))
    return winners[0], log


def default_calibration_cases(L: int = 4) -> List[CalibrationCase]:
    from .fixtures import c2, c2_cochain_table, cone_algebra, exterior, k3
    from .bar import cochain_from_table
    C = c2()
    cases = [CalibrationCase("C2->K3", C, cochain_from_table(C, k3().embed(), c2_cochain_table()), L)]
    for A in (exterior().embed(), cone_algebra().embed()):
        B = bar(A, 3)
        cases.append(CalibrationCase(f"B3({A.name})", B, universal_twisting_cochain(B), L))
    return cases


# --------------------------------------------------------------------------
# adjunction data


class EnvelopeMorphism(AInftyMorphism):
    """A -> Omega B A with f_i(a_1..a_i) a multiple of the length-one word on
    the bar word (s a_1, ..., s a_i)."""

    def __init__(self, A, O: CobarAlgebra, name: str = "env"):
        self.source = A
        self.target = O
        self.name = name
        self.components = {}
        self._wrapped = {}
        self._top = O.coalgebra.weight_cap

    @property
    def arity(self) -> int:
        return self._top

    def has_component(self, i: int) -> bool:
        return 1 <= i <= self._top

    def component(self, i: int, inputs: tuple) -> Vec:
        if not 1 <= i <= self._top or len(inputs) != i:
            return {}
        sign, word = _suspend(inputs)
        return {(w(word),): sign * self.target.signs.tau}

    def tuple_fn(self, i: int):
        return lambda chunk: {(o,): c for o, c in self.component(i, chunk).items()}


def _suspend(items) -> Tuple[int, tuple]:
    word = tuple(s(a) for a in items)
    sign, _ = desuspend_word(word)
    return sign, word


@dataclass
class AdjunctionData:
    counit: CdgMorphism
    unit: CoalgebraMorphism
    envelope: EnvelopeMorphism
    bar_of_algebra: BarCoalgebra
    cobar_of_bar: CobarAlgebra
    cobar_of_coalgebra: CobarAlgebra
    bar_of_cobar: BarCoalgebra


def adjunction_algebras(A, C, W: int, L: int) -> AdjunctionData:
    """Counit Omega B A -> A, unit C -> B Omega C and the envelope A -> Omega B A."""
    BA = bar(A, W)
    OBA = cobar(BA, L)
    counit = cochain_to_cdg_morphism(universal_twisting_cochain(BA), OBA, name="counit")
    OC = cobar(C, L)
    BOC = bar(OC, W)
    unit = cochain_to_coalgebra_morphism(canonical_cochain(OC), BOC)
    unit.name = "unit"
    env = EnvelopeMorphism(A, OBA)
    return AdjunctionData(counit, unit, env, BA, OBA, OC, BOC)


def check_adjunction(data: AdjunctionData, p_max: int = 2) -> Report:
    """Counit and unit pass their morphism checks; the envelope passes the
    bar commutation check, and its bar morphism agrees with the unit at
    C = BA on words of weight <= p_max."""
    rep = Report()
    rep.extend(check_cdg_morphism(data.counit, max_length=min(2, data.cobar_of_bar.length_cap - 1)))
    C = data.unit.source
    keys = [k for k in C.basis() if _unit_safe(data, k)]
    rep.extend(check_coalgebra_morphism(data.unit, keys))
    env = data.envelope
    rep.extend(check_morphism(env, p_max))
    BA = data.bar_of_algebra
    OBA = data.cobar_of_bar
    BOBA = bar(OBA, BA.weight_cap)
    Benv = bar_morphism(env, BA, BOBA)
    unit_at_bar = cochain_to_coalgebra_morphism(canonical_cochain(OBA), BOBA)
    bad = None
    for word in BA.basis(p_max):
        if Benv(word) != unit_at_bar(word):
            bad = word
            break
    rep.add("envelope-bar-equals-unit", [env.name, BA.name], "all", FAIL if bad else PASS,
            witness=fmt_key(bad) if bad is not None else None)
    return rep


def _unit_safe(data: AdjunctionData, key) -> bool:
    C = data.unit.source
    try:
        C.codiff(key)
    except WindowExceeded:
        return False
    return C.level(key) + 1 <= min(data.bar_of_cobar.exact_through, data.cobar_of_coalgebra.length_cap - 1)
