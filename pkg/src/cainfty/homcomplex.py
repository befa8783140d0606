"""The twisted Hom complex F_tau Hom(N, M) and the two adjunction isomorphisms.

A map N -> M is stored as a sparse vector over keys ``(n, m)`` meaning
"send basis element n to basis element m"; its degree is |m| - |n|.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from .bar import TwistingCochain, reduced_iterated
from .graded import deg, tensor_apply
from .linalg import Vec, add_into, add_term, kernel
from .modules import CdgModule, TwistedComodule, as_ainfty_module, cobar_comodule
from .report import FAIL, PASS, Report, fmt_key, fmt_vec


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _apply_map(ring, f: Vec, x: Vec) -> Vec:
    """Evaluate a map given as {(src, tgt): coef} on a vector of sources."""
    by_src: Dict = {}
    for (a, b), c in f.items():
        by_src.setdefault(a, {})[b] = c
    out: Vec = {}
    for a, c in x.items():
        add_into(ring, out, by_src.get(a, {}), c)
    return out


def _map_degree(f: Vec) -> int:
    degs = {deg(b) - deg(a) for a, b in f}
    if len(degs) > 1:
        raise ValueError("map is not homogeneous")
    return degs.pop() if degs else 0


class HomComplex:
    """F_tau Hom(N, M) for a comodule N over C, a module M over A, tau: C -> A.

    d_tau f = m_1 f - (-1)^{|f|} f d_N
              + sum_{i>=2} (-1)^{(i-1)(|f|+1)} m_i (f (x) tau^{(x) i-1}) Delta_N^{(i-1)}.
    """

    def __init__(self, N, M, tau: TwistingCochain):
        self.N = N
        self.M = as_ainfty_module(M)
        self.tau = tau
        self.ring = tau.ring
        self._cache: Dict[tuple, Vec] = {}

    def basis(self, degree: Optional[int] = None) -> List[tuple]:
        keys = [(n, m) for n in self.N.basis() for m in self.M.basis()]
        if degree is not None:
            keys = [k for k in keys if deg(k[1]) - deg(k[0]) == degree]
        return keys

    def degrees(self) -> List[int]:
        return sorted({deg(m) - deg(n) for n, m in self.basis()})

    def iterated_coaction(self, n, k: int) -> Vec:
        """(1 (x) reduced Delta^{(k)}) Delta_N (n) as keys (n_0, c_1, ..., c_k)."""
        out: Vec = {}
        C = self.tau.source
        for (n0, c), a in self.N.coaction(n).items():
            for t, b in reduced_iterated(C, c, k).items():
                add_term(self.ring, out, (n0,) + t, a * b)
        return out

    def d_key(self, key) -> Vec:
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        ring = self.ring
        M = self.M
        n0_, m0_ = key
        fdeg = deg(m0_) - deg(n0_)
        out: Vec = {}
        # m_1 f
        for x, c in M.op(1, (m0_,)).items():
            add_term(ring, out, (n0_, x), c)
        # -(-1)^{|f|} f d_N, evaluated on every source basis element n
        for n in self.N.basis():
            for y, c in self.N.codiff(n).items():
                if y == n0_:
                    add_term(ring, out, (n, m0_), -_sign(fdeg) * c)
            for i in range(2, M.arity + 1):
                if not M.is_nonzero(i):
                    continue
                sign = _sign((i - 1) * (fdeg + 1))
                factors = [(1, fdeg, lambda ch: {(m0_,): 1} if ch[0] == n0_ else {})]
                factors += [(1, 1, self.tau.tuple_fn)] * (i - 1)
                for t, a in self.iterated_coaction(n, i - 1).items():
                    if t[0] != n0_:
                        continue
                    for u, b in tensor_apply(ring, factors, t).items():
                        for x, c in M.op(i, u).items():
                            add_term(ring, out, (n, x), sign * a * b * c)
        self._cache[key] = out
        return out

    def d(self, f: Vec) -> Vec:
        out: Vec = {}
        for k, c in f.items():
            add_into(self.ring, out, self.d_key(k), c)
        return out

    def cocycles(self, degree: int) -> List[Vec]:
        return kernel(self.ring, {k: self.d_key(k) for k in self.basis(degree)})


def hom_complex(N, M, tau: TwistingCochain) -> HomComplex:
    return HomComplex(N, M, tau)


def check_hom_square(H: HomComplex) -> Report:
    bad = None
    for k in H.basis():
        v = H.d(H.d_key(k))
        if v:
            bad = (k, v)
            break
    rep = Report()
    rep.add("hom-d-squared", [H.N.name, H.M.name, H.tau.name], "all", FAIL if bad else PASS,
            witness=fmt_key(bad[0]) if bad else None, residual=fmt_vec(bad[1], H.ring) if bad else None)
    return rep


# --------------------------------------------------------------------------
# Phi_1: comodule maps N -> M (x)_tau C versus F_tau Hom(N, M)


def phi1(F: Vec, C) -> Vec:
    """(1 (x) counit) F, with F stored over keys (n, (m, c))."""
    out: Vec = {}
    for (n, (m, c)), a in F.items():
        e = C.counit(c)
        if e:
            out[(n, m)] = out.get((n, m), 0) + a * e
    return {k: v for k, v in out.items() if v}


def phi1_inverse(f: Vec, N, ring) -> Vec:
    """(f (x) 1) Delta_N."""
    by_src: Dict = {}
    for (n, m), c in f.items():
        by_src.setdefault(n, {})[m] = c
    out: Vec = {}
    for n in N.basis():
        for (n0, c), a in N.coaction(n).items():
            for m, b in by_src.get(n0, {}).items():
                add_term(ring, out, (n, (m, c)), a * b)
    return out


def _comodule_map_defect(F: Vec, N, T: TwistedComodule, ring) -> Vec:
    """Keys ('co', n, x, c) for (F (x) 1)Delta_N - Delta_T F and ('d', n, x) for D F - (-1)^{|F|} F d_N."""
    fdeg = _map_degree(F)
    out: Vec = {}
    for n in N.basis():
        Fn = _apply_map(ring, F, {n: 1})
        for (n0, c), a in N.coaction(n).items():
            for x, b in _apply_map(ring, F, {n0: 1}).items():
                add_term(ring, out, ("co", n, x, c), a * b)
        for x, a in Fn.items():
            for (y, c), b in T.coaction(x).items():
                add_term(ring, out, ("co", n, y, c), -a * b)
            for y, b in T.codiff(x).items():
                add_term(ring, out, ("d", n, y), a * b)
        for y, a in N.codiff(n).items():
            for x, b in _apply_map(ring, F, {y: 1}).items():
                add_term(ring, out, ("d", n, x), -_sign(fdeg) * a * b)
    return out


def comodule_map_cocycles(N, T: TwistedComodule, degree: int = 0) -> List[Vec]:
    """Degree-``degree`` comodule maps N -> T commuting with differentials."""
    ring = T.ring
    unknowns = [(n, x) for n in N.basis() for x in T.basis() if deg(x) - deg(n) == degree]
    cols = {u: _comodule_map_defect({u: 1}, N, T, ring) for u in unknowns}
    return kernel(ring, cols)


# --------------------------------------------------------------------------
# Phi_2: module maps N (x)_tau A -> M versus F_tau Hom(N, M)


def phi2(G: Vec, L: CdgModule, unit) -> Vec:
    """n -> G(n (x) 1); G is stored over keys (e, m) with e a basis element of L."""
    out: Vec = {}
    for (e, m), c in G.items():
        n, a = L.pairs[e]
        if a == unit:
            out[(n, m)] = c
    return out


def phi2_inverse(f: Vec, L: CdgModule, M: CdgModule) -> Vec:
    """n (x) a -> f(n) a."""
    ring = M.ring
    by_src: Dict = {}
    for (n, m), c in f.items():
        by_src.setdefault(n, {})[m] = c
    out: Vec = {}
    for e, (n, a) in L.pairs.items():
        for m, c in by_src.get(n, {}).items():
            for x, b in M.action.get((m, a), {}).items():
                add_term(ring, out, (e, x), c * b)
    return out


def _module_map_defect(G: Vec, L: CdgModule, M: CdgModule) -> Vec:
    """Keys ('lin', e, b, x) for G(e b) - G(e) b and ('d', e, x) for d_M G - (-1)^{|G|} G d_L."""
    ring = M.ring
    gdeg = _map_degree(G)
    out: Vec = {}
    for e in L.basis():
        Ge = _apply_map(ring, G, {e: 1})
        for b in L.algebra.basis():
            for x, c in _apply_map(ring, G, L.action.get((e, b), {})).items():
                add_term(ring, out, ("lin", e, b, x), c)
            for x, c in M.act(Ge, {b: 1}).items():
                add_term(ring, out, ("lin", e, b, x), -c)
        for x, c in M.d(Ge).items():
            add_term(ring, out, ("d", e, x), c)
        for x, c in _apply_map(ring, G, L.d({e: 1})).items():
            add_term(ring, out, ("d", e, x), -_sign(gdeg) * c)
    return out


def module_map_cocycles(L: CdgModule, M: CdgModule, degree: int = 0) -> List[Vec]:
    ring = M.ring
    unknowns = [(e, m) for e in L.basis() for m in M.basis() if deg(m) - deg(e) == degree]
    cols = {u: _module_map_defect({u: 1}, L, M) for u in unknowns}
    return kernel(ring, cols)


# --------------------------------------------------------------------------


class AdjunctionTriple:
    """A comodule N over C, a cdg module M over A and a twisting cochain tau."""

    def __init__(self, N, M: CdgModule, tau: TwistingCochain, name: str = "triple"):
        self.N, self.M, self.tau, self.name = N, M, tau, name
        self.ring = tau.ring
        self.hom = HomComplex(N, M, tau)
        self.comodule = TwistedComodule(M, tau)
        self.module = cobar_comodule(N, tau, M.algebra)
        self.module.pairs = {e: p for p, e in self.module.element.items()}


def _shape(N, M, tau):
    return [getattr(N, "name", "N"), M.name, tau.name]


def check_adjunction_isos(T: AdjunctionTriple, degree: int = 0) -> Report:
    """Both isomorphisms on every basis map, plus agreement of the three
    models of degree-``degree`` cocycles."""
    ring = T.ring
    H = T.hom
    C = T.tau.source
    names = _shape(T.N, T.M, T.tau)
    rep = Report()

    fails = {}
    for key in H.basis():
        f = {key: 1}
        F = phi1_inverse(f, T.N, ring)
        if phi1(F, C) != f:
            fails.setdefault("adjunction-phi1-roundtrip", key)
        defect = _comodule_map_defect(F, T.N, T.comodule, ring)
        co = {k: v for k, v in defect.items() if k[0] == "co"}
        if co:
            fails.setdefault("adjunction-phi1-comodule-map", key)
        dF = {k: v for k, v in defect.items() if k[0] == "d"}
        expect = {("d", n, x): c for (n, x), c in phi1_inverse(H.d_key(key), T.N, ring).items()}
        if add_into(ring, dict(dF), expect, -1):
            fails.setdefault("adjunction-phi1-chain", key)

        G = phi2_inverse(f, T.module, T.M)
        if phi2(G, T.module, T.M.algebra.unit) != f:
            fails.setdefault("adjunction-phi2-roundtrip", key)
        defect = _module_map_defect(G, T.module, T.M)
        lin = {k: v for k, v in defect.items() if k[0] == "lin"}
        if lin:
            fails.setdefault("adjunction-phi2-module-map", key)
        dG = {k: v for k, v in defect.items() if k[0] == "d"}
        expect = {("d", e, x): c for (e, x), c in phi2_inverse(H.d_key(key), T.module, T.M).items()}
        if add_into(ring, dict(dG), expect, -1):
            fails.setdefault("adjunction-phi2-chain", key)
    for check in ("adjunction-phi1-roundtrip", "adjunction-phi1-comodule-map", "adjunction-phi1-chain",
                  "adjunction-phi2-roundtrip", "adjunction-phi2-module-map", "adjunction-phi2-chain"):
        key = fails.get(check)
        rep.add(check, names, "all", FAIL if key is not None else PASS, witness=fmt_key(key) if key is not None else None)

    ranks = three_model_ranks(T, degree)
    bad = len(set(ranks.values())) != 1
    rep.add("adjunction-cocycle-ranks", names, degree, FAIL if bad else PASS,
            detail=", ".join(f"{k}={v}" for k, v in ranks.items()))

    # every comodule-map cocycle is recovered from its image under Phi_1
    back = None
    for F in comodule_map_cocycles(T.N, T.comodule, degree):
        if phi1_inverse(phi1(F, C), T.N, ring) != {k: v for k, v in F.items() if v}:
            back = F
            break
    rep.add("adjunction-phi1-inverse-on-cocycles", names, degree, FAIL if back else PASS)
    back = None
    for G in module_map_cocycles(T.module, T.M, degree):
        if phi2_inverse(phi2(G, T.module, T.M.algebra.unit), T.module, T.M) != G:
            back = G
            break
    rep.add("adjunction-phi2-inverse-on-cocycles", names, degree, FAIL if back else PASS)
    return rep


def three_model_ranks(T: AdjunctionTriple, degree: int = 0) -> Dict[str, int]:
    return {
        "hom": len(T.hom.cocycles(degree)),
        "comodule": len(comodule_map_cocycles(T.N, T.comodule, degree)),
        "module": len(module_map_cocycles(T.module, T.M, degree)),
    }
