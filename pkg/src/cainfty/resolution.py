"""Bar resolution of a cdg module and the unit homotopy for augmented algebras.

Notation: R(M) = M (x)_tau BA and L(N) = N (x)_tau A, with tau = tau_A.
Keys are (m, x) on R(M), (m, x, a) on LR(M) and (m, x, a, y) on RLR(M),
where x, y are bar words and a a basis element of A.
"""

from __future__ import annotations

from typing import List, Optional

from .ainfty import AlgebraError, CurvedAInftyAlgebra
from .bar import BarCoalgebra, bar, universal_twisting_cochain
from .graded import deg, s
from .linalg import Vec, add_into, add_term
from .modules import CdgModule, TwistedComodule
from .report import FAIL, PASS, SKIPPED, Report, WindowExceeded, fmt_key, fmt_vec


SIGN_RULES = ("koszul", "literal")


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


class AugmentationIdeal:
    """The kernel of the augmentation, viewed as a non-unital algebra.

    Basis keys are those of A other than the unit; the operations are
    restrictions, so they must never produce a unit component.
    """

    def __init__(self, A: CurvedAInftyAlgebra):
        if A.unit is None:
            raise AlgebraError("augmentation ideal needs a declared unit")
        if A.curvature:
            raise AlgebraError("an augmented algebra has zero curvature")
        self.A = A
        self.ring = A.ring
        self.unit = None
        self.name = f"{A.name}+"
        self.arity = A.arity
        self.curvature: Vec = {}
        keys = self.basis()
        for k in range(1, A.arity + 1):
            for t, v in A.ops.get(k, {}).items():
                if A.unit not in t and A.unit in v:
                    raise AlgebraError(f"m_{k}{t!r} leaves the augmentation ideal")
        self._keys = set(keys)

    def basis(self):
        return [e for e in self.A.basis() if e != self.A.unit]

    def degree(self, e):
        return deg(e)

    def op(self, k, inputs):
        if k == 0:
            return {}
        return self.A.op(k, inputs)

    def is_nonzero(self, k):
        return k > 0 and self.A.is_nonzero(k)

    def op_tuple_fn(self, k):
        return self.A.op_tuple_fn(k)


class Resolution:
    """R(M), LR(M) and RLR(M) for a unital cdg module M, with delta_M, eta_{RM}
    and the contracting homotopy."""

    def __init__(self, M: CdgModule, W: int, B: Optional[BarCoalgebra] = None, sign_rule: str = "koszul"):
        if sign_rule not in SIGN_RULES:
            raise ValueError(f"unknown sign rule {sign_rule!r}")
        A = M.algebra
        self.sign_rule = sign_rule
        if A.unit is None:
            raise AlgebraError("the algebra must be unital")
        self.M = M
        self.A = A
        self.ring = A.ring
        self.B = B if B is not None else bar(A.embed(), W)
        self.W = self.B.weight_cap
        self.tau = universal_twisting_cochain(self.B)
        self.R = TwistedComodule(M, self.tau, name=f"R({M.name})")

    # ----- L R M

    def d_lr(self, key) -> Vec:
        m, x, a = key
        ring, A = self.ring, self.A
        out: Vec = {}
        for (m2, x2), c in self.R.codiff((m, x)).items():
            add_term(ring, out, (m2, x2, a), c)
        sign = _sign(deg(m) + deg(x))
        for b, c in A.differential.get(a, {}).items():
            add_term(ring, out, (m, x, b), c * sign)
        for j in range(len(x)):
            x1, x2 = x[:j], x[j:]
            s0 = _sign(deg(m) + deg(x1))
            for b, tc in self.tau(x2).items():
                for r, pc in A.product.get((b, a), {}).items():
                    add_term(ring, out, (m, x1, r), s0 * tc * pc)
        return out

    def act_lr(self, key, b) -> Vec:
        m, x, a = key
        return {(m, x, r): c for r, c in self.A.product.get((a, b), {}).items()}

    # ----- R L R M

    def d_rlr(self, key) -> Vec:
        m, x, a, y = key
        ring = self.ring
        out: Vec = {}
        for (m2, x2, a2), c in self.d_lr((m, x, a)).items():
            add_term(ring, out, (m2, x2, a2, y), c)
        sx = _sign(deg((m, x, a)))
        for y2, c in self.B.codiff(y).items():
            add_term(ring, out, (m, x, a, y2), c * sx)
        for j in range(1, len(y) + 1):
            y1, y2 = y[:j], y[j:]
            for b, tc in self.tau(y1).items():
                for (m2, x2, a2), c in self.act_lr((m, x, a), b).items():
                    add_term(ring, out, (m2, x2, a2, y2), -c * tc * sx)
        return out

    def delta(self, key) -> Vec:
        """delta_M: LR(M) -> M, m (x) x (x) a -> counit(x) m a."""
        m, x, a = key
        if x:
            return {}
        return dict(self.M.action.get((m, a), {}))

    def R_delta(self, key) -> Vec:
        m, x, a, y = key
        return {(n, y): c for n, c in self.delta((m, x, a)).items()}

    def eta_R(self, key) -> Vec:
        """eta_{RM}: R(M) -> RLR(M), m (x) y -> sum m (x) y' (x) 1 (x) y''."""
        m, y = key
        return {(m, y[:j], self.A.unit, y[j:]): 1 for j in range(len(y) + 1)}

    def homotopy(self, key) -> Vec:
        """m (x) x (x) a (x) y -> sum eps m (x) (x, sa, y') (x) 1 (x) y''.

        eps = (-1)^{|m|+|x|} under the "koszul" rule (s moved past m (x) x)
        and (-1)^{|m|+1} under the "literal" rule, which does not contract.
        """
        m, x, a, y = key
        sign = _sign(deg(m) + (deg(x) if self.sign_rule == "koszul" else 1))
        out: Vec = {}
        for j in range(len(y) + 1):
            word = x + (s(a),) + y[:j]
            if len(word) > self.W:
                raise WindowExceeded(f"homotopy output of weight {len(word)} exceeds {self.W}")
            out[(m, word, self.A.unit, y[j:])] = sign
        return out

    def basis(self, max_weight: int) -> List[tuple]:
        words = self.B.basis(max_weight)
        return [(m, x, a, y) for m in self.M.basis() for x in words for a in self.A.basis()
                for y in words if len(x) + len(y) <= max_weight]

    def identity_residual(self, key) -> Vec:
        """(d g + g d - 1 + eta_{RM} R(delta_M)) at a basis key."""
        ring = self.ring
        out: Vec = {}
        for k, c in self.homotopy(key).items():
            add_into(ring, out, self.d_rlr(k), c)
        for k, c in self.d_rlr(key).items():
            add_into(ring, out, self.homotopy(k), c)
        add_term(ring, out, key, -1)
        for k, c in self.R_delta(key).items():
            add_into(ring, out, self.eta_R(k), c)
        return out


def bar_resolution_homotopy(M: CdgModule, W: int, max_weight: Optional[int] = None,
                            sign_rule: str = "koszul") -> Report:
    """Verify d g + g d = 1 - eta_{RM} R(delta_M) on RLR(M), words of total weight <= W - 2."""
    res = Resolution(M, W, sign_rule=sign_rule)
    top = W - 2 if max_weight is None else max_weight
    rep = Report()
    names = [M.name, M.algebra.name]
    bad = None
    count = 0
    for key in res.basis(top):
        count += 1
        v = res.identity_residual(key)
        if v:
            bad = (key, v)
            break
    rep.add("bar-resolution-homotopy", names, f"weight<={top}", FAIL if bad else PASS,
            witness=fmt_key(bad[0]) if bad else None, residual=fmt_vec(bad[1], res.ring) if bad else None,
            detail=f"{count} basis elements")
    rep.add("bar-resolution-homotopy", names, f"weight>{top}", SKIPPED,
            detail=f"outputs of the homotopy leave the weight-{W} window")
    return rep


# --------------------------------------------------------------------------
# the unit of the adjunction for augmented algebras


class UnitCokernel:
    """LR(M) = M (x)_tau B(A+) (x)_tau A for an augmented dg algebra A and the
    homotopy H on the cokernel of m -> m (x) () (x) 1."""

    def __init__(self, M: CdgModule, W: int):
        A = M.algebra
        Ae = A.embed()
        self.ideal = AugmentationIdeal(Ae)
        B = bar(self.ideal, W)
        self.res = Resolution(M, W, B=B)
        self.M, self.A, self.W, self.ring = M, A, W, A.ring

    def in_image(self, key) -> bool:
        m, x, a = key
        return not x and a == self.A.unit

    def project(self, vec: Vec) -> Vec:
        return {k: c for k, c in vec.items() if not self.in_image(k)}

    def H(self, key) -> Vec:
        m, x, a = key
        if a == self.A.unit:
            return {}
        word = x + (s(a),)
        if len(word) > self.W:
            raise WindowExceeded(f"H output of weight {len(word)} exceeds {self.W}")
        return {(m, word, self.A.unit): _sign(deg(m) + deg(x))}

    def basis(self, max_weight: int) -> List[tuple]:
        words = self.res.B.basis(max_weight)
        return [(m, x, a) for m in self.M.basis() for x in words for a in self.A.basis()]

    def residual(self, key) -> Vec:
        """pi (d H + H d - 1) at a basis key of LR(M)."""
        ring = self.ring
        out: Vec = {}
        for k, c in self.H(key).items():
            add_into(ring, out, self.res.d_lr(k), c)
        for k, c in self.res.d_lr(key).items():
            add_into(ring, out, self.H(k), c)
        add_term(ring, out, key, -1)
        return self.project(out)


def unit_homotopy(M: CdgModule, W: int, max_weight: Optional[int] = None) -> Report:
    """Verify that H contracts the cokernel of (eta_M)_1 on words of weight <= W - 2."""
    U = UnitCokernel(M, W)
    top = W - 2 if max_weight is None else max_weight
    rep = Report()
    names = [M.name, M.algebra.name]
    bad = None
    unit_keys = 0
    count = 0
    for key in U.basis(top):
        count += 1
        if key[2] == U.A.unit:
            unit_keys += 1
        v = U.residual(key)
        if v:
            bad = (key, v)
            break
    rep.add("unit-homotopy", names, f"weight<={top}", FAIL if bad else PASS,
            witness=fmt_key(bad[0]) if bad else None, residual=fmt_vec(bad[1], U.ring) if bad else None,
            detail=f"{count} basis elements, {unit_keys} with a = 1")
    # H must vanish on the image of (eta_M)_1 to descend to the cokernel
    nonzero = [m for m in M.basis() if U.H((m, (), U.A.unit))]
    rep.add("unit-homotopy-descends", names, "a=1", FAIL if nonzero else PASS,
            witness=fmt_key(nonzero[0]) if nonzero else None)
    return rep
