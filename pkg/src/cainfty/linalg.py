"""Exact sparse linear algebra over a field.

Vectors are dicts ``{key: coefficient}`` with zero entries absent.  Keys are
any hashable, totally ordered objects (basis elements, tensors, words).
"""

from __future__ import annotations

from typing import Dict, Hashable, Iterable, List, Optional, Tuple

from .ring import Ring, RingError

Vec = Dict[Hashable, object]


def add_into(ring: Ring, acc: Vec, vec: Vec, scale=1) -> Vec:
    """acc += scale * vec, in place."""
    for k, c in vec.items():
        v = ring.reduce(acc.get(k, 0) + scale * c)
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


def add_term(ring: Ring, acc: Vec, key, coef) -> None:
    v = ring.reduce(acc.get(key, 0) + coef)
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def scaled(ring: Ring, vec: Vec, scale) -> Vec:
    out = {}
    for k, c in vec.items():
        v = ring.reduce(c * scale)
        if v:
            out[k] = v
    return out


def combine(ring: Ring, terms: Iterable[Tuple[object, Vec]]) -> Vec:
    out: Vec = {}
    for coef, vec in terms:
        add_into(ring, out, vec, coef)
    return out


def sub(ring: Ring, a: Vec, b: Vec) -> Vec:
    out = dict(a)
    return add_into(ring, out, b, -1)


def _require_field(ring: Ring):
    if not ring.is_field:
        raise RingError(f"exact elimination needs a field, got {ring}")


class Echelon:
    """Incrementally maintained reduced echelon basis of a span.

    Each stored row carries the combination of inserted vectors producing it,
    so kernels fall out of elimination.
    """

    def __init__(self, ring: Ring, track: bool = False):
        _require_field(ring)
        self.ring = ring
        self.track = track
        self.rows: Dict[Hashable, Vec] = {}  # pivot key -> row with pivot coefficient 1
        self.combos: Dict[Hashable, Vec] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Vec, combo: Optional[Vec] = None) -> Tuple[Vec, Optional[Vec]]:
        ring = self.ring
        v = dict(vec)
        combo = dict(combo) if combo is not None else None
        for piv in sorted(set(v) & set(self.rows)):
            c = v.get(piv)
            if not c:
                continue
            add_into(ring, v, self.rows[piv], -c)
            if combo is not None:
                add_into(ring, combo, self.combos[piv], -c)
        # pivots introduced by subtraction are reduced until stable
        while True:
            hits = [k for k in v if k in self.rows]
            if not hits:
                break
            for piv in sorted(hits):
                c = v.get(piv)
                if not c:
                    continue
                add_into(ring, v, self.rows[piv], -c)
                if combo is not None:
                    add_into(ring, combo, self.combos[piv], -c)
        return v, combo

    def add(self, vec: Vec, label=None) -> Optional[Vec]:
        """Insert ``vec``.  Returns None if independent, else (when tracking)
        the kernel combination expressing the dependency."""
        ring = self.ring
        combo = {label: 1} if self.track else None
        v, combo = self.reduce(vec, combo)
        if not v:
            return combo if self.track else {}
        piv = min(v)
        inv = ring.inv(v[piv])
        row = {k: ring.reduce(c * inv) for k, c in v.items()}
        if combo is not None:
            combo = {k: ring.reduce(c * inv) for k, c in combo.items()}
        for other_piv, other in self.rows.items():
            c = other.get(piv)
            if c:
                add_into(ring, other, row, -c)
                if combo is not None:
                    add_into(ring, self.combos[other_piv], combo, -c)
        self.rows[piv] = row
        if combo is not None:
            self.combos[piv] = combo
        return None

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)[0]


def rank(ring: Ring, vectors: Iterable[Vec]) -> int:
    e = Echelon(ring)
    for v in vectors:
        e.add(v)
    return len(e)


def kernel(ring: Ring, columns: Dict[Hashable, Vec]) -> List[Vec]:
    """Basis of the kernel of the linear map sending basis key j to columns[j]."""
    e = Echelon(ring, track=True)
    out = []
    for j in sorted(columns):
        dep = e.add(columns[j], label=j)
        if dep is not None:
            out.append(dep)
    return out


def image_basis(ring: Ring, columns: Dict[Hashable, Vec]) -> Echelon:
    e = Echelon(ring)
    for j in sorted(columns):
        e.add(columns[j])
    return e


def inverse(ring: Ring, columns: Dict[Hashable, Vec]) -> Dict[Hashable, Vec]:
    """Inverse of an invertible map given by columns (domain keys -> target vectors)."""
    e = Echelon(ring, track=True)
    for j in sorted(columns):
        dep = e.add(columns[j], label=j)
        if dep is not None:
            raise RingError("map is not invertible")
    # row with pivot t equals combination of columns => inverse sends t to combo
    targets = set()
    for v in columns.values():
        targets.update(v)
    if set(e.rows) != targets or len(e.rows) != len(columns):
        raise RingError("map is not invertible")
    return {t: dict(e.combos[t]) for t in e.rows}
