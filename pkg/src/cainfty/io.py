"""Reading and writing structure files (JSON, format tag "cainfty/1").

Layout::

    {"format": "cainfty/1",
     "ring": {"kind": "Q"} | {"kind": "Zmod", "p": 101} | {"kind": "Z"},
     "objects": {"<name>": {"kind": "<kind>", ...}, ...}}

Basis elements are written [degree, index] and coefficients as decimal
integers or "a/b" strings.  An operation of arity n is a list of entries
{"in": [[d, i], ...n items], "out": [[d, i, "c"], ...]}; coproducts and
coactions use {"in": [[d, i]], "out": [[[d, i], [d, i], "c"], ...]}.

Kinds and their fields:

- ainfty-algebra: module, arity, ops {"k": entries}, optional unit
- cdg-algebra: module, curvature (out list), differential, product, optional unit
- dg-coalgebra: module, one, coproduct, codifferential, optional codiff_window
- ainfty-module: over, module, arity, ops {"i": entries} (first input in the module)
- cdg-module: over, module, differential, action
- ainfty-morphism: source, target, components {"i": entries}
- module-morphism: source, target, components {"i": entries}
- twisting-cochain: source (coalgebra), target (algebra), table (arity-1 entries)
"""

from __future__ import annotations

import json
from typing import Any, Dict, List, Optional, Tuple

from .ainfty import AInftyMorphism, CdgAlgebra, CurvedAInftyAlgebra
from .bar import TwistingCochain, cochain_from_table
from .coalgebra import DgCoalgebra, validate_coalgebra
from .graded import BasisElement, GradedModule
from .modules import CdgModule, CurvedAInftyModule, ModuleMorphism
from .ring import Ring, RingError

FORMAT = "cainfty/1"
KINDS = ("ainfty-algebra", "cdg-algebra", "dg-coalgebra", "ainfty-module", "cdg-module",
         "ainfty-morphism", "module-morphism", "twisting-cochain")
ALGEBRA_KINDS = ("ainfty-algebra", "cdg-algebra")
MODULE_KINDS = ("ainfty-module", "cdg-module")


class ParseError(ValueError):
    """A structure file could not be read; the message names the field."""


def _fail(path: str, msg: str):
    raise ParseError(f"{path}: {msg}")


def _get(d: dict, key: str, path: str):
    if not isinstance(d, dict):
        _fail(path, "expected an object")
    if key not in d:
        _fail(path, f"missing field {key!r}")
    return d[key]


def _basis(x, path: str) -> BasisElement:
    if (not isinstance(x, list) or len(x) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in x)):
        _fail(path, f"expected [degree, index], got {x!r}")
    return BasisElement(x[0], x[1])


def _coef(ring: Ring, x, path: str):
    try:
        return ring.parse(x)
    except RingError as exc:
        _fail(path, str(exc))


def _module(d, path: str) -> GradedModule:
    degs = _get(d, "degrees", path)
    if not isinstance(degs, dict):
        _fail(path + ".degrees", "expected an object")
    ranks = {}
    for k, v in degs.items():
        try:
            dk = int(k)
        except ValueError:
            _fail(f"{path}.degrees", f"degree {k!r} is not an integer")
        if not isinstance(v, int) or v < 0:
            _fail(f"{path}.degrees.{k}", "rank must be a nonnegative integer")
        ranks[dk] = v
    return GradedModule.of(ranks)


def _in_module(M: GradedModule, e: BasisElement, path: str) -> BasisElement:
    if not M.contains(e):
        _fail(path, f"{list(e)} is not a basis element")
    return e


def _outs(ring: Ring, out, M: GradedModule, path: str) -> Dict[BasisElement, Any]:
    if not isinstance(out, list):
        _fail(path, "expected a list")
    vec: Dict = {}
    for j, o in enumerate(out):
        p = f"{path}[{j}]"
        if not isinstance(o, list) or len(o) != 3:
            _fail(p, "expected [degree, index, coefficient]")
        e = _in_module(M, _basis(o[:2], p), p)
        c = _coef(ring, o[2], p)
        vec[e] = ring.reduce(vec.get(e, 0) + c)
    return {k: v for k, v in vec.items() if v}


def _pair_outs(ring: Ring, out, M: GradedModule, N: GradedModule, path: str) -> Dict[tuple, Any]:
    if not isinstance(out, list):
        _fail(path, "expected a list")
    vec: Dict = {}
    for j, o in enumerate(out):
        p = f"{path}[{j}]"
        if not isinstance(o, list) or len(o) != 3:
            _fail(p, "expected [[d, i], [d, i], coefficient]")
        a = _in_module(M, _basis(o[0], p), p)
        b = _in_module(N, _basis(o[1], p), p)
        vec[(a, b)] = ring.reduce(vec.get((a, b), 0) + _coef(ring, o[2], p))
    return {k: v for k, v in vec.items() if v}


def _entries(ring: Ring, entries, in_modules: List[GradedModule], out_module: GradedModule, path: str,
             pair: Optional[Tuple[GradedModule, GradedModule]] = None) -> Dict[tuple, Dict]:
    if not isinstance(entries, list):
        _fail(path, "expected a list of entries")
    table: Dict[tuple, Dict] = {}
    for j, ent in enumerate(entries):
        p = f"{path}[{j}]"
        ins = _get(ent, "in", p)
        if not isinstance(ins, list) or len(ins) != len(in_modules):
            _fail(p + ".in", f"expected {len(in_modules)} inputs")
        key = tuple(_in_module(M, _basis(x, f"{p}.in[{k}]"), f"{p}.in[{k}]") for k, (x, M) in enumerate(zip(ins, in_modules)))
        if key in table:
            _fail(p, f"duplicate input {ins!r}")
        out = _get(ent, "out", p)
        if pair is not None:
            table[key] = _pair_outs(ring, out, pair[0], pair[1], p + ".out")
        else:
            table[key] = _outs(ring, out, out_module, p + ".out")
    return table


def _arity_tables(ring, d, field_name, in_fn, out_module, path) -> Dict[int, Dict[tuple, Dict]]:
    raw = _get(d, field_name, path)
    if not isinstance(raw, dict):
        _fail(f"{path}.{field_name}", "expected an object keyed by arity")
    out = {}
    for k, entries in raw.items():
        try:
            n = int(k)
        except ValueError:
            _fail(f"{path}.{field_name}", f"arity {k!r} is not an integer")
        out[n] = _entries(ring, entries, in_fn(n), out_module, f"{path}.{field_name}.{k}")
    return out


def _wrap(path: str, fn, *args):
    try:
        return fn(*args)
    except ParseError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        _fail(path, str(exc))


def _resolve(objs, raw, name, kinds, path):
    if not isinstance(name, str) or name not in raw:
        _fail(path, f"unknown object {name!r}")
    if raw[name].get("kind") not in kinds:
        _fail(path, f"object {name!r} has kind {raw[name].get('kind')!r}, expected one of {', '.join(kinds)}")
    return objs(name)


def parse(text: str) -> Tuple[Ring, Dict[str, Any]]:
    """Parse a structure file into (ring, {name: object})."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        _fail("$", "expected an object")
    if doc.get("format") != FORMAT:
        _fail("format", f"expected {FORMAT!r}, got {doc.get('format')!r}")
    try:
        ring = Ring.from_descriptor(_get(doc, "ring", "$"))
    except (RingError, ValueError, TypeError) as exc:
        _fail("ring", str(exc))
    raw = _get(doc, "objects", "$")
    if not isinstance(raw, dict):
        _fail("objects", "expected an object")
    for name, d in raw.items():
        kind = _get(d, "kind", f"objects.{name}")
        if kind not in KINDS:
            _fail(f"objects.{name}.kind", f"unknown kind {kind!r}")
    built: Dict[str, Any] = {}
    stack: List[str] = []

    def obj(name):
        if name in built:
            return built[name]
        if name in stack:
            _fail(f"objects.{name}", "circular reference")
        stack.append(name)
        built[name] = _build(ring, name, raw[name], raw, obj)
        stack.pop()
        return built[name]

    for name in raw:
        obj(name)
    return ring, built


def _build(ring: Ring, name: str, d: dict, raw: dict, obj) -> Any:
    path = f"objects.{name}"
    kind = d["kind"]
    if kind == "ainfty-algebra":
        M = _module(_get(d, "module", path), path + ".module")
        arity = _get(d, "arity", path)
        ops = _arity_tables(ring, d, "ops", lambda n: [M] * n, M, path)
        unit = _in_module(M, _basis(d["unit"], path + ".unit"), path + ".unit") if "unit" in d else None
        return _wrap(path, CurvedAInftyAlgebra, ring, M, ops, arity, unit, name)
    if kind == "cdg-algebra":
        M = _module(_get(d, "module", path), path + ".module")
        curv = _outs(ring, d.get("curvature", []), M, path + ".curvature")
        diff = _entries(ring, d.get("differential", []), [M], M, path + ".differential")
        prod = _entries(ring, d.get("product", []), [M, M], M, path + ".product")
        unit = _in_module(M, _basis(d["unit"], path + ".unit"), path + ".unit") if "unit" in d else None
        return _wrap(path, CdgAlgebra, ring, M, curv, {k[0]: v for k, v in diff.items()}, prod, unit, name)
    if kind == "dg-coalgebra":
        M = _module(_get(d, "module", path), path + ".module")
        one = _in_module(M, _basis(_get(d, "one", path), path + ".one"), path + ".one")
        cop = _entries(ring, _get(d, "coproduct", path), [M], M, path + ".coproduct", pair=(M, M))
        cod = _entries(ring, d.get("codifferential", []), [M], M, path + ".codifferential")
        window = None
        if "codiff_window" in d:
            window = frozenset(_in_module(M, _basis(x, path + ".codiff_window"), path + ".codiff_window")
                               for x in d["codiff_window"])
        C = _wrap(path, DgCoalgebra, ring, M, one, {k[0]: v for k, v in cop.items()},
                  {k[0]: v for k, v in cod.items()}, name, None, window)
        return _wrap(path, validate_coalgebra, C)
    if kind in MODULE_KINDS:
        A = _resolve(obj, raw, _get(d, "over", path), ALGEBRA_KINDS, path + ".over")
        M = _module(_get(d, "module", path), path + ".module")
        if kind == "cdg-module":
            if not isinstance(A, CdgAlgebra):
                _fail(path + ".over", "a cdg module needs a cdg algebra")
            diff = _entries(ring, d.get("differential", []), [M], M, path + ".differential")
            act = _entries(ring, d.get("action", []), [M, A.module], M, path + ".action")
            return _wrap(path, CdgModule, A, M, {k[0]: v for k, v in diff.items()}, act, name)
        Ae = A.embed() if isinstance(A, CdgAlgebra) else A
        ops = _arity_tables(ring, d, "ops", lambda n: [M] + [Ae.module] * (n - 1), M, path)
        return _wrap(path, CurvedAInftyModule, Ae, M, ops, _get(d, "arity", path), name)
    if kind == "ainfty-morphism":
        S = _resolve(obj, raw, _get(d, "source", path), ALGEBRA_KINDS, path + ".source")
        T = _resolve(obj, raw, _get(d, "target", path), ALGEBRA_KINDS, path + ".target")
        S = S.embed() if isinstance(S, CdgAlgebra) else S
        T = T.embed() if isinstance(T, CdgAlgebra) else T
        comps = _arity_tables(ring, d, "components", lambda n: [S.module] * n, T.module, path)
        return _wrap(path, AInftyMorphism, S, T, comps, name)
    if kind == "module-morphism":
        from .modules import as_ainfty_module
        S = as_ainfty_module(_resolve(obj, raw, _get(d, "source", path), MODULE_KINDS, path + ".source"))
        T = as_ainfty_module(_resolve(obj, raw, _get(d, "target", path), MODULE_KINDS, path + ".target"))
        comps = _arity_tables(ring, d, "components", lambda n: [S.module] + [S.algebra.module] * (n - 1), T.module, path)
        return _wrap(path, ModuleMorphism, S, T, comps, name)
    if kind == "twisting-cochain":
        C = _resolve(obj, raw, _get(d, "source", path), ("dg-coalgebra",), path + ".source")
        A = _resolve(obj, raw, _get(d, "target", path), ALGEBRA_KINDS, path + ".target")
        Ae = A.embed() if isinstance(A, CdgAlgebra) else A
        table = _entries(ring, _get(d, "table", path), [C.module], Ae.module, path + ".table")
        for (c,), v in table.items():
            for a in v:
                if a.degree != c.degree + 1:
                    _fail(path + ".table", f"tau({list(c)}) must have degree {c.degree + 1}")
        tau = cochain_from_table(C, Ae, {k[0]: v for k, v in table.items()}, name=name)
        tau.algebra_object = A
        return tau
    raise AssertionError(kind)


# --------------------------------------------------------------------------
# serialization


def _e(e: BasisElement) -> list:
    return [e.degree, e.index]


def _out_list(ring, vec) -> list:
    return [[k.degree, k.index, ring.format(c)] for k, c in sorted(vec.items()) if ring.reduce(c)]


def _pair_list(ring, vec) -> list:
    return [[_e(a), _e(b), ring.format(c)] for (a, b), c in sorted(vec.items()) if ring.reduce(c)]


def _entry_list(ring, table, pair=False) -> list:
    out = []
    for key in sorted(table):
        vec = table[key]
        outs = _pair_list(ring, vec) if pair else _out_list(ring, vec)
        if outs:
            out.append({"in": [_e(k) for k in key], "out": outs})
    return out


def _mod(M: GradedModule) -> dict:
    return {"degrees": {str(d): r for d, r in sorted(M.as_dict().items())}}


def _ref(x, names: Dict[int, str]) -> str:
    # embedded cdg structures are fresh objects carrying the original name
    if id(x) in names:
        return names[id(x)]
    if getattr(x, "name", None) in names.values():
        return x.name
    raise TypeError(f"referenced object {getattr(x, 'name', x)!r} is not being serialized")


def dump_object(ring: Ring, obj, names: Dict[int, str]) -> dict:
    """Encode one object; ``names`` maps id(referenced object) to its name."""
    if isinstance(obj, CdgAlgebra):
        d = {"kind": "cdg-algebra", "module": _mod(obj.module), "curvature": _out_list(ring, obj.curvature),
             "differential": _entry_list(ring, {(k,): v for k, v in obj.differential.items()}),
             "product": _entry_list(ring, obj.product)}
        if obj.unit is not None:
            d["unit"] = _e(obj.unit)
        return d
    if isinstance(obj, CurvedAInftyAlgebra):
        d = {"kind": "ainfty-algebra", "module": _mod(obj.module), "arity": obj.arity,
             "ops": {str(k): _entry_list(ring, t) for k, t in sorted(obj.ops.items())}}
        if obj.unit is not None:
            d["unit"] = _e(obj.unit)
        return d
    if isinstance(obj, DgCoalgebra):
        d = {"kind": "dg-coalgebra", "module": _mod(obj.module), "one": _e(obj.one),
             "coproduct": _entry_list(ring, {(k,): v for k, v in obj.coproduct_table.items()}, pair=True),
             "codifferential": _entry_list(ring, {(k,): v for k, v in obj.codiff_table.items()})}
        if obj.d_window is not None:
            d["codiff_window"] = [_e(e) for e in sorted(obj.d_window)]
        return d
    if isinstance(obj, CdgModule):
        return {"kind": "cdg-module", "over": _ref(obj.algebra, names), "module": _mod(obj.module),
                "differential": _entry_list(ring, {(k,): v for k, v in obj.differential.items()}),
                "action": _entry_list(ring, obj.action)}
    if isinstance(obj, TwistingCochain):
        C = obj.source
        return {"kind": "twisting-cochain", "source": _ref(C, names),
                "target": _ref(getattr(obj, "algebra_object", obj.target), names),
                "table": _entry_list(ring, {(c,): obj(c) for c in C.basis()})}
    if isinstance(obj, CurvedAInftyModule):
        return {"kind": "ainfty-module", "over": _ref(obj.algebra, names), "module": _mod(obj.module),
                "arity": obj.arity, "ops": {str(k): _entry_list(ring, t) for k, t in sorted(obj.ops.items())}}
    if isinstance(obj, (AInftyMorphism, ModuleMorphism)):
        if isinstance(obj, ModuleMorphism) and obj.shift:
            raise TypeError("homotopies have no file representation")
        kind = "ainfty-morphism" if isinstance(obj, AInftyMorphism) else "module-morphism"
        return {"kind": kind, "source": _ref(obj.source, names), "target": _ref(obj.target, names),
                "components": {str(k): _entry_list(ring, t) for k, t in sorted(obj.components.items())}}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def serialize(ring: Ring, objects: Dict[str, Any]) -> str:
    names = {id(o): n for n, o in objects.items()}
    doc = {"format": FORMAT, "ring": ring.descriptor(),
           "objects": {n: dump_object(ring, o, names) for n, o in objects.items()}}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def load(path: str) -> Tuple[Ring, Dict[str, Any]]:
    import sys
    if path == "-":
        return parse(sys.stdin.read())
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return parse(text)
