"""Canonical JSON files for every domain type.

Output is UTF-8 JSON with sorted keys, no insignificant whitespace and a
trailing newline, so parsing a canonical file and writing it back gives the
same bytes. Labels serialize as nested arrays; wherever a label is an object
key it is written in its compact serialized form. Decoding errors name the
offending field with a ``$.a.b[3]`` style path.
"""

from __future__ import annotations

import json
from pathlib import Path

from .bicomodule import Bicomodule, TypedPoly
from .coalgebra import Coalgebra, total_space
from .comonoid import Comonoid, PshInternalCategory, cat_to_comonoid, internal_category, psh_internal_validate
from .errors import PolycalcError
from .fincat import FinCat, fincat_validate, make_fincat
from .labels import dumps, from_json, label_key, loads, to_json
from .poly import Poly, PolyMor
from .presheaf import Presheaf, PshMor, make_presheaf, make_pshmor, presheaf_validate, pshmor_validate
from .psh_poly import PshPoly, PshPolyMor, make_pshpolymor
from .sets import FinFn, FinSet, pullback


class SchemaError(PolycalcError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def canonical_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


# ---- helpers -----------------------------------------------------------------------------


def _field(obj, key: str, path: str):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing field")
    return obj[key]


def _label(obj, path):
    try:
        return from_json(obj, path)
    except PolycalcError as e:
        raise SchemaError(path, str(e).split(": ", 1)[-1]) from None


def _key(s: str, path: str):
    try:
        return loads(s, path)
    except PolycalcError:
        raise SchemaError(path, f"key {s!r} is not a serialized label") from None


def _labels(obj, path) -> list:
    if not isinstance(obj, list):
        raise SchemaError(path, "expected an array of labels")
    return [_label(x, f"{path}[{i}]") for i, x in enumerate(obj)]


def _mapping(obj, path) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    return {_key(k, f"{path}[{k}]"): _label(v, f"{path}[{k}]") for k, v in obj.items()}


def _guard(path, fn, *args):
    try:
        return fn(*args)
    except SchemaError:
        raise
    except PolycalcError as e:
        raise SchemaError(path, str(e)) from None


def _map_json(m: dict, order) -> dict:
    return {dumps(x): to_json(m[x]) for x in order}


# ---- finite sets, functions, categories, presheaves ------------------------------------


def enc_finset(A: FinSet) -> dict:
    return {"elements": [to_json(x) for x in A]}


def dec_finset(obj, path="$") -> FinSet:
    return _guard(path, FinSet, _labels(_field(obj, "elements", path), f"{path}.elements"))


def enc_finfn(f: FinFn) -> dict:
    return {"dom": enc_finset(f.dom), "cod": enc_finset(f.cod), "map": _map_json(f.map, f.dom)}


def dec_finfn(obj, path="$") -> FinFn:
    dom = dec_finset(_field(obj, "dom", path), f"{path}.dom")
    cod = dec_finset(_field(obj, "cod", path), f"{path}.cod")
    m = _mapping(_field(obj, "map", path), f"{path}.map")
    return _guard(f"{path}.map", FinFn, dom, cod, m)


def enc_fincat(C: FinCat) -> dict:
    pairs = sorted(C.compose.items(), key=lambda kv: label_key(kv[0]))
    return {
        "objects": [to_json(x) for x in C.objects],
        "morphisms": [to_json(m) for m in C.morphisms],
        "src": _map_json(C.src.map, C.morphisms),
        "tgt": _map_json(C.tgt.map, C.morphisms),
        "id": _map_json(C.identity.map, C.objects),
        "compose": [[to_json(g), to_json(f), to_json(h)] for (g, f), h in pairs],
    }


def dec_fincat(obj, path="$", validate: bool = True) -> FinCat:
    objects = _labels(_field(obj, "objects", path), f"{path}.objects")
    morphisms = _labels(_field(obj, "morphisms", path), f"{path}.morphisms")
    src = _mapping(_field(obj, "src", path), f"{path}.src")
    tgt = _mapping(_field(obj, "tgt", path), f"{path}.tgt")
    ids = _mapping(_field(obj, "id", path), f"{path}.id")
    rows = _field(obj, "compose", path)
    if not isinstance(rows, list):
        raise SchemaError(f"{path}.compose", "expected an array of [g, f, g∘f] triples")
    comp = {}
    for i, row in enumerate(rows):
        p = f"{path}.compose[{i}]"
        if not isinstance(row, list) or len(row) != 3:
            raise SchemaError(p, "expected a [g, f, g∘f] triple")
        g, f, h = (_label(x, f"{p}[{j}]") for j, x in enumerate(row))
        if (g, f) in comp:
            raise SchemaError(p, f"duplicate composite for {dumps((g, f))}")
        comp[(g, f)] = h
    for m in morphisms:
        for name, table in (("src", src), ("tgt", tgt)):
            if m not in table:
                raise SchemaError(f"{path}.{name}[{dumps(m)}]", "missing entry")
    C = _guard(path, make_fincat, objects, {m: (src[m], tgt[m]) for m in morphisms}, ids, comp)
    if not validate:
        return C
    rep = fincat_validate(C)
    if not rep.ok:
        law, w = rep.violations[0]
        where = f"{path}.compose" if "compos" in law or "associativity" in law else path
        raise SchemaError(where, f"{law} at {dumps(w) if w is not None else '-'}")
    return C


def enc_presheaf(X: Presheaf) -> dict:
    c = X.base
    return {
        "base": enc_fincat(c),
        "at": {dumps(a): [to_json(x) for x in X.at[a]] for a in c.objects},
        "action": {dumps(u): _map_json(X.action[u].map, X.action[u].dom) for u in c.morphisms},
    }


def dec_presheaf(obj, path="$", validate: bool = True) -> Presheaf:
    base = dec_fincat(_field(obj, "base", path), f"{path}.base")
    at_raw = _field(obj, "at", path)
    if not isinstance(at_raw, dict):
        raise SchemaError(f"{path}.at", "expected an object")
    at = {_key(k, f"{path}.at"): _labels(v, f"{path}.at[{k}]") for k, v in at_raw.items()}
    act_raw = _field(obj, "action", path)
    if not isinstance(act_raw, dict):
        raise SchemaError(f"{path}.action", "expected an object")
    action = {_key(k, f"{path}.action"): _mapping(v, f"{path}.action[{k}]") for k, v in act_raw.items()}
    for a in base.objects:
        if a not in at:
            raise SchemaError(f"{path}.at[{dumps(a)}]", "missing component")
    X = _guard(path, make_presheaf, base, at, action)
    if not validate:
        return X
    rep = presheaf_validate(X)
    if not rep.ok:
        law, w = rep.violations[0]
        raise SchemaError(f"{path}.action", f"{law} at {dumps(w)}")
    return X


def _enc_components(m: PshMor) -> dict:
    return {dumps(a): _map_json(m.components[a].map, m.components[a].dom) for a in m.dom.base.objects}


def _dec_components(obj, dom: Presheaf, cod: Presheaf, path) -> PshMor:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    comps = {_key(k, path): _mapping(v, f"{path}[{k}]") for k, v in obj.items()}
    for a in dom.base.objects:
        if a not in comps:
            raise SchemaError(f"{path}[{dumps(a)}]", "missing component")
    return _guard(path, make_pshmor, dom, cod, lambda a, x: comps[a][x])


def enc_pshmor(m: PshMor) -> dict:
    return {"dom": enc_presheaf(m.dom), "cod": enc_presheaf(m.cod), "components": _enc_components(m)}


def dec_pshmor(obj, path="$") -> PshMor:
    dom = dec_presheaf(_field(obj, "dom", path), f"{path}.dom")
    cod = dec_presheaf(_field(obj, "cod", path), f"{path}.cod")
    if dom.base != cod.base:
        raise SchemaError(f"{path}.cod.base", "differs from the domain base")
    m = _dec_components(_field(obj, "components", path), dom, cod, f"{path}.components")
    rep = pshmor_validate(m)
    if not rep.ok:
        law, w = rep.violations[0]
        raise SchemaError(f"{path}.components", f"{law} at {dumps(w)}")
    return m


# ---- polynomials and their maps -------------------------------------------------------------


def enc_poly(p) -> dict:
    if isinstance(p, PshPoly):
        return {
            "base": "presheaf",
            "positions": enc_presheaf(p.positions),
            "total": enc_presheaf(p.total),
            "proj": _enc_components(p.proj),
        }
    return {
        "base": "finset",
        "positions": [{"id": to_json(I), "dirs": [to_json(d) for d in p.dirs[I]]} for I in p.positions],
    }


def dec_poly(obj, path="$"):
    kind = _field(obj, "base", path)
    if kind == "presheaf":
        P = dec_presheaf(_field(obj, "positions", path), f"{path}.positions")
        T = dec_presheaf(_field(obj, "total", path), f"{path}.total")
        return PshPoly(_dec_components(_field(obj, "proj", path), T, P, f"{path}.proj"))
    if kind != "finset":
        raise SchemaError(f"{path}.base", f"unknown base {kind!r}")
    rows = _field(obj, "positions", path)
    if not isinstance(rows, list):
        raise SchemaError(f"{path}.positions", "expected an array")
    dirs = {}
    for i, row in enumerate(rows):
        p = f"{path}.positions[{i}]"
        I = _label(_field(row, "id", p), f"{p}.id")
        if I in dirs:
            raise SchemaError(f"{p}.id", f"duplicate position {dumps(I)}")
        dirs[I] = _guard(f"{p}.dirs", FinSet, _labels(_field(row, "dirs", p), f"{p}.dirs"))
    return Poly(dirs)


def enc_polymor(m) -> dict:
    if isinstance(m, PshPolyMor):
        return {
            "dom": enc_poly(m.dom),
            "cod": enc_poly(m.cod),
            "phi1": _enc_components(m.phi1),
            "phiSharp": _enc_components(m.phisharp),
        }
    return {
        "dom": enc_poly(m.dom),
        "cod": enc_poly(m.cod),
        "phi1": _map_json(m.on_pos, m.dom.positions),
        "phiSharp": {
            dumps(I): _map_json(m.on_dir[I], m.cod.dirs[m.on_pos[I]]) for I in m.dom.positions
        },
    }


def dec_polymor(obj, path="$"):
    dom = dec_poly(_field(obj, "dom", path), f"{path}.dom")
    cod = dec_poly(_field(obj, "cod", path), f"{path}.cod")
    if isinstance(dom, PshPoly) != isinstance(cod, PshPoly):
        raise SchemaError(path, "domain and codomain live over different bases")
    if isinstance(dom, PshPoly):
        phi1 = _dec_components(_field(obj, "phi1", path), dom.positions, cod.positions, f"{path}.phi1")
        raw = _field(obj, "phiSharp", path)
        comps = {_key(k, f"{path}.phiSharp"): _mapping(v, f"{path}.phiSharp[{k}]") for k, v in raw.items()}
        return _guard(
            path,
            make_pshpolymor,
            dom,
            cod,
            lambda a, x: phi1(a, x),
            lambda a, x, e: comps[a][(x, e)],
        )
    on_pos = _mapping(_field(obj, "phi1", path), f"{path}.phi1")
    raw = _field(obj, "phiSharp", path)
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}.phiSharp", "expected an object")
    on_dir = {_key(k, f"{path}.phiSharp"): _mapping(v, f"{path}.phiSharp[{k}]") for k, v in raw.items()}
    for I in dom.positions:
        if I not in on_pos:
            raise SchemaError(f"{path}.phi1[{dumps(I)}]", "missing entry")
        if I not in on_dir:
            raise SchemaError(f"{path}.phiSharp[{dumps(I)}]", "missing entry")
    return _guard(path, PolyMor, dom, cod, on_pos, on_dir)


# ---- comonoids and internal categories -------------------------------------------------


def enc_comonoid(c: Comonoid) -> dict:
    return {"carrier": enc_poly(c.carrier), "counit": enc_polymor(c.counit), "comult": enc_polymor(c.comult)}


def dec_comonoid(obj, path="$") -> Comonoid:
    """Accepts a comonoid, a finite category or an internal category."""
    if isinstance(obj, dict) and "objects" in obj:
        return _guard(path, cat_to_comonoid, dec_fincat(obj, path))
    if isinstance(obj, dict) and obj.get("kind") == "internal-category":
        return _guard(path, cat_to_comonoid, dec_internal(obj, path))
    carrier = dec_poly(_field(obj, "carrier", path), f"{path}.carrier")
    counit = dec_polymor(_field(obj, "counit", path), f"{path}.counit")
    comult = dec_polymor(_field(obj, "comult", path), f"{path}.comult")
    if counit.dom != carrier:
        raise SchemaError(f"{path}.counit.dom", "does not match the carrier")
    if comult.dom != carrier:
        raise SchemaError(f"{path}.comult.dom", "does not match the carrier")
    return Comonoid(carrier, counit, comult)


def enc_internal(C: PshInternalCategory) -> dict:
    return {
        "kind": "internal-category",
        "C0": enc_presheaf(C.C0),
        "C1": enc_presheaf(C.C1),
        "s": _enc_components(C.s),
        "t": _enc_components(C.t),
        "i": _enc_components(C.i),
        "k": _enc_components(C.k),
    }


def dec_internal(obj, path="$") -> PshInternalCategory:
    C0 = dec_presheaf(_field(obj, "C0", path), f"{path}.C0")
    C1 = dec_presheaf(_field(obj, "C1", path), f"{path}.C1")
    tables = {}
    for name in ("s", "t", "i", "k"):
        raw = _field(obj, name, path)
        if not isinstance(raw, dict):
            raise SchemaError(f"{path}.{name}", "expected an object")
        tables[name] = {_key(k, f"{path}.{name}"): _mapping(v, f"{path}.{name}[{k}]") for k, v in raw.items()}

    def look(name, a, x):
        try:
            return tables[name][a][x]
        except KeyError:
            raise SchemaError(f"{path}.{name}[{dumps(a)}][{dumps(x)}]", "missing entry") from None

    C = _guard(
        path,
        internal_category,
        C0,
        C1,
        lambda a, m: look("s", a, m),
        lambda a, m: look("t", a, m),
        lambda a, x: look("i", a, x),
        lambda a, f, g: look("k", a, (f, g)),
    )
    rep = psh_internal_validate(C)
    if not rep.ok:
        law, w = rep.violations[0]
        raise SchemaError(path, f"{law} at {w!r}")
    return C


# ---- coalgebras, bicomodules, typed polynomials -----------------------------------------


def enc_coalgebra(X: Coalgebra) -> dict:
    return {
        "c": enc_comonoid(X.comonoid),
        "S": enc_finset(X.S),
        "kappa1": enc_finfn(X.kappa1),
        "kappaSharp": enc_finfn(X.kappa_sharp),
    }


def _ref(obj, path, base_dir):
    if isinstance(obj, str):
        target = (Path(base_dir) / obj) if base_dir is not None else Path(obj)
        try:
            raw = json.loads(target.read_text(encoding="utf-8"))
        except OSError as e:
            raise SchemaError(path, f"cannot read referenced file {obj!r}: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise SchemaError(path, f"referenced file {obj!r} is not JSON: {e.msg}") from None
        return dec_comonoid(raw, f"{path}<{obj}>")
    return dec_comonoid(obj, path)


def dec_coalgebra(obj, path="$", base_dir=None) -> Coalgebra:
    c = _ref(_field(obj, "c", path), f"{path}.c", base_dir)
    S = dec_finset(_field(obj, "S", path), f"{path}.S")
    k1 = dec_finfn(_field(obj, "kappa1", path), f"{path}.kappa1")
    ks = dec_finfn(_field(obj, "kappaSharp", path), f"{path}.kappaSharp")
    if k1.dom != S or k1.cod != c.carrier.positions:
        raise SchemaError(f"{path}.kappa1", "must go from S to the comonoid's positions")
    pb, _, _ = pullback(k1, total_space(c))
    if ks.dom != pb or ks.cod != S:
        raise SchemaError(f"{path}.kappaSharp", "must go from S ×_C C_* to S")
    return Coalgebra(c, S, k1, ks)


def enc_bicomodule(b: Bicomodule) -> dict:
    return {
        "m": enc_poly(b.m),
        "left": enc_polymor(b.left),
        "right": enc_polymor(b.right),
        "c": enc_comonoid(b.c),
        "d": enc_comonoid(b.d),
    }


def dec_bicomodule(obj, path="$", base_dir=None) -> Bicomodule:
    m = dec_poly(_field(obj, "m", path), f"{path}.m")
    left = dec_polymor(_field(obj, "left", path), f"{path}.left")
    right = dec_polymor(_field(obj, "right", path), f"{path}.right")
    c = _ref(_field(obj, "c", path), f"{path}.c", base_dir)
    d = _ref(_field(obj, "d", path), f"{path}.d", base_dir)
    for name, mor in (("left", left), ("right", right)):
        if mor.dom != m:
            raise SchemaError(f"{path}.{name}.dom", "does not match m")
    return Bicomodule(m, c, d, left, right)


def enc_typed(t: TypedPoly) -> dict:
    return {"m": enc_poly(t.m), "src": enc_finfn(t.src), "tgt": enc_finfn(t.tgt)}


def dec_typed(obj, path="$") -> TypedPoly:
    m = dec_poly(_field(obj, "m", path), f"{path}.m")
    src = dec_finfn(_field(obj, "src", path), f"{path}.src")
    tgt = dec_finfn(_field(obj, "tgt", path), f"{path}.tgt")
    tot = FinSet((x, e) for x in m.positions for e in m.dirs[x])
    if src.dom != tot:
        raise SchemaError(f"{path}.src.dom", "must be the pairs (position, direction) of m")
    if tgt.dom != m.positions:
        raise SchemaError(f"{path}.tgt.dom", "must be the positions of m")
    return TypedPoly(m, src, tgt)


# ---- dispatch by shape -------------------------------------------------------------------

ENCODERS = [
    (FinSet, enc_finset),
    (FinFn, enc_finfn),
    (FinCat, enc_fincat),
    (Presheaf, enc_presheaf),
    (PshMor, enc_pshmor),
    (Poly, enc_poly),
    (PshPoly, enc_poly),
    (PolyMor, enc_polymor),
    (PshPolyMor, enc_polymor),
    (Comonoid, enc_comonoid),
    (PshInternalCategory, enc_internal),
    (Coalgebra, enc_coalgebra),
    (Bicomodule, enc_bicomodule),
    (TypedPoly, enc_typed),
]


def encode(x) -> dict:
    for cls, fn in ENCODERS:
        if isinstance(x, cls):
            return fn(x)
    raise TypeError(f"no file format for {type(x).__name__}")


def detect_kind(obj) -> str:
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected a JSON object")
    keys = set(obj)
    if obj.get("kind") == "internal-category":
        return "internal-category"
    if "kappa1" in keys:
        return "coalgebra"
    if {"left", "right"} <= keys:
        return "bicomodule"
    if "carrier" in keys:
        return "comonoid"
    if "components" in keys:
        return "pshmor"
    if "phi1" in keys:
        return "polymor"
    if {"m", "src", "tgt"} <= keys:
        return "typedpoly"
    if "compose" in keys:
        return "fincat"
    if {"base", "at", "action"} <= keys:
        return "presheaf"
    if "positions" in keys:
        return "poly"
    if "map" in keys:
        return "finfn"
    if "elements" in keys:
        return "finset"
    raise SchemaError("$", "unrecognised file shape")


def decode(obj, kind: str | None = None, base_dir=None):
    kind = kind or detect_kind(obj)
    table = {
        "finset": dec_finset,
        "finfn": dec_finfn,
        "fincat": dec_fincat,
        "presheaf": dec_presheaf,
        "pshmor": dec_pshmor,
        "poly": dec_poly,
        "polymor": dec_polymor,
        "comonoid": dec_comonoid,
        "internal-category": dec_internal,
        "typedpoly": dec_typed,
    }
    if kind == "coalgebra":
        return dec_coalgebra(obj, "$", base_dir)
    if kind == "bicomodule":
        return dec_bicomodule(obj, "$", base_dir)
    if kind not in table:
        raise SchemaError("$", f"unknown kind {kind!r}")
    return table[kind](obj, "$")


def read_file(path, kind: str | None = None):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise PolycalcError(f"cannot read {path}: {e.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("$", f"not valid JSON ({e.msg} at line {e.lineno})") from None
    return decode(obj, kind, p.parent)


def dumps_value(x) -> str:
    return canonical_text(encode(x))


def write_file(path, x) -> None:
    Path(path).write_text(dumps_value(x), encoding="utf-8")


def io_roundtrip(path) -> str:
    """Parse a file and return its canonical serialization."""
    return dumps_value(read_file(path))
