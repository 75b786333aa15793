"""Command-line front end: one subcommand per library operation.

Every result is written as canonical JSON to stdout (or ``--output``).
Exit status is 0 on success, 1 on a domain error or a failed check and 2 on
a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import bicomodule as bm
from . import coalgebra as co
from . import comonoid as cm
from . import limits
from . import poly as P
from . import presheaf as psh
from . import sets
from . import structures as st
from .errors import PolycalcError, default_budget
from .fincat import Report, fincat_validate
from .harness import HARNESS_BUDGET, SUITES, HarnessConfig, jsonable, write_report
from .io import SchemaError, canonical_text, dec_fincat, dec_presheaf, decode, detect_kind, encode, io_roundtrip
from .labels import dumps, from_json, loads
from .presheaf import PshMor
from .sets import FinFn, FinSet


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Command:
    handler: Callable[[argparse.Namespace], object]
    ops: tuple
    help: str
    configure: Callable[[argparse.ArgumentParser], None]


# ---- loading -----------------------------------------------------------------------------


def read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise PolycalcError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise SchemaError("$", f"{path} is not valid JSON ({e.msg} at line {e.lineno})") from None


def load(path: str, *kinds: str):
    """Read a file and insist on one of ``kinds``."""
    obj = read_json(path)
    kind = detect_kind(obj)
    if kind == "fincat" and "comonoid" in kinds:
        kind = "comonoid"
    if kind not in kinds:
        raise SchemaError("$", f"{path} holds a {kind}, expected {' or '.join(kinds)}")
    return decode(obj, kind, Path(path).parent)


def _set_poly(path: str) -> P.Poly:
    p = load(path, "poly")
    if not isinstance(p, P.Poly):
        raise PolycalcError(f"{path}: this operation needs a polynomial over finite sets")
    return p


def _set_mor(path: str) -> P.PolyMor:
    m = load(path, "polymor")
    if not isinstance(m, P.PolyMor):
        raise PolycalcError(f"{path}: this operation needs a polynomial map over finite sets")
    return m


def report_json(r: Report) -> dict:
    return {
        "name": r.name,
        "ok": r.ok,
        "violations": [{"law": law, "witness": jsonable(w)} for law, w in r.violations],
    }


class Checked:
    """A check result; a failed check exits with status 1."""

    def __init__(self, payload: dict, ok: bool):
        self.payload = payload
        self.ok = ok


def _checked(r: Report) -> Checked:
    return Checked(report_json(r), r.ok)


# ---- base categories ---------------------------------------------------------------------


def cmd_pullback(a):
    apex, p1, p2 = sets.pullback(load(a.f, "finfn"), load(a.g, "finfn"))
    return {"apex": encode(apex), "proj1": encode(p1), "proj2": encode(p2)}


def cmd_pi(a):
    f = load(a.f, "finfn", "pshmor")
    g = load(a.g, "finfn", "pshmor")
    if isinstance(f, FinFn) and isinstance(g, FinFn):
        return sets.pi_finset(f, g, a.budget)
    if isinstance(f, PshMor) and isinstance(g, PshMor):
        return psh.presheaf_pi(f, g, a.budget)
    raise PolycalcError("both maps must be functions or both presheaf maps")


def cmd_distrib(a):
    d = sets.distributivity_pullback(load(a.f, "finfn"), load(a.g, "finfn"), a.budget)
    return {
        "pi": encode(d.pi),
        "apex": encode(d.apex),
        "h": encode(d.h),
        "toB": encode(d.to_b),
        "counit": encode(d.counit),
    }


def cmd_validate(a):
    obj = read_json(a.file)
    kind = detect_kind(obj)
    if kind == "fincat":
        return _checked(fincat_validate(dec_fincat(obj, validate=False)))
    if kind == "presheaf":
        return _checked(psh.presheaf_validate(dec_presheaf(obj, validate=False)))
    raise SchemaError("$", f"{a.file} holds a {kind}, expected fincat or presheaf")


# ---- polynomials -------------------------------------------------------------------------


def cmd_identity(a):
    return P.identity_y()


def cmd_mor_compose(a):
    return P.mor_compose(_set_mor(a.phi), _set_mor(a.psi))


def cmd_classify(a):
    c = P.classify(_set_mor(a.phi))
    return {"cartesian": c.cartesian, "vertical": c.vertical}


def cmd_factorize(a):
    v, c = P.vert_cart_factorize(_set_mor(a.phi))
    return {"vertical": encode(v), "cartesian": encode(c)}


def cmd_compose(a):
    return P.compose_tri(load(a.p, "poly"), load(a.q, "poly"), a.budget)


def cmd_tensor(a):
    return P.tensor(load(a.p, "poly"), load(a.q, "poly"))


def cmd_eval(a):
    f = load(a.functor, "poly", "polymor")
    x = load(a.arg, "finset", "finfn")
    if isinstance(f, P.Poly) and isinstance(x, FinSet):
        return P.eval_functor(f, x, a.budget)
    if isinstance(f, P.Poly) and isinstance(x, FinFn):
        return P.eval_functor_mor(f, x, a.budget)
    if isinstance(f, P.PolyMor) and isinstance(x, FinSet):
        return P.eval_nat(f, x, a.budget)
    raise PolycalcError("eval takes a polynomial with a set or function, or a polynomial map with a set")


def cmd_strength(a):
    return P.strength(_set_poly(a.p), load(a.A, "finset"), load(a.B, "finset"), a.budget)


def cmd_scalar(a):
    return P.scalar(load(a.A, "finset"), _set_poly(a.q))


def cmd_pstar(a):
    ps, proj = P.p_star(_set_poly(a.p))
    return {"poly": encode(ps), "proj": encode(proj)}


def _load_diagram(path: str):
    obj = read_json(path)
    if not isinstance(obj, dict) or not isinstance(obj.get("nodes"), dict) or not isinstance(obj.get("edges"), list):
        raise SchemaError("$", "a diagram file has an object 'nodes' and an array 'edges'")
    nodes = {loads(k, "$.nodes"): decode(v, "poly") for k, v in obj["nodes"].items()}
    edges = []
    for i, e in enumerate(obj["edges"]):
        if not isinstance(e, list) or len(e) != 3:
            raise SchemaError(f"$.edges[{i}]", "expected [source, target, polymor]")
        edges.append((from_json(e[0]), from_json(e[1]), decode(e[2], "polymor")))
    return nodes, edges


def cmd_limit(a):
    nodes, edges = _load_diagram(a.diagram)
    L, cone = limits.cartesian_limit(nodes, edges, a.budget)
    return {"limit": encode(L), "cone": {dumps(n): encode(m) for n, m in cone.items()}}


def cmd_iso(a):
    m = P.iso_check(_set_poly(a.p), _set_poly(a.q))
    return None if m is None else m


def cmd_homs(a):
    p, q = _set_poly(a.p), _set_poly(a.q)
    if a.count_only:
        return P.hom_count(p, q)
    return [encode(m) for m in P.hom_enumerate(p, q, a.budget)]


# ---- closures and coclosures -------------------------------------------------------------


def cmd_interchange(a):
    return st.interchange(*(_set_poly(x) for x in (a.p1, a.p2, a.q1, a.q2)), a.budget)


def cmd_closure(a):
    return st.closure(_set_poly(a.p), _set_poly(a.q), a.budget)


def cmd_closure_eval(a):
    return st.closure_eval(_set_poly(a.p), _set_poly(a.q), a.budget)


def cmd_closure_pair(a):
    return st.closure_pair(_set_poly(a.p), _set_poly(a.q), a.budget)


def cmd_closure_transpose(a):
    m, x, y = _set_mor(a.map), _set_poly(a.first), _set_poly(a.second)
    if a.inverse:
        return st.closure_untranspose(m, x, y)
    return st.closure_transpose(m, x, y, a.budget)


def cmd_coclosure(a):
    return st.right_coclosure(_set_poly(a.p), _set_poly(a.q), a.budget)


def cmd_coclosure_transpose(a):
    m, x, y = _set_mor(a.map), _set_poly(a.first), _set_poly(a.second)
    if a.inverse:
        return st.rc_untranspose(m, x, y, a.budget)
    return st.rc_transpose(m, x, y, a.budget)


def cmd_frown(a):
    return st.frown(_set_poly(a.p), load(a.f, "finfn"), _set_poly(a.q))


def cmd_frown_transpose(a):
    if a.inverse:
        if len(a.files) != 4:
            raise UsageError("frown-transpose --inverse takes f phi p q")
        f, phi, p, q = a.files
        return st.frown_untranspose(load(f, "finfn"), _set_mor(phi), _set_poly(p), _set_poly(q), a.budget)
    if len(a.files) != 3:
        raise UsageError("frown-transpose takes psi q r")
    psi, q, r = a.files
    f, phi = st.frown_transpose(_set_mor(psi), _set_poly(q), _set_poly(r), a.budget)
    return {"index": encode(f), "map": encode(phi)}


def cmd_closure_lax(a):
    return st.closure_tri_lax(*(_set_poly(x) for x in (a.p1, a.q1, a.p2, a.q2)), a.budget)


def cmd_coclosure_tensor(a):
    return st.coclosure_tensor_map(*(_set_poly(x) for x in (a.p1, a.q1, a.p2, a.q2)), a.budget)


def cmd_frown_tensor(a):
    return st.frown_tensor_iso(
        _set_poly(a.p1), load(a.f1, "finfn"), _set_poly(a.q1), _set_poly(a.p2), load(a.f2, "finfn"), _set_poly(a.q2)
    )


# ---- comonoids ---------------------------------------------------------------------------


def cmd_comonoid_check(a):
    return _checked(cm.comonoid_check(load(a.c, "comonoid"), a.budget))


def cmd_cat2com(a):
    return cm.cat_to_comonoid(load(a.category, "fincat", "internal-category"))


def cmd_com2cat(a):
    return cm.comonoid_to_cat(load(a.c, "comonoid"), a.budget)


def cmd_cofunctor_check(a):
    r = cm.cofunctor_check(_set_mor(a.phi), load(a.c, "comonoid"), load(a.d, "comonoid"), a.budget)
    payload = {
        "ok": r.ok,
        "agree": r.agree,
        "homomorphism": report_json(r.homomorphism),
        "cofunctor": report_json(r.cofunctor),
    }
    return Checked(payload, r.ok)


def cmd_comonoid(a):
    if a.construction == "discrete":
        return cm.discrete_comonoid(load(a.file, "finset"))
    if a.construction == "pstar":
        return cm.pstar_comonoid(_set_poly(a.file), a.budget)
    return cm.selfclosure_comonoid(_set_poly(a.file), a.budget)


# ---- coalgebras and bicomodules -----------------------------------------------------------


def cmd_coalg_check(a):
    return _checked(co.coalg_check(load(a.X, "coalgebra")))


def cmd_opfib(a):
    if a.inverse:
        obj = read_json(a.file)
        for key in ("category", "projection", "c"):
            if not isinstance(obj, dict) or key not in obj:
                raise SchemaError(f"$.{key}", "missing field")
        d = decode(obj["category"], "comonoid")
        phi = decode(obj["projection"], "polymor")
        c = decode(obj["c"], "comonoid")
        return co.opfib_to_coalg(d, phi, c)
    X = load(a.file, "coalgebra")
    E, phi = co.coalg_to_opfib(X)
    return {"category": encode(E), "projection": encode(phi), "c": encode(X.comonoid)}


def cmd_bicomod_check(a):
    b = load(a.b, "bicomodule")
    if a.side == "left":
        return _checked(bm.left_comodule_check(b.m, b.c, b.left, a.budget))
    if a.side == "right":
        return _checked(bm.right_comodule_check(b.m, b.d, b.right, a.budget))
    return _checked(bm.bicomodule_check(b, a.budget))


def cmd_typed_bicomod(a):
    x = load(a.file, "typedpoly", "bicomodule")
    if isinstance(x, bm.TypedPoly):
        return bm.bicomod_from_typed(x)
    return bm.typed_from_bicomod(x)


def cmd_typed_compose(a):
    return bm.typed_compose(load(a.p, "typedpoly"), load(a.q, "typedpoly"), a.budget)


def cmd_bicomod_compose(a):
    b1, b2 = load(a.m, "bicomodule"), load(a.n, "bicomodule")
    compose = bm.bicomod_compose_general if a.general else bm.bicomod_compose
    b, _ = compose(b1, b2, a.budget)
    return b


def cmd_migrate(a):
    b = load(a.m, "bicomodule")
    X = load(a.X, "coalgebra")
    if a.hom is None:
        return bm.migrate(b, X, a.budget)
    if a.target is None:
        raise UsageError("--hom needs --target")
    return bm.migrate_hom(b, load(a.hom, "finfn"), X, load(a.target, "coalgebra"), a.budget)


# ---- plumbing ----------------------------------------------------------------------------


def cmd_roundtrip(a):
    return RawText(io_roundtrip(a.file))


class RawText(str):
    pass


def cmd_laws(a):
    budget = a.budget if a.budget is not None else _env_budget(HARNESS_BUDGET)
    suites = tuple(s for s in a.suites.split(",") if s) if a.suites else SUITES
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suites: {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    cfg = HarnessConfig(a.seed, a.max_pos, a.max_dir, budget, suites, a.inject_mutant)
    out = a.output_stream
    foot = write_report(cfg, out)
    return Checked(None, foot["summary"]["fail"] == 0)


def _env_budget(fallback: int) -> int:
    return default_budget() if "POLYCALC_BUDGET" in os.environ else fallback


# ---- argument parsing --------------------------------------------------------------------


def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _natural(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _seed(s: str) -> int:
    v = _natural(s)
    if v >= 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _files(*names):
    def configure(p):
        for n in names:
            p.add_argument(n)

    return configure


def _with_inverse(*names):
    def configure(p):
        for n in names:
            p.add_argument(n)
        p.add_argument("--inverse", action="store_true", help="apply the inverse bijection")

    return configure


def _homs_args(p):
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--count-only", action="store_true")


def _frown_transpose_args(p):
    p.add_argument("files", nargs="+", help="psi q r, or f phi p q with --inverse")
    p.add_argument("--inverse", action="store_true")


def _comonoid_args(p):
    p.add_argument("construction", choices=["discrete", "pstar", "selfclosure"])
    p.add_argument("file", help="a finite set for discrete, a polynomial otherwise")


def _bicomod_check_args(p):
    p.add_argument("b")
    p.add_argument("--side", choices=["left", "right"], help="check one coaction only")


def _bicomod_compose_args(p):
    p.add_argument("m")
    p.add_argument("n")
    p.add_argument("--general", action="store_true", help="use the equalizer construction")


def _migrate_args(p):
    p.add_argument("m")
    p.add_argument("X")
    p.add_argument("--hom", help="a coalgebra map X → Y to transport")
    p.add_argument("--target", help="the codomain coalgebra Y of --hom")


def _laws_args(p):
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--max-pos", type=_natural, default=3)
    p.add_argument("--max-dir", type=_natural, default=3)
    p.add_argument("--suites", help=f"comma-separated subset of {','.join(SUITES)}")
    p.add_argument("--inject-mutant", action="store_true", help="add a broken comonoid fixture")


COMMANDS: dict[str, Command] = {
    "pullback": Command(cmd_pullback, (sets.pullback,), "pullback of two functions", _files("f", "g")),
    "pi": Command(cmd_pi, (sets.pi_finset, psh.presheaf_pi), "dependent product Π_f g", _files("f", "g")),
    "distrib": Command(
        cmd_distrib, (sets.distributivity_pullback,), "distributivity pullback around (f, g)", _files("f", "g")
    ),
    "validate": Command(
        cmd_validate, (fincat_validate, psh.presheaf_validate), "validate a category or presheaf", _files("file")
    ),
    "identity": Command(cmd_identity, (P.identity_y,), "the polynomial y", _files()),
    "mor-compose": Command(cmd_mor_compose, (P.mor_compose,), "composite of p → q → r", _files("phi", "psi")),
    "classify": Command(cmd_classify, (P.classify,), "cartesian / vertical classification", _files("phi")),
    "factorize": Command(
        cmd_factorize, (P.vert_cart_factorize,), "vertical-cartesian factorization", _files("phi")
    ),
    "compose": Command(cmd_compose, (P.compose_tri,), "composition product p ◁ q", _files("p", "q")),
    "tensor": Command(cmd_tensor, (P.tensor,), "Dirichlet product p ⊗ q", _files("p", "q")),
    "eval": Command(
        cmd_eval,
        (P.eval_functor, P.eval_functor_mor, P.eval_nat),
        "apply a polynomial or map to a set or function",
        _files("functor", "arg"),
    ),
    "strength": Command(cmd_strength, (P.strength,), "strength A × p(B) → p(A × B)", _files("p", "A", "B")),
    "scalar": Command(cmd_scalar, (P.scalar,), "scalar multiple A·q", _files("A", "q")),
    "pstar": Command(cmd_pstar, (P.p_star,), "p_* and its projection to p", _files("p")),
    "limit": Command(
        cmd_limit, (limits.cartesian_limit,), "limit of a connected diagram of cartesian maps", _files("diagram")
    ),
    "iso": Command(cmd_iso, (P.iso_check,), "an isomorphism p → q, or null", _files("p", "q")),
    "homs": Command(cmd_homs, (P.hom_enumerate,), "all maps p → q", _homs_args),
    "interchange": Command(
        cmd_interchange, (st.interchange,), "(p1◁p2)⊗(q1◁q2) → (p1⊗q1)◁(p2⊗q2)", _files("p1", "p2", "q1", "q2")
    ),
    "closure": Command(cmd_closure, (st.closure,), "internal hom [p, q]", _files("p", "q")),
    "closure-eval": Command(cmd_closure_eval, (st.closure_eval,), "evaluation p ⊗ [p,q] → q", _files("p", "q")),
    "closure-pair": Command(cmd_closure_pair, (st.closure_pair,), "unit q → [p, p ⊗ q]", _files("p", "q")),
    "closure-transpose": Command(
        cmd_closure_transpose,
        (st.closure_transpose, st.closure_untranspose),
        "p ⊗ q → r  ↔  p → [q, r]; args phi p q, or psi q r with --inverse",
        _with_inverse("map", "first", "second"),
    ),
    "coclosure": Command(cmd_coclosure, (st.right_coclosure,), "right coclosure ⟨p|q⟩", _files("p", "q")),
    "coclosure-transpose": Command(
        cmd_coclosure_transpose,
        (st.rc_transpose, st.rc_untranspose),
        "p → r ◁ q  ↔  ⟨p|q⟩ → r; args psi r q, or phi p q with --inverse",
        _with_inverse("map", "first", "second"),
    ),
    "frown": Command(cmd_frown, (st.frown,), "indexed left coclosure p ⌢_f q", _files("p", "f", "q")),
    "frown-transpose": Command(
        cmd_frown_transpose,
        (st.frown_transpose, st.frown_untranspose),
        "p → q ◁ r  ↔  (f, p ⌢_f q → r)",
        _frown_transpose_args,
    ),
    "closure-lax": Command(
        cmd_closure_lax, (st.closure_tri_lax,), "[p1,q1]◁[p2,q2] → [p1◁p2, q1◁q2]", _files("p1", "q1", "p2", "q2")
    ),
    "coclosure-tensor": Command(
        cmd_coclosure_tensor,
        (st.coclosure_tensor_map,),
        "⟨p1⊗p2|q1⊗q2⟩ → ⟨p1|q1⟩⊗⟨p2|q2⟩",
        _files("p1", "q1", "p2", "q2"),
    ),
    "frown-tensor": Command(
        cmd_frown_tensor,
        (st.frown_tensor_iso,),
        "(p1⊗p2)⌢(q1⊗q2) ≅ (p1⌢q1)⊗(p2⌢q2)",
        _files("p1", "f1", "q1", "p2", "f2", "q2"),
    ),
    "comonoid-check": Command(cmd_comonoid_check, (cm.comonoid_check,), "check the comonoid laws", _files("c")),
    "cat2com": Command(cmd_cat2com, (cm.cat_to_comonoid,), "category to comonoid", _files("category")),
    "com2cat": Command(cmd_com2cat, (cm.comonoid_to_cat,), "comonoid to category", _files("c")),
    "cofunctor-check": Command(
        cmd_cofunctor_check, (cm.cofunctor_check,), "check a map of comonoids", _files("phi", "c", "d")
    ),
    "comonoid": Command(
        cmd_comonoid,
        (cm.discrete_comonoid, cm.pstar_comonoid, cm.selfclosure_comonoid),
        "build a named comonoid",
        _comonoid_args,
    ),
    "coalg-check": Command(cmd_coalg_check, (co.coalg_check,), "check the coalgebra laws", _files("X")),
    "opfib": Command(
        cmd_opfib,
        (co.coalg_to_opfib, co.opfib_to_coalg),
        "coalgebra ↔ discrete opfibration",
        _with_inverse("file"),
    ),
    "bicomod-check": Command(
        cmd_bicomod_check,
        (bm.left_comodule_check, bm.right_comodule_check, bm.bicomodule_check),
        "check comodule or bicomodule laws",
        _bicomod_check_args,
    ),
    "typed-bicomod": Command(
        cmd_typed_bicomod,
        (bm.bicomod_from_typed, bm.typed_from_bicomod),
        "typed polynomial ↔ bicomodule between discrete comonoids",
        _files("file"),
    ),
    "typed-compose": Command(cmd_typed_compose, (bm.typed_compose,), "compose typed polynomials", _files("p", "q")),
    "bicomod-compose": Command(
        cmd_bicomod_compose, (bm.bicomod_compose,), "compose bicomodules", _bicomod_compose_args
    ),
    "migrate": Command(
        cmd_migrate, (bm.migrate, bm.migrate_hom), "migrate a coalgebra (or a map) along a bicomodule", _migrate_args
    ),
    "laws": Command(cmd_laws, (write_report,), "run the seeded law harness", _laws_args),
    "roundtrip": Command(cmd_roundtrip, (io_roundtrip,), "parse and rewrite a file canonically", _files("file")),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polycalc", description="Polynomial functor calculus over finite bases.")
    sub = parser.add_subparsers(dest="command", metavar="<subcommand>")
    sub.required = True
    for name, cmd in COMMANDS.items():
        p = sub.add_parser(name, help=cmd.help, description=cmd.help)
        cmd.configure(p)
        p.add_argument("--budget", type=_positive, help="candidate cap (default: $POLYCALC_BUDGET or built-in)")
        p.add_argument("-o", "--output", help="write the result here instead of stdout")
    return parser


def _emit(result, out) -> None:
    if isinstance(result, RawText):
        out.write(result)
    elif isinstance(result, (dict, list, int, bool)) or result is None:
        out.write(canonical_text(result))
    else:
        out.write(canonical_text(encode(result)))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    args.output_stream = out
    try:
        result = COMMANDS[args.command].handler(args)
        if isinstance(result, Checked):
            if result.payload is not None:
                _emit(result.payload, out)
            return 0 if result.ok else 1
        _emit(result, out)
        return 0
    except UsageError as e:
        print(f"polycalc {args.command}: {e}", file=sys.stderr)
        return 2
    except PolycalcError as e:
        print(f"polycalc {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    finally:
        if out is not sys.stdout:
            out.close()
        else:
            out.flush()


if __name__ == "__main__":
    sys.exit(main())
