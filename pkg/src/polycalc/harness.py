"""Seeded law-verification harness.

Each suite draws cases from a generator seeded by ``(seed, suite)`` and
records one :class:`LawReport` per case. A case that needs more candidates
than the budget allows is recorded as ``skipped-budget``; sampled suites
keep drawing until the required number of cases has actually been verified
(or an attempt cap is hit). Output is line-delimited canonical JSON
followed by a summary footer.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from . import bicomodule as bm
from . import coalgebra as co
from . import comonoid as cm
from . import corpus
from . import poly as P
from . import structures as st
from .errors import BudgetExceeded, PolycalcError
from .fincat import Report, fincat_validate, parallel_pair, terminal_cat, walking_arrow
from .io import canonical_text, encode
from .labels import to_json
from .presheaf import enumerate_homs, homs, pullback_presheaf, slice_homs, presheaf_pi
from .presheaf import pi_hom_transpose, pi_hom_untranspose, pshmor_validate
from .psh_poly import (
    psh_is_iso,
    psh_tri_associator,
    psh_tri_left_unitor,
    psh_tri_right_unitor,
    pshpolymor_validate,
)
from .sets import FinFn, FinSet, functions

SUITES = (
    "monoidal",
    "duoidal",
    "closure",
    "coclosure",
    "comonoid",
    "coalgebra",
    "bicomodule",
    "typed",
    "migrate",
    "presheaf",
)
STATUSES = ("pass", "fail", "skipped-budget")
HARNESS_BUDGET = 20_000


@dataclass(frozen=True)
class HarnessConfig:
    seed: int = 0
    max_pos: int = 3
    max_dir: int = 3
    budget: int = HARNESS_BUDGET
    suites: tuple = SUITES
    inject_mutant: bool = False

    def __post_init__(self):
        if self.max_pos < 0 or self.max_dir < 0:
            raise PolycalcError("bounds must be non-negative")
        if self.budget <= 0:
            raise PolycalcError("budget must be positive")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise PolycalcError(f"unknown suites: {', '.join(unknown)}")
        if not 0 <= self.seed < 2**64:
            raise PolycalcError("seed must be a 64-bit unsigned integer")

    def as_json(self) -> dict:
        return {
            "seed": self.seed,
            "max_pos": self.max_pos,
            "max_dir": self.max_dir,
            "budget": self.budget,
            "suites": list(self.suites),
            "inject_mutant": self.inject_mutant,
        }


@dataclass(frozen=True)
class LawReport:
    suite: str
    case: str
    status: str
    digest: str
    witness: object = None

    def as_json(self) -> dict:
        out = {"suite": self.suite, "case": self.case, "status": self.status, "digest": self.digest}
        if self.status == "fail":
            out["witness"] = self.witness
        return out


@dataclass
class Case:
    """A named law check; ``inputs`` are hashed into the corpus digest."""

    id: str
    inputs: object
    run: Callable[[], Report]


@dataclass
class Suite:
    name: str
    cases: Iterator[Case]
    required: int | None = None  # None: run every case
    max_attempts: int | None = None


def jsonable(x):
    if isinstance(x, (int, str)) or x is None:
        return x
    if isinstance(x, bool):
        return x
    if isinstance(x, (tuple, list)):
        return [jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    try:
        return encode(x)
    except TypeError:
        return repr(x)


def _digest(inputs) -> str:
    return hashlib.sha256(canonical_text(jsonable(inputs)).encode()).hexdigest()[:16]


def _suite_rng(seed: int, name: str) -> random.Random:
    h = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


def _law(r: Report, name: str, ok: bool, witness=None) -> None:
    if not ok:
        r.add(name, witness)


def _eq(r: Report, name: str, a, b) -> None:
    if a != b:
        w = a.first_difference(b) if hasattr(a, "first_difference") else None
        r.add(name, w)


# ---- monoidal ----------------------------------------------------------------------------


def _functor_case(p, q, budget) -> Report:
    r = Report("functor oracle")
    for n in range(4):
        X = FinSet.range(n)
        pq = P.compose_tri(p, q, budget)
        lhs = P.eval_functor(pq, X, budget)
        rhs = P.eval_functor(p, P.eval_functor(q, X, budget), budget)
        _law(r, "cardinality", len(lhs) == len(rhs), n)
        if len(lhs) == len(rhs):
            _law(r, "canonical bijection", P.functor_comparison(p, q, X, budget).is_bijective(), n)
    return r


def _monoidal_case(p, q, r_, budget) -> Report:
    r = Report("monoidal")
    y = P.identity_y()
    for name, m in (
        ("◁ left unitor iso", P.tri_left_unitor(p)),
        ("◁ right unitor iso", P.tri_right_unitor(p)),
        ("◁ associator iso", P.tri_associator(p, q, r_, budget)),
        ("⊗ left unitor iso", P.tensor_left_unitor(p)),
        ("⊗ right unitor iso", P.tensor_right_unitor(p)),
        ("⊗ associator iso", P.tensor_associator(p, q, r_)),
        ("braiding iso", P.braiding(p, q)),
    ):
        _law(r, name, P.is_iso(m))
    # ◁ triangle: (p ◁ y) ◁ q → p ◁ q both ways
    lhs = P.mor_compose(P.tri_associator(p, y, q, budget), P.compose_tri_mor(P.mor_id(p), P.tri_left_unitor(q), budget))
    rhs = P.compose_tri_mor(P.tri_right_unitor(p), P.mor_id(q), budget)
    _eq(r, "◁ triangle", lhs, rhs)
    # ◁ pentagon on (p, q, r, q)
    s = q
    a = P.tri_associator
    left = P.compose_all(
        a(P.compose_tri(p, q, budget), r_, s, budget),
        a(p, q, P.compose_tri(r_, s, budget), budget),
    )
    right = P.compose_all(
        P.compose_tri_mor(a(p, q, r_, budget), P.mor_id(s), budget),
        a(p, P.compose_tri(q, r_, budget), s, budget),
        P.compose_tri_mor(P.mor_id(p), a(q, r_, s, budget), budget),
    )
    _eq(r, "◁ pentagon", left, right)
    # ⊗ triangle, symmetry and hexagon
    lhs = P.mor_compose(P.tensor_associator(p, y, q), P.tensor_mor(P.mor_id(p), P.tensor_left_unitor(q)))
    rhs = P.tensor_mor(P.tensor_right_unitor(p), P.mor_id(q))
    _eq(r, "⊗ triangle", lhs, rhs)
    _eq(r, "braiding symmetry", P.mor_compose(P.braiding(p, q), P.braiding(q, p)), P.mor_id(P.tensor(p, q)))
    T, tm, ta, br = P.tensor, P.tensor_mor, P.tensor_associator, P.braiding
    hex_l = P.compose_all(ta(p, q, r_), br(p, T(q, r_)), ta(q, r_, p))
    hex_r = P.compose_all(tm(br(p, q), P.mor_id(r_)), ta(q, p, r_), tm(P.mor_id(q), br(p, r_)))
    _eq(r, "hexagon", hex_l, hex_r)
    _eq(r, "⊗ unit braiding", P.mor_compose(br(p, y), P.tensor_left_unitor(p)), P.tensor_right_unitor(p))
    return r


def suite_monoidal(cfg: HarnessConfig) -> list[Suite]:
    rng = _suite_rng(cfg.seed, "monoidal")

    def functor_cases():
        for i in itertools.count():
            p = corpus.random_poly(rng, cfg.max_pos, cfg.max_dir)
            q = corpus.random_poly(rng, cfg.max_pos, cfg.max_dir)
            yield Case(f"functor/{i}", [p, q], lambda p=p, q=q: _functor_case(p, q, cfg.budget))

    rng2 = _suite_rng(cfg.seed, "monoidal-laws")

    def law_cases():
        for i in itertools.count():
            ps = [corpus.random_poly(rng2, cfg.max_pos, cfg.max_dir) for _ in range(3)]
            yield Case(f"laws/{i}", ps, lambda ps=ps: _monoidal_case(*ps, cfg.budget))

    return [
        Suite("monoidal", functor_cases(), required=200, max_attempts=2000),
        Suite("monoidal", law_cases(), required=100, max_attempts=2000),
    ]


# ---- duoidal -----------------------------------------------------------------------------


def _duoidal_case(ps, maps, budget) -> Report:
    r = Report("duoidal")
    p1, p2, q1, q2 = ps
    f1, f2, g1, g2 = maps
    ic = st.interchange(p1, p2, q1, q2, budget)
    _law(r, "interchange is cartesian", P.is_cartesian(ic))
    ic2 = st.interchange(f1.cod, f2.cod, g1.cod, g2.cod, budget)
    T, C = P.tensor_mor, P.compose_tri_mor
    lhs = P.mor_compose(T(C(f1, f2, budget), C(g1, g2, budget)), ic2)
    rhs = P.mor_compose(ic, C(T(f1, g1), T(f2, g2), budget))
    _eq(r, "interchange naturality", lhs, rhs)
    y = P.identity_y()
    _law(r, "unit interchange y⊗y = y", P.tensor(y, y).arities() == y.arities())
    return r


def suite_duoidal(cfg: HarnessConfig) -> list[Suite]:
    rng = _suite_rng(cfg.seed, "duoidal")

    def cases():
        for i in itertools.count():
            ps = [corpus.random_poly(rng, cfg.max_pos, cfg.max_dir) for _ in range(4)]
            maps = []
            for p in ps:
                target = corpus.random_poly(rng, cfg.max_pos, cfg.max_dir)
                m = corpus.random_mor(rng, p, target)
                maps.append(m if m is not None else P.mor_id(p))
            yield Case(f"quad/{i}", [ps, maps], lambda ps=ps, maps=maps: _duoidal_case(ps, maps, cfg.budget))

    return [Suite("duoidal", cases(), required=50, max_attempts=1000)]


# ---- closure ------------------------------------------------------------------------------


def _closure_case(p, q, r_, budget) -> Report:
    rep = Report("closure")
    left = P.hom_enumerate(P.tensor(p, q), r_, budget)
    cl = st.closure(q, r_, budget)
    right = P.hom_enumerate(p, cl, budget)
    _law(rep, "hom-set sizes", len(left) == len(right), [len(left), len(right)])
    for phi in left:
        t = st.closure_transpose(phi, p, q, budget)
        if st.closure_untranspose(t, q, r_) != phi:
            rep.add("untranspose ∘ transpose", phi.as_label())
            break
    for psi in right:
        u = st.closure_untranspose(psi, q, r_)
        if st.closure_transpose(u, p, q, budget) != psi:
            rep.add("transpose ∘ untranspose", psi.as_label())
            break
    # triangle identities for p ⊗ − ⊣ [p, −] at q and r
    ev = st.closure_eval(p, P.tensor(p, q), budget)
    pair = st.closure_pair(p, q, budget)
    t1 = P.mor_compose(P.tensor_mor(P.mor_id(p), pair), ev)
    _eq(rep, "triangle at p⊗q", t1, P.mor_id(P.tensor(p, q)))
    pr = st.closure(p, r_, budget)
    t2 = P.mor_compose(st.closure_pair(p, pr, budget), st.closure_functor(P.mor_id(p), st.closure_eval(p, r_, budget), budget))
    _eq(rep, "triangle at [p,r]", t2, P.mor_id(pr))
    return rep


def _pool_triples():
    pool = corpus.poly_pool()
    names = ["0", "1", "y", "y^2", "2y", "y+1"]
    for (i, p), (j, q), (k, r) in itertools.product(enumerate(pool), repeat=3):
        yield f"{names[i]},{names[j]},{names[k]}", (p, q, r)


def suite_closure(cfg: HarnessConfig) -> list[Suite]:
    def cases():
        for name, (p, q, r) in _pool_triples():
            yield Case(f"pool/{name}", [p, q, r], lambda p=p, q=q, r=r: _closure_case(p, q, r, cfg.budget))

    return [Suite("closure", cases())]


# ---- coclosures ------------------------------------------------------------------------------


def _coclosure_case(p, q, r_, budget) -> Report:
    rep = Report("coclosure")
    # ⟨p|q⟩ ⊣ − ◁ q : Hom(⟨p|q⟩, r) ≅ Hom(p, r ◁ q)
    right = P.hom_enumerate(p, P.compose_tri(r_, q, budget), budget)
    left = P.hom_enumerate(st.right_coclosure(p, q, budget), r_, budget)
    _law(rep, "coclosure hom-set sizes", len(left) == len(right), [len(left), len(right)])
    for psi in right:
        if st.rc_untranspose(st.rc_transpose(psi, r_, q, budget), p, q, budget) != psi:
            rep.add("coclosure round trip from p → r◁q", psi.as_label())
            break
    for phi in left:
        if st.rc_transpose(st.rc_untranspose(phi, p, q, budget), r_, q, budget) != phi:
            rep.add("coclosure round trip from ⟨p|q⟩ → r", phi.as_label())
            break
    # indexed left coclosure: Hom(p, q ◁ r) ≅ ⨿_f Hom(p ⌢_f q, r)
    homs_pqr = P.hom_enumerate(p, P.compose_tri(q, r_, budget), budget)
    by_index: dict = {}
    for psi in homs_pqr:
        f, phi = st.frown_transpose(psi, q, r_, budget)
        expected = {I: psi.on_pos[I][0] for I in p.positions}
        if f.map != expected:
            rep.add("frown index is the first component of ψ1", psi.as_label())
            break
        if st.frown_untranspose(f, phi, p, q, budget) != psi:
            rep.add("frown round trip", psi.as_label())
            break
        by_index.setdefault(f, set()).add(phi)
    total = 0
    for fmap in functions(p.positions, q.positions, budget):
        f = FinFn(p.positions, q.positions, fmap)
        hs = P.hom_enumerate(st.frown(p, f, q), r_, budget)
        total += len(hs)
        if set(hs) != by_index.get(f, set()):
            rep.add("frown bijection partitioned by index", [to_json(f.table())])
            break
        for phi in hs:
            if st.frown_transpose(st.frown_untranspose(f, phi, p, q, budget), q, r_, budget) != (f, phi):
                rep.add("frown round trip from p ⌢_f q → r", phi.as_label())
                break
    _law(rep, "frown hom-set sizes", total == len(homs_pqr), [total, len(homs_pqr)])
    return rep


def suite_coclosure(cfg: HarnessConfig) -> list[Suite]:
    def cases():
        for name, (p, q, r) in _pool_triples():
            yield Case(f"pool/{name}", [p, q, r], lambda p=p, q=q, r=r: _coclosure_case(p, q, r, cfg.budget))

    return [Suite("coclosure", cases())]


# ---- comonoids ----------------------------------------------------------------------------


def walking_arrow_mutant() -> cm.Comonoid:
    """The walking-arrow comonoid with the targets recorded by δ1 at a swapped."""
    c = cm.cat_to_comonoid(walking_arrow())
    x, f = c.comult.on_pos["a"]
    swapped = tuple((d, "a" if t == "b" else "b") for d, t in f)
    cc = c.comult.cod
    on_pos = dict(c.comult.on_pos)
    on_pos["a"] = (x, swapped)
    on_dir = dict(c.comult.on_dir)
    on_dir["a"] = {(d, d2): (d if d2 in (("id", "a"), ("id", "b")) else d2) for d, d2 in cc.dirs[on_pos["a"]]}
    return cm.Comonoid(c.carrier, c.counit, P.PolyMor(c.carrier, cc, on_pos, on_dir))


def _cat_roundtrip(C) -> Report:
    r = Report("category round trip")
    c = cm.cat_to_comonoid(C)
    r.violations.extend(cm.comonoid_check(c).violations)
    if r.ok:
        _law(r, "category → comonoid → category", cm.comonoid_to_cat(c) == C)
    return r


def law_equivalence(carrier: P.Poly, budget) -> Report:
    """Every (ε, δ) on the carrier passes the comonoid laws iff its
    translation passes the category laws."""
    r = Report("law equivalence")
    y = P.identity_y()
    cc = P.compose_tri(carrier, carrier, budget)
    counits = P.hom_enumerate(carrier, y, budget)
    comults = P.hom_enumerate(carrier, cc, budget)
    for eps, delta in itertools.product(counits, comults):
        c = cm.Comonoid(carrier, eps, delta)
        as_comonoid = cm.comonoid_check(c).ok
        try:
            as_category = fincat_validate(cm.translate_to_cat(c)).ok
        except PolycalcError:
            as_category = False
        if as_comonoid != as_category:
            r.add("laws disagree", [eps.as_label(), delta.as_label()])
            break
    return r


def fixed_comonoids() -> dict:
    """Small comonoids for the cofunctor comparison."""
    z2 = cm.translate_to_cat(
        cm.Comonoid(
            P.Poly({"*": ["e", "s"]}),
            P.PolyMor(P.Poly({"*": ["e", "s"]}), P.identity_y(), {"*": ()}, {"*": {(): "e"}}),
            P.PolyMor(
                P.Poly({"*": ["e", "s"]}),
                P.compose_tri(P.Poly({"*": ["e", "s"]}), P.Poly({"*": ["e", "s"]})),
                {"*": ("*", (("e", "*"), ("s", "*")))},
                {"*": {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "e"}},
            ),
        )
    )
    return {
        "arrow": cm.cat_to_comonoid(walking_arrow()),
        "graph": cm.cat_to_comonoid(parallel_pair()),
        "z2": cm.cat_to_comonoid(z2),
        "point": cm.cat_to_comonoid(terminal_cat()),
    }


def cofunctor_equivalence(c, d, budget) -> Report:
    r = Report("cofunctor equivalence")
    hom_set, cof_set = set(), set()
    for phi in P.hom_enumerate(c.carrier, d.carrier, budget):
        rep = cm.cofunctor_check(phi, c, d, budget)
        if rep.homomorphism.ok:
            hom_set.add(phi)
        if rep.cofunctor.ok:
            cof_set.add(phi)
    if hom_set != cof_set:
        diff = sorted((m.as_label() for m in hom_set ^ cof_set), key=repr)
        r.add("homomorphism set ≠ cofunctor set", diff[0])
    return r


def _named_comonoids(p, budget) -> Report:
    r = Report("named comonoids")
    for name, make in (
        ("p_*", lambda: cm.pstar_comonoid(p, budget)),
        ("⟨p|p⟩", lambda: cm.selfclosure_comonoid(p, budget)),
        ("discrete", lambda: cm.discrete_comonoid(p.positions)),
    ):
        for law, w in cm.comonoid_check(make(), budget).violations:
            r.add(f"{name} {law}", w)
    _law(r, "p_* agrees with its transposed construction", cm.pstar_comonoid(p, budget) == cm.pstar_comonoid_by_transpose(p, budget))
    _law(
        r,
        "⟨p|p⟩ agrees with its transposed construction",
        cm.selfclosure_comonoid(p, budget) == cm.selfclosure_comonoid_by_transpose(p, budget),
    )
    return r


def suite_comonoid(cfg: HarnessConfig) -> list[Suite]:
    rng = _suite_rng(cfg.seed, "comonoid")

    def cat_cases():
        for i in range(50):
            C = corpus.random_fincat(rng)
            yield Case(f"category/{i}", [C], lambda C=C: _cat_roundtrip(C))

    def fixed_cases():
        carrier = cm.cat_to_comonoid(walking_arrow()).carrier
        yield Case("law-equivalence/walking-arrow", [carrier], lambda: law_equivalence(carrier, cfg.budget))
        fixed = fixed_comonoids()
        for a, b in (("arrow", "arrow"), ("graph", "arrow"), ("arrow", "z2"), ("z2", "z2"), ("graph", "point")):
            c, d = fixed[a], fixed[b]
            yield Case(f"cofunctor/{a}->{b}", [c, d], lambda c=c, d=d: cofunctor_equivalence(c, d, cfg.budget))
        names = ["0", "1", "y", "y^2", "2y", "y+1"]
        for name, p in zip(names, corpus.poly_pool()):
            yield Case(f"named/{name}", [p], lambda p=p: _named_comonoids(p, cfg.budget))
        if cfg.inject_mutant:
            m = walking_arrow_mutant()
            yield Case("mutant/walking-arrow-targets-swapped", [m], lambda: cm.comonoid_check(m))

    return [Suite("comonoid", cat_cases()), Suite("comonoid", fixed_cases())]


# ---- coalgebras ------------------------------------------------------------------------------


def copresheaf_structures(c, S) -> set:
    """Oracle: copresheaves a → b on the walking arrow built directly on S."""
    out = set()
    S = FinSet(S)
    for side in functions(S, FinSet(["a", "b"])):
        A = [s for s in S if side[s] == "a"]
        B = [s for s in S if side[s] == "b"]
        for images in itertools.product(B, repeat=len(A)):
            fmap = dict(zip(A, images))
            out.add(co.make_coalgebra(c, S, side, lambda s, d, fmap=fmap: fmap[s] if d == "f" else s))
    return out


def _coalg_enum_case(c, n, budget) -> Report:
    r = Report("coalgebras = copresheaves")
    found = set(co.enumerate_coalgebras(c, range(n), budget))
    oracle = copresheaf_structures(c, range(n))
    _law(r, "coalgebra set equals copresheaf set", found == oracle, [len(found), len(oracle)])
    for X in sorted(found, key=lambda X: canonical_text(encode(X))):
        F = co.coalg_to_copresheaf(X)
        iso = co.copresheaf_iso(c, F)
        _law(r, "copresheaf round trip is a natural iso", pshmor_validate(iso).ok and iso.is_iso())
        Y = co.copresheaf_to_coalg(c, F)
        h = FinFn(X.S, Y.S, {s: (X.kappa1.map[s], s) for s in X.S})
        _law(r, "coalgebra round trip is an iso", h.is_bijective() and co.is_coalg_hom(h, X, Y))
        E, phi = co.coalg_to_opfib(X)
        _law(r, "opfibration round trip", co.opfib_to_coalg(cm.cat_to_comonoid(E), phi, c) == X)
    return r


def _opfib_maps(EX, EY, phiX, phiY) -> set:
    """Functors E_X → E_Y over c, read off from their object maps."""
    out = set()
    for omap in functions(EX.objects, EY.objects):
        if any(phiY.on_pos[omap[s]] != phiX.on_pos[s] for s in EX.objects):
            continue
        ok = True
        for s in EX.objects:
            for d in phiX.cod.dirs[phiX.on_pos[s]]:
                src, tgt = EX.src.map[(s, d)], EX.tgt.map[(s, d)]
                m2 = (omap[src], d)
                if EY.tgt.map[m2] != omap[tgt]:
                    ok = False
        if ok:
            out.add(tuple(sorted(omap.items(), key=lambda kv: repr(kv))))
    return out


def _coalg_hom_case(X, Y, budget) -> Report:
    r = Report("coalgebra homs")
    hs = co.coalg_homs(X, Y, budget)
    F, G = co.coalg_to_copresheaf(X), co.coalg_to_copresheaf(Y)
    nts = enumerate_homs(F, G, budget=budget)
    as_tables = {tuple(sorted(h.map.items(), key=repr)) for h in hs}
    nt_tables = {tuple(sorted(((w, x) for (a, w), x in nt.items()), key=repr)) for nt in nts}
    _law(r, "coalgebra homs = natural transformations", as_tables == nt_tables, [len(as_tables), len(nt_tables)])
    EX, phiX = co.coalg_to_opfib(X)
    EY, phiY = co.coalg_to_opfib(Y)
    of = _opfib_maps(EX, EY, phiX, phiY)
    _law(r, "coalgebra homs = maps of opfibrations", as_tables == of, [len(as_tables), len(of)])
    return r


def small_arrow_coalgebras(c, max_size=3) -> list:
    """Every copresheaf on the walking arrow with total size at most ``max_size``."""
    out = []
    for n in range(max_size + 1):
        out.extend(sorted(copresheaf_structures(c, range(n)), key=lambda X: canonical_text(encode(X))))
    return out


def suite_coalgebra(cfg: HarnessConfig) -> list[Suite]:
    c = cm.cat_to_comonoid(walking_arrow())

    def cases():
        for n in range(4):
            yield Case(f"enumerate/{n}", [c, n], lambda n=n: _coalg_enum_case(c, n, cfg.budget))
        xs = small_arrow_coalgebras(c, 3)
        for (i, X), (j, Y) in itertools.product(enumerate(xs), repeat=2):
            yield Case(f"homs/{i}->{j}", [X, Y], lambda X=X, Y=Y: _coalg_hom_case(X, Y, cfg.budget))

    return [Suite("coalgebra", cases())]


# ---- bicomodules and typed polynomials -----------------------------------------------------


def unit_isos(b: bm.Bicomodule, budget) -> Report:
    """c ◁_c m ≅ m ≅ m ◁_d d through the coactions themselves."""
    r = Report("unit laws")
    for side, (one, two) in (
        ("left", (bm.identity_bicomodule(b.c), b)),
        ("right", (b, bm.identity_bicomodule(b.d))),
    ):
        N, inc = bm.bicomod_compose_general(one, two, budget)
        coact = b.left if side == "left" else b.right
        on_pos, on_dir = {}, {}
        ok = True
        for x in b.m.positions:
            X = coact.on_pos[x]
            if X not in N.m.dirs:
                ok = False
                break
            on_pos[x] = X
            on_dir[x] = {cls: coact.on_dir[x][cls] for cls in N.m.dirs[X]}
        if not ok:
            r.add(f"{side} unit: coaction leaves the composite", None)
            continue
        iso = P.PolyMor(b.m, N.m, on_pos, on_dir)
        _law(r, f"{side} unit iso", P.is_iso(iso))
        _law(r, f"{side} unit iso respects coactions", bm.is_bicomod_hom(iso, b, N, budget))
    return r


def _bicomod_case(b: bm.Bicomodule, budget) -> Report:
    r = Report("bicomodule")
    r.violations.extend(bm.bicomodule_check(b, budget).violations)
    if r.ok:
        r.violations.extend(unit_isos(b, budget).violations)
    return r


def suite_bicomodule(cfg: HarnessConfig) -> list[Suite]:
    rng = _suite_rng(cfg.seed, "bicomodule")

    def cases():
        for i in range(10):
            C = corpus.random_fincat(rng, max_objects=2, max_morphisms=4)
            c = cm.cat_to_comonoid(C)
            yield Case(f"identity/{i}", [C], lambda c=c: _bicomod_case(bm.identity_bicomodule(c), cfg.budget))
            a = rng.choice(C.objects.elements)
            yield Case(f"representable/{i}", [C, a], lambda c=c, a=a: _bicomod_case(bm.representable_bicomodule(c, a), cfg.budget))
        for i in range(10):
            t = corpus.random_typed(rng, range(rng.randint(1, 2)), range(rng.randint(1, 2)), 3, 2)
            yield Case(f"typed/{i}", [t], lambda t=t: _bicomod_case(bm.bicomod_from_typed(t), cfg.budget))
        if cfg.inject_mutant:
            pass  # mutants live in the comonoid suite only

    return [Suite("bicomodule", cases())]


def _typed_case(p, q, budget) -> Report:
    r = Report("typed composition")
    pq = bm.typed_compose(p, q, budget)
    bp, bq = bm.bicomod_from_typed(p), bm.bicomod_from_typed(q)
    N, _ = bm.bicomod_compose(bp, bq, budget)
    target = bm.bicomod_from_typed(pq)
    # the composite is labelled like the typed one; the constructed iso is the relabelling by equal labels
    if N.m != target.m:
        r.add("composite polynomial differs", None)
        return r
    iso = P.mor_id(N.m)
    _law(r, "iso respects coactions", bm.is_bicomod_hom(iso, N, target, budget) and bm.is_bicomod_hom(iso, target, N, budget))
    _law(r, "typed round trip", bm.typed_from_bicomod(N) == pq)
    G, _ = bm.bicomod_compose_general(bp, bq, budget)
    _law(r, "general composite agrees", G == N)
    # unit laws
    idC, idD = corpus.typed_identity(p.C), corpus.typed_identity(p.D)
    left = bm.typed_compose(idC, p, budget)
    on_pos = {I: (p.tgt.map[I], (((), I),)) for I in p.m.positions}
    on_dir = {I: {((), e): e for e in p.m.dirs[I]} for I in p.m.positions}
    li = P.PolyMor(p.m, left.m, on_pos, on_dir)
    _law(r, "left unit iso", P.is_iso(li) and bm.is_typed_hom(li, p, left))
    right = bm.typed_compose(p, idD, budget)
    on_pos = {I: (I, tuple((d, p.src.map[(I, d)]) for d in p.m.dirs[I])) for I in p.m.positions}
    on_dir = {I: {(d, ()): d for d in p.m.dirs[I]} for I in p.m.positions}
    ri = P.PolyMor(p.m, right.m, on_pos, on_dir)
    _law(r, "right unit iso", P.is_iso(ri) and bm.is_typed_hom(ri, p, right))
    _law(r, "bicomodule homs = typed homs", len(bm.bicomod_homs(bp, bp, budget)) == len(bm.typed_homs(p, p, budget)))
    return r


def suite_typed(cfg: HarnessConfig) -> list[Suite]:
    rng = _suite_rng(cfg.seed, "typed")

    def cases():
        for i in itertools.count():
            C, D, E = (range(rng.randint(1, 2)) for _ in range(3))
            p = corpus.random_typed(rng, C, D, cfg.max_pos, min(cfg.max_dir, 2))
            q = corpus.random_typed(rng, D, E, cfg.max_pos, min(cfg.max_dir, 2))
            yield Case(f"pair/{i}", [p, q], lambda p=p, q=q: _typed_case(p, q, cfg.budget))

    return [Suite("typed", cases(), required=30, max_attempts=300)]


# ---- migration ---------------------------------------------------------------------------------


def _yoneda_case(C, a, X, budget) -> Report:
    r = Report("yoneda")
    c = cm.cat_to_comonoid(C)
    b = bm.representable_bicomodule(c, a)
    M = bm.migrate(b, X, budget)
    r.violations.extend(co.coalg_check(M).violations)
    ida = C.id(a)
    ev = {el: dict(el[1])[ida] for el in M.S}
    fiber = set(X.kappa1.fiber(a))
    _law(r, "evaluation at the identity is a bijection onto X(a)", set(ev.values()) == fiber and len(ev) == len(fiber))
    return r


def _formula_case(b, X, budget) -> Report:
    r = Report("migration formula")
    M = bm.migrate(b, X, budget)
    r.violations.extend(co.coalg_check(M).violations)
    counts = {J: len(M.kappa1.fiber(J)) for J in b.c.carrier.positions}
    _law(r, "Σ hom counts = equalizer construction", counts == bm.migrate_count_by_formula(b, X, budget))
    return r


def _pullback_case(b, X1, h1, X2, h2, X3, budget) -> Report:
    r = Report("migration preserves pullbacks")
    Pb, p1, p2 = co.pullback_coalgebra(h1, X1, h2, X2)
    MP = bm.migrate(b, Pb, budget)
    m1, m2 = bm.migrate_hom(b, h1, X1, X3, budget), bm.migrate_hom(b, h2, X2, X3, budget)
    M1, M2 = bm.migrate(b, X1, budget), bm.migrate(b, X2, budget)
    Q, _, _ = co.pullback_coalgebra(m1, M1, m2, M2)
    cmp = {}
    for x, g in MP.S:
        cmp[(x, g)] = ((x, tuple((e, s[0]) for e, s in g)), (x, tuple((e, s[1]) for e, s in g)))
    comparison = FinFn(MP.S, Q.S, cmp)
    _law(r, "comparison is a bijection", comparison.is_bijective())
    _law(r, "comparison is a coalgebra map", co.is_coalg_hom(comparison, MP, Q))
    ident = FinFn(X1.S, X1.S, {s: s for s in X1.S})
    _law(r, "identity preserved", bm.migrate_hom(b, ident, X1, X1, budget) == FinFn(M1.S, M1.S, {s: s for s in M1.S}))
    return r


def suite_migrate(cfg: HarnessConfig) -> list[Suite]:
    rng = _suite_rng(cfg.seed, "migrate")
    arrow = cm.cat_to_comonoid(walking_arrow())

    def yoneda_cases():
        for i in itertools.count():
            C = corpus.random_fincat(rng, max_objects=3, max_morphisms=6)
            c = cm.cat_to_comonoid(C)
            a = rng.choice(C.objects.elements)
            X = corpus.tautological_coalgebra(c, C)
            yield Case(f"yoneda/{i}", [C, a], lambda C=C, a=a, X=X: _yoneda_case(C, a, X, cfg.budget))

    def formula_cases():
        for i in range(10):
            X = corpus.random_arrow_coalgebra(rng, arrow)
            for name, b in (
                ("identity", bm.identity_bicomodule(arrow)),
                ("rep-a", bm.representable_bicomodule(arrow, "a")),
                ("rep-b", bm.representable_bicomodule(arrow, "b")),
            ):
                yield Case(f"formula/{name}/{i}", [b, X], lambda b=b, X=X: _formula_case(b, X, cfg.budget))
        for i in range(10):
            C = corpus.random_fincat(rng, max_objects=3, max_morphisms=6)
            c = cm.cat_to_comonoid(C)
            X = corpus.tautological_coalgebra(c, C)
            yield Case(f"formula/category/{i}", [C], lambda c=c, X=X: _formula_case(bm.identity_bicomodule(c), X, cfg.budget))
        for i in range(10):
            D = FinSet(range(rng.randint(1, 2)))
            t = corpus.random_typed(rng, range(rng.randint(1, 2)), D, 3, 2)
            b = bm.bicomod_from_typed(t)
            S = FinSet(range(rng.randint(0, 3)))
            X = co.make_coalgebra(b.d, S, {s: rng.choice(D.elements) for s in S}, lambda s, d: s)
            yield Case(f"formula/typed/{i}", [t, X], lambda b=b, X=X: _formula_case(b, X, cfg.budget))

    def pullback_cases():
        xs = small_arrow_coalgebras(arrow, 2)
        spans = []
        for X3 in xs:
            into = [(X, h) for X in xs for h in co.coalg_homs(X, X3, cfg.budget)]
            for (X1, h1), (X2, h2) in itertools.product(into, repeat=2):
                spans.append((X1, h1, X2, h2, X3))
        picks = sorted(rng.sample(range(len(spans)), min(10, len(spans))))
        bicomods = [
            ("identity", bm.identity_bicomodule(arrow)),
            ("rep-a", bm.representable_bicomodule(arrow, "a")),
            ("rep-b", bm.representable_bicomodule(arrow, "b")),
        ]
        for i in picks:
            X1, h1, X2, h2, X3 = spans[i]
            for name, b in bicomods:
                yield Case(
                    f"pullback/{name}/{i}",
                    [X1, h1, X2, h2, X3, name],
                    lambda b=b, s=spans[i]: _pullback_case(b, *s, cfg.budget),
                )

    return [
        Suite("migrate", yoneda_cases(), required=10, max_attempts=100),
        Suite("migrate", formula_cases()),
        Suite("migrate", pullback_cases()),
    ]


# ---- presheaf bases ------------------------------------------------------------------------------


def _psh_tri_case(p, q, budget) -> Report:
    r = Report("presheaf ◁")
    for name, m in (
        ("left unitor", psh_tri_left_unitor(p)),
        ("right unitor", psh_tri_right_unitor(p)),
        ("associator", psh_tri_associator(p, q, p, budget)),
    ):
        for law, w in pshpolymor_validate(m).violations:
            r.add(f"{name} {law}", w)
        _law(r, f"{name} iso", psh_is_iso(m))
    return r


def _pi_case(f, g, W, budget) -> Report:
    """Hom(W, Π_f Z) ≅ ⨿_σ Hom_Y(W ×_X Y, Z) with every round trip exact."""
    r = Report("Π adjunction")
    pi = presheaf_pi(f, g, budget)
    alphas = homs(W, pi.dom, budget)
    for alpha in alphas:
        sigma, gamma = pi_hom_transpose(f, g, pi, alpha)
        ok = pshmor_validate(gamma).ok and all(
            g(a, gamma(a, pair)) == pair[1] for a, pair in gamma.dom.elements()
        )
        _law(r, "transpose lies over Y", ok)
        _law(r, "round trip", pi_hom_untranspose(f, g, pi, sigma, gamma) == alpha)
    total = 0
    for sigma in homs(W, f.cod, budget):
        PB, _, p2 = pullback_presheaf(sigma, f)
        total += len(slice_homs(p2, g, budget))
    _law(r, "hom counts", total == len(alphas), [total, len(alphas)])
    return r


def _psh_comonoid_case(base, cats, functors) -> Report:
    r = Report("internal category")
    from .comonoid import internal_category_from_functor

    I = internal_category_from_functor(base, cats, functors)
    c = cm.cat_to_comonoid(I)
    r.violations.extend(cm.comonoid_check(c).violations)
    if r.ok:
        _law(r, "internal category round trip", cm.comonoid_to_cat(c) == I)
    return r


def suite_presheaf(cfg: HarnessConfig) -> list[Suite]:
    rng = _suite_rng(cfg.seed, "presheaf")

    def cases():
        for name, make in corpus.PSH_BASES.items():
            base = make()
            for i in range(4):
                p = corpus.random_pshpoly(rng, base, 1)
                q = corpus.random_pshpoly(rng, base, 1)
                yield Case(f"{name}/tri/{i}", [p, q], lambda p=p, q=q: _psh_tri_case(p, q, cfg.budget))
            for i in range(4):
                p = corpus.random_pshpoly(rng, base, 2)
                g = corpus.random_over(rng, p.total)
                W = corpus.random_presheaf(rng, base, 2)
                yield Case(f"{name}/pi/{i}", [p, g, W], lambda f=p.proj, g=g, W=W: _pi_case(f, g, W, cfg.budget))
        base = walking_arrow()
        T, A = terminal_cat(), walking_arrow()
        tid = T.id("*")
        yield Case(
            "arrow/internal-category/collapse",
            ["collapse"],
            lambda: _psh_comonoid_case(
                base, {"a": T, "b": A}, {"f": ({"a": "*", "b": "*"}, {m: tid for m in A.morphisms})}
            ),
        )
        yield Case(
            "arrow/internal-category/identity",
            ["identity"],
            lambda: _psh_comonoid_case(
                base, {"a": A, "b": A}, {"f": ({x: x for x in A.objects}, {m: m for m in A.morphisms})}
            ),
        )

    return [Suite("presheaf", cases())]


SUITE_BUILDERS = {
    "monoidal": suite_monoidal,
    "duoidal": suite_duoidal,
    "closure": suite_closure,
    "coclosure": suite_coclosure,
    "comonoid": suite_comonoid,
    "coalgebra": suite_coalgebra,
    "bicomodule": suite_bicomodule,
    "typed": suite_typed,
    "migrate": suite_migrate,
    "presheaf": suite_presheaf,
}


# ---- running -------------------------------------------------------------------------------


def run_case(suite: str, case: Case) -> LawReport:
    digest = _digest(case.inputs)
    try:
        rep = case.run()
    except BudgetExceeded:
        return LawReport(suite, case.id, "skipped-budget", digest)
    except PolycalcError as e:
        return LawReport(suite, case.id, "fail", digest, {"error": type(e).__name__, "message": str(e)})
    if rep.ok:
        return LawReport(suite, case.id, "pass", digest)
    witness = [[law, jsonable(w)] for law, w in rep.violations[:3]]
    return LawReport(suite, case.id, "fail", digest, witness)


def run_suite(s: Suite) -> Iterator[LawReport]:
    verified = attempts = 0
    for case in s.cases:
        if s.required is not None and (verified >= s.required or attempts >= s.max_attempts):
            break
        attempts += 1
        rep = run_case(s.name, case)
        if rep.status != "skipped-budget":
            verified += 1
        yield rep


def laws_run(cfg: HarnessConfig) -> Iterator[LawReport]:
    for name in SUITES:
        if name not in cfg.suites:
            continue
        for s in SUITE_BUILDERS[name](cfg):
            yield from run_suite(s)


def summary(reports: Iterable[LawReport], cfg: HarnessConfig) -> dict:
    totals = {k: 0 for k in STATUSES}
    per_suite: dict = {}
    h = hashlib.sha256()
    for rep in reports:
        totals[rep.status] += 1
        per_suite.setdefault(rep.suite, {k: 0 for k in STATUSES})[rep.status] += 1
        h.update(rep.digest.encode())
    return {"summary": totals, "suites": per_suite, "corpus_digest": h.hexdigest(), "config": cfg.as_json()}


def write_report(cfg: HarnessConfig, out) -> dict:
    """Stream report lines to ``out`` and return the summary footer."""
    reports = []
    for rep in laws_run(cfg):
        reports.append(rep)
        out.write(canonical_text(rep.as_json()))
    foot = summary(reports, cfg)
    out.write(canonical_text(foot))
    return foot
