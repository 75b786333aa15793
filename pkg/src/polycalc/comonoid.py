"""Comonoids for ◁, their categories, and cofunctors.

A comonoid ``(c, ε, δ)`` is a category: positions are objects, ``c[x]`` is
the set of morphisms out of ``x``, ``ε♯`` picks identities, ``δ1`` records
targets and ``δ♯`` composes. Both finite-set and presheaf bases are handled;
for the latter the category is internal to presheaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import SimpleNamespace
from typing import Mapping

from .errors import InvalidStructure, TypeMismatch
from .fincat import FinCat, Report, fincat_validate, make_fincat
from .labels import Label, label_key
from .poly import (
    Poly,
    PolyMor,
    compose_all,
    compose_tri,
    compose_tri_mor,
    identity_y,
    linear,
    mor_compose,
    mor_id,
    mor_inverse,
    p_star,
    then_at,
    tri_associator_at,
    tri_mor_at,
    tri_associator,
    tri_left_unitor,
    tri_right_unitor,
)
from .presheaf import Presheaf, PshMor, make_pshmor, pshmor_validate, pullback_presheaf, presheaf_validate
from .psh_poly import (
    PshPoly,
    PshPolyMor,
    make_pshpolymor,
    psh_compose_tri,
    psh_compose_tri_mor,
    psh_identity_y,
    psh_mor_compose,
    psh_mor_id,
    psh_tri_associator,
    psh_tri_left_unitor,
    psh_tri_right_unitor,
    _fiber_table,
)
from .sets import FinFn, FinSet
from .structures import frown_transpose, frown_untranspose, rc_transpose, rc_untranspose, right_coclosure


@dataclass(frozen=True, eq=False)
class Comonoid:
    carrier: Poly | PshPoly
    counit: PolyMor | PshPolyMor
    comult: PolyMor | PshPolyMor

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Comonoid)
            and self.carrier == other.carrier
            and self.counit == other.counit
            and self.comult == other.comult
        )

    def __hash__(self):
        return hash(self.carrier)

    # dictionary accessors (finite-set base)
    def identity_at(self, x: Label) -> Label:
        return self.counit.on_dir[x][()]

    def target(self, x: Label, d: Label) -> Label:
        return dict(self.comult.on_pos[x][1])[d]

    def compose_at(self, x: Label, d: Label, d2: Label) -> Label:
        """The composite of d out of x followed by d2."""
        return self.comult.on_dir[x][(d, d2)]


def _ops(carrier):
    if isinstance(carrier, Poly):
        return SimpleNamespace(
            y=identity_y(),
            tri=compose_tri,
            tri_mor=compose_tri_mor,
            comp=mor_compose,
            id=mor_id,
            lam=tri_left_unitor,
            rho=tri_right_unitor,
            alpha=tri_associator,
        )
    return SimpleNamespace(
        y=psh_identity_y(carrier.base),
        tri=psh_compose_tri,
        tri_mor=psh_compose_tri_mor,
        comp=psh_mor_compose,
        id=psh_mor_id,
        lam=psh_tri_left_unitor,
        rho=psh_tri_right_unitor,
        alpha=psh_tri_associator,
    )


def comonoid_check(c: Comonoid, budget: int | None = None, materialize: bool = False) -> Report:
    """Left counit, right counit and coassociativity as equalities of maps.

    Over finite sets the two sides of each law are evaluated position by
    position, which avoids building c ◁ c ◁ c. ``materialize=True`` builds
    every composite map in full instead; presheaf bases always do.
    """
    if isinstance(c.carrier, Poly) and not materialize:
        return _comonoid_check_pointwise(c, budget)
    r = Report("comonoid")
    ops = _ops(c.carrier)
    C = c.carrier
    cc = ops.tri(C, C, budget)
    if c.counit.dom != C or c.counit.cod != ops.y:
        r.add("counit typing", None)
    if c.comult.dom != C or c.comult.cod != cc:
        r.add("comultiplication typing", None)
    if not r.ok:
        return r
    i = ops.id(C)
    eps, delta = c.counit, c.comult
    lhs = ops.comp(ops.comp(delta, ops.tri_mor(eps, i, budget)), ops.lam(C))
    if lhs != i:
        r.add("left counit", lhs.first_difference(i))
    rhs = ops.comp(ops.comp(delta, ops.tri_mor(i, eps, budget)), ops.rho(C))
    if rhs != i:
        r.add("right counit", rhs.first_difference(i))
    a = ops.comp(ops.comp(delta, ops.tri_mor(delta, i, budget)), ops.alpha(C, C, C, budget))
    b = ops.comp(delta, ops.tri_mor(i, delta, budget))
    if a != b:
        r.add("coassociativity", a.first_difference(b))
    return r


def _first_gap(x, got, want) -> dict:
    """Where two pointwise values at x first differ."""
    if got[0] != want[0]:
        return {"object": x, "position": got[0], "expected": want[0]}
    for e in sorted(want[1], key=label_key):
        if got[1][e] != want[1][e]:
            return {"object": x, "direction": e, "got": got[1][e], "expected": want[1][e]}
    return {"object": x}


def _comonoid_check_pointwise(c: Comonoid, budget=None) -> Report:
    r = Report("comonoid")
    C = c.carrier
    y = identity_y()
    if c.counit.dom != C or c.counit.cod != y:
        r.add("counit typing", None)
    if c.comult.dom != C or c.comult.cod != compose_tri(C, C, budget):
        r.add("comultiplication typing", None)
    if not r.ok:
        return r
    eps, delta = c.counit, c.comult
    i = mor_id(C)
    for x in C.positions:
        ident = (x, {d: d for d in C.dirs[x]})
        dx = (delta.on_pos[x], delta.on_dir[x])
        X = dx[0]
        Y, b = tri_mor_at(eps, i, X)
        J = Y[1][0][1]
        lam = then_at(dx, then_at((Y, b), (J, {e: ((), e) for e in C.dirs[J]})))
        if lam != ident:
            r.add("left counit", _first_gap(x, lam, ident))
        Y, b = tri_mor_at(i, eps, X)
        rho = then_at(dx, then_at((Y, b), (Y[0], {d: (d, ()) for d in C.dirs[Y[0]]})))
        if rho != ident:
            r.add("right counit", _first_gap(x, rho, ident))
        Z, b1 = tri_mor_at(delta, i, X)
        lhs = then_at(dx, then_at((Z, b1), tri_associator_at(C, C, Z)))
        rhs = then_at(dx, tri_mor_at(i, delta, X))
        if lhs != rhs:
            r.add("coassociativity", _first_gap(x, lhs, rhs))
    return r


# ---- finite categories ↔ comonoids ---------------------------------------------------------


def cat_to_comonoid(C):
    """The comonoid whose carrier has c[x] = morphisms out of x."""
    if isinstance(C, PshInternalCategory):
        return _psh_cat_to_comonoid(C)
    rep = fincat_validate(C)
    rep.raise_if_failed()
    carrier = Poly({x: C.outgoing(x) for x in C.objects})
    y = identity_y()
    counit = PolyMor(carrier, y, {x: () for x in C.objects}, {x: {(): C.id(x)} for x in C.objects}, check=False)
    on_pos, on_dir = {}, {}
    for x in C.objects:
        out = carrier.dirs[x]
        on_pos[x] = (x, tuple((m, C.tgt.map[m]) for m in out))
        on_dir[x] = {(m, m2): C.comp(m2, m) for m in out for m2 in carrier.dirs[C.tgt.map[m]]}
    comult = PolyMor(carrier, compose_tri(carrier, carrier), on_pos, on_dir, check=False)
    return Comonoid(carrier, counit, comult)


def morphism_labels(carrier: Poly) -> dict:
    """(x, d) ↦ morphism label: d itself when directions are globally
    distinct, otherwise the pair (x, d)."""
    total = carrier.total()
    if len({d for _, d in total}) == len(total):
        return {(x, d): d for x, d in total}
    return {(x, d): (x, d) for x, d in total}


def translate_to_cat(c: Comonoid) -> FinCat:
    """Read (s, t, i, k) off a candidate (ε, δ) without checking laws.

    Raises :class:`InvalidStructure` when the data does not even have the
    shape of a category: δ1 must keep each position fixed.
    """
    C = c.carrier
    for x in C.positions:
        if c.comult.on_pos[x][0] != x:
            raise InvalidStructure(f"comultiplication moves position {x!r}")
    lab = morphism_labels(C)
    morphisms, ids, comp = {}, {}, {}
    for (x, d), m in lab.items():
        morphisms[m] = (x, c.target(x, d))
    for x in C.positions:
        ids[x] = lab[(x, c.identity_at(x))]
        for d in C.dirs[x]:
            t = c.target(x, d)
            for d2 in C.dirs[t]:
                comp[(lab[(t, d2)], lab[(x, d)])] = lab[(x, c.compose_at(x, d, d2))]
    return make_fincat(C.positions, morphisms, ids, comp)


def comonoid_to_cat(c: Comonoid, budget: int | None = None):
    if isinstance(c.carrier, PshPoly):
        return _psh_comonoid_to_cat(c, budget)
    comonoid_check(c, budget).raise_if_failed()
    return translate_to_cat(c)


# ---- cofunctors -----------------------------------------------------------------------


@dataclass
class CofunctorReport:
    homomorphism: Report
    cofunctor: Report

    @property
    def agree(self) -> bool:
        return self.homomorphism.ok == self.cofunctor.ok

    @property
    def ok(self) -> bool:
        return self.homomorphism.ok and self.cofunctor.ok


def cofunctor_check(phi: PolyMor, c: Comonoid, d: Comonoid, budget: int | None = None) -> CofunctorReport:
    """Check φ : c → d both as a comonoid map and through the category dictionary."""
    if phi.dom != c.carrier or phi.cod != d.carrier:
        raise TypeMismatch("cofunctor endpoints do not match the comonoid carriers")
    hom = Report("comonoid homomorphism")
    lhs = mor_compose(phi, d.counit)
    if lhs != c.counit:
        hom.add("counit", lhs.first_difference(c.counit))
    a = mor_compose(phi, d.comult)
    b = mor_compose(c.comult, compose_tri_mor(phi, phi, budget))
    if a != b:
        hom.add("comultiplication", a.first_difference(b))

    cof = Report("cofunctor")
    for x in c.carrier.positions:
        fx = phi.on_pos[x]
        back = phi.on_dir[x]
        if back[d.identity_at(fx)] != c.identity_at(x):
            cof.add("identity", x)
        for e in d.carrier.dirs[fx]:
            s = back[e]
            if phi.on_pos[c.target(x, s)] != d.target(fx, e):
                cof.add("target", (x, e))
                continue
            t = c.target(x, s)
            for e2 in d.carrier.dirs[d.target(fx, e)]:
                if back[d.compose_at(fx, e, e2)] != c.compose_at(x, s, phi.on_dir[t][e2]):
                    cof.add("composition", (x, e, e2))
    return CofunctorReport(hom, cof)


# ---- named comonoids ---------------------------------------------------------------------


def discrete_comonoid(A) -> Comonoid:
    """Ay with counit and comultiplication the canonical ones."""
    A = A if isinstance(A, FinSet) else FinSet(A)
    carrier = linear(A)
    counit = PolyMor(carrier, identity_y(), {a: () for a in A}, {a: {(): ()} for a in A}, check=False)
    comult = PolyMor(
        carrier,
        compose_tri(carrier, carrier),
        {a: (a, (((), a),)) for a in A},
        {a: {((), ()): ()} for a in A},
        check=False,
    )
    return Comonoid(carrier, counit, comult)


def pstar_comonoid(p: Poly, budget: int | None = None) -> Comonoid:
    """p_* as a comonoid: indiscrete on each fiber of p_* → p.

    The direction e at (I, d) is the morphism (I, d) → (I, e); composing
    e then e' gives e'.
    """
    ps, _ = p_star(p)
    cc = compose_tri(ps, ps, budget)
    counit = PolyMor(ps, identity_y(), {X: () for X in ps.positions}, {(I, d): {(): d} for I, d in ps.positions}, check=False)
    on_pos, on_dir = {}, {}
    for I, d in ps.positions:
        on_pos[(I, d)] = ((I, d), tuple((e, (I, e)) for e in p.dirs[I]))
        on_dir[(I, d)] = {(e, e2): e2 for e in p.dirs[I] for e2 in p.dirs[I]}
    return Comonoid(ps, counit, PolyMor(ps, cc, on_pos, on_dir, check=False))


def _table_compose(h: tuple, g: tuple) -> tuple:
    """Tables of g : A → B then h : B → C, as a table of A → C."""
    hd = dict(h)
    return tuple((a, hd[b]) for a, b in g)


def selfclosure_comonoid(p: Poly, budget: int | None = None) -> Comonoid:
    """⟨p|p⟩ as a comonoid: morphisms I → J are functions p[J] → p[I].

    The direction (J, h) at I targets J; (J, h) then (K, g) composes to
    (K, h ∘ g).
    """
    C = right_coclosure(p, p, budget)
    cc = compose_tri(C, C, budget)
    ident = {I: (I, tuple((d, d) for d in p.dirs[I])) for I in p.positions}
    counit = PolyMor(C, identity_y(), {I: () for I in p.positions}, {I: {(): ident[I]} for I in p.positions}, check=False)
    on_pos, on_dir = {}, {}
    for I in p.positions:
        out = C.dirs[I]
        on_pos[I] = (I, tuple((jh, jh[0]) for jh in out))
        on_dir[I] = {((J, h), (K, g)): (K, _table_compose(h, g)) for J, h in out for K, g in C.dirs[J]}
    return Comonoid(C, counit, PolyMor(C, cc, on_pos, on_dir, check=False))


def pstar_comonoid_by_transpose(p: Poly, budget: int | None = None) -> Comonoid:
    """p_* as a comonoid, obtained by transposing across the indexed left coclosure.

    The counit transposes ρ⁻¹ : p → p ◁ y and the comultiplication transposes
    p → p ◁ p_* → (p ◁ p_*) ◁ p_* → p ◁ (p_* ◁ p_*), built from the unit
    p → p ◁ p_* at the identity index.
    """
    ps, _ = p_star(p)
    f_id, counit = frown_transpose(mor_inverse(tri_right_unitor(p)), p, identity_y(), budget)
    idx = FinFn(p.positions, p.positions, {I: I for I in p.positions})
    eta = frown_untranspose(idx, mor_id(ps), p, p, budget)
    twice = compose_all(eta, compose_tri_mor(eta, mor_id(ps), budget), tri_associator(p, ps, ps, budget))
    f2, comult = frown_transpose(twice, p, compose_tri(ps, ps, budget), budget)
    if f_id != idx or f2 != idx:
        raise InvalidStructure("transposed structure maps are not indexed by the identity")
    return Comonoid(ps, counit, comult)


def selfclosure_comonoid_by_transpose(p: Poly, budget: int | None = None) -> Comonoid:
    """⟨p|p⟩ as a comonoid, by transposing λ⁻¹ and the doubled unit."""
    C = right_coclosure(p, p, budget)
    counit = rc_transpose(mor_inverse(tri_left_unitor(p)), identity_y(), p, budget)
    eta = rc_untranspose(mor_id(C), p, p, budget)
    twice = compose_all(
        eta,
        compose_tri_mor(mor_id(C), eta, budget),
        mor_inverse(tri_associator(C, C, p, budget)),
    )
    comult = rc_transpose(twice, compose_tri(C, C, budget), p, budget)
    return Comonoid(C, counit, comult)


# ---- internal categories in presheaves --------------------------------------------------


@dataclass(frozen=True, eq=False)
class PshInternalCategory:
    """(C0, C1, s, t, i, k) in presheaves; k is defined on pairs (f, g) with t f = s g."""

    C0: Presheaf
    C1: Presheaf
    s: PshMor
    t: PshMor
    i: PshMor
    k: PshMor

    def __eq__(self, other) -> bool:
        return isinstance(other, PshInternalCategory) and all(
            getattr(self, n) == getattr(other, n) for n in ("C0", "C1", "s", "t", "i", "k")
        )

    def __hash__(self):
        return hash(self.C0)

    @property
    def base(self):
        return self.C0.base

    def component(self, a) -> FinCat:
        """The ordinary category at object a of the base."""
        ms = {m: (self.s(a, m), self.t(a, m)) for m in self.C1.at[a]}
        ids = {x: self.i(a, x) for x in self.C0.at[a]}
        comp = {(g, f): self.k(a, (f, g)) for f, g in self.k.dom.at[a]}
        return make_fincat(self.C0.at[a], ms, ids, comp)


def psh_internal_validate(C: PshInternalCategory) -> Report:
    r = Report("internal category")
    for X in (C.C0, C.C1):
        r.violations.extend(presheaf_validate(X).violations)
    for m in (C.s, C.t, C.i, C.k):
        r.violations.extend(pshmor_validate(m).violations)
    if not r.ok:
        return r
    pb, _, _ = pullback_presheaf(C.t, C.s)
    if C.k.dom != pb:
        r.add("composition domain", None)
        return r
    for a in C.base.objects:
        for law, w in fincat_validate(C.component(a)).violations:
            r.add(law, (a, w))
    return r


def internal_category(C0: Presheaf, C1: Presheaf, s, t, i, k) -> PshInternalCategory:
    """Build from functions ``s(a, m)``, ``t(a, m)``, ``i(a, x)`` and ``k(a, f, g)``."""
    S = make_pshmor(C1, C0, s)
    T = make_pshmor(C1, C0, t)
    I = make_pshmor(C0, C1, i)
    pb, _, _ = pullback_presheaf(T, S)
    K = make_pshmor(pb, C1, lambda a, fg: k(a, fg[0], fg[1]))
    return PshInternalCategory(C0, C1, S, T, I, K)


def _psh_cat_to_comonoid(C: PshInternalCategory) -> Comonoid:
    psh_internal_validate(C).raise_if_failed()
    carrier = PshPoly(C.s)
    base = C.base
    y = psh_identity_y(base)
    counit = make_pshpolymor(carrier, y, lambda a, x: (), lambda a, x, e: C.i(a, x))

    def pos(a, x):
        return (x, tuple(((c, (v, e)), C.t(c, e)) for c, (v, e) in _fiber_table(carrier, a, x)))

    cc = psh_compose_tri(carrier, carrier)
    comult = make_pshpolymor(carrier, cc, pos, lambda a, x, d: C.k(a, d[1]))
    return Comonoid(carrier, counit, comult)


def _psh_comonoid_to_cat(c: Comonoid, budget=None) -> PshInternalCategory:
    comonoid_check(c, budget).raise_if_failed()
    carrier = c.carrier
    base = carrier.base
    C0, C1 = carrier.positions, carrier.total

    def t(a, e):
        x = carrier.proj(a, e)
        return dict(c.comult.phi1(a, x)[1])[(a, (base.id(a), e))]

    def k(a, f, g):
        x = carrier.proj(a, f)
        return c.comult.phisharp(a, (x, (c.comult.phi1(a, x), (f, g))))

    return internal_category(
        C0,
        C1,
        lambda a, e: carrier.proj(a, e),
        t,
        lambda a, x: c.counit.phisharp(a, (x, ())),
        k,
    )


def internal_category_from_functor(base: FinCat, cats: Mapping, functors: Mapping) -> PshInternalCategory:
    """Internal category in presheaves on a base with no composable
    non-identity pairs: a category per object and, for each non-identity
    u : b → a, a functor cats[a] → cats[b] given as (object map, morphism map)."""
    from .presheaf import make_presheaf

    def action(kind):
        acts = {}
        for u in base.morphisms:
            a = base.tgt.map[u]
            if base.id(a) == u:
                continue
            acts[u] = dict(functors[u][kind])
        return acts

    C0 = make_presheaf(base, {a: cats[a].objects for a in base.objects}, action(0))
    C1 = make_presheaf(base, {a: cats[a].morphisms for a in base.objects}, action(1))
    return internal_category(
        C0,
        C1,
        lambda a, m: cats[a].src.map[m],
        lambda a, m: cats[a].tgt.map[m],
        lambda a, x: cats[a].id(x),
        lambda a, f, g: cats[a].comp(g, f),
    )
