"""Bicomodules between comonoids, typed polynomials and data migration.

A (c, d)-bicomodule is a polynomial m with a left coaction ``m → c ◁ m`` and
a right coaction ``m → m ◁ d``. Composition over d is an equalizer of the two
maps ``m ◁ n ⇉ m ◁ d ◁ n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .coalgebra import Coalgebra, coalg_check, make_coalgebra, coalg_homs
from .comonoid import Comonoid, discrete_comonoid
from .errors import InvalidStructure, TypeMismatch, check_budget
from .fincat import Report
from .labels import Label
from .limits import cartesian_limit, poly_equalizer
from .poly import (
    Poly,
    PolyMor,
    compose_all,
    compose_tri,
    compose_tri_mor,
    hom_enumerate,
    is_cartesian,
    is_iso,
    mor_compose,
    mor_id,
    mor_inverse,
    tri_associator,
    tri_left_unitor,
    tri_right_unitor,
)
from .sets import FinFn, FinSet


@dataclass(frozen=True, eq=False)
class Bicomodule:
    m: Poly
    c: Comonoid
    d: Comonoid
    left: PolyMor  # m → c ◁ m
    right: PolyMor  # m → m ◁ d

    def __eq__(self, other) -> bool:
        return isinstance(other, Bicomodule) and all(
            getattr(self, k) == getattr(other, k) for k in ("m", "c", "d", "left", "right")
        )

    def __hash__(self):
        return hash(self.m)


def left_comodule_check(m: Poly, c: Comonoid, kappa: PolyMor, budget=None) -> Report:
    r = Report("left comodule")
    C = c.carrier
    if kappa.dom != m or kappa.cod != compose_tri(C, m, budget):
        r.add("coaction typing", None)
        return r
    i = mor_id(m)
    a = compose_all(kappa, compose_tri_mor(c.counit, i, budget), tri_left_unitor(m))
    if a != i:
        r.add("counit", a.first_difference(i))
    lhs = compose_all(kappa, compose_tri_mor(c.comult, i, budget), tri_associator(C, C, m, budget))
    rhs = compose_all(kappa, compose_tri_mor(mor_id(C), kappa, budget))
    if lhs != rhs:
        r.add("coassociativity", lhs.first_difference(rhs))
    if r.ok:
        for law, w in coalg_check(left_coalgebra(m, c, kappa)).violations:
            r.add(f"induced coalgebra {law}", w)
    return r


def right_comodule_check(m: Poly, d: Comonoid, chi: PolyMor, budget=None) -> Report:
    r = Report("right comodule")
    D = d.carrier
    if chi.dom != m or chi.cod != compose_tri(m, D, budget):
        r.add("coaction typing", None)
        return r
    i = mor_id(m)
    a = compose_all(chi, compose_tri_mor(i, d.counit, budget), tri_right_unitor(m))
    if a != i:
        r.add("counit", a.first_difference(i))
    lhs = compose_all(chi, compose_tri_mor(chi, mor_id(D), budget), tri_associator(m, D, D, budget))
    rhs = compose_all(chi, compose_tri_mor(i, d.comult, budget))
    if lhs != rhs:
        r.add("coassociativity", lhs.first_difference(rhs))
    if r.ok:
        for law, w in coalg_check(right_coalgebra(m, d, chi)).violations:
            r.add(f"induced coalgebra {law}", w)
    return r


def left_coalgebra(m: Poly, c: Comonoid, kappa: PolyMor) -> Coalgebra:
    """The c-coalgebra on the positions of a left comodule."""
    return make_coalgebra(
        c,
        m.positions,
        lambda x: kappa.on_pos[x][0],
        lambda x, j: dict(kappa.on_pos[x][1])[j],
    )


def right_coalgebra(m: Poly, d: Comonoid, chi: PolyMor) -> Coalgebra:
    """The d-coalgebra on pairs (x, e) with e ∈ m[x]."""
    S = FinSet((x, e) for x in m.positions for e in m.dirs[x])
    return make_coalgebra(
        d,
        S,
        lambda xe: dict(chi.on_pos[xe[0]][1])[xe[1]],
        lambda xe, k: (xe[0], chi.on_dir[xe[0]][(xe[1], k)]),
    )


def bicomodule_check(b: Bicomodule, budget=None) -> Report:
    r = Report("bicomodule")
    r.violations.extend(left_comodule_check(b.m, b.c, b.left, budget).violations)
    r.violations.extend(right_comodule_check(b.m, b.d, b.right, budget).violations)
    if not r.ok:
        return r
    C, D, m = b.c.carrier, b.d.carrier, b.m
    lhs = compose_all(b.right, compose_tri_mor(b.left, mor_id(D), budget), tri_associator(C, m, D, budget))
    rhs = compose_all(b.left, compose_tri_mor(mor_id(C), b.right, budget))
    if lhs != rhs:
        r.add("coactions commute", lhs.first_difference(rhs))
    return r


def identity_bicomodule(c: Comonoid) -> Bicomodule:
    return Bicomodule(c.carrier, c, c, c.comult, c.comult)


# ---- composition over d --------------------------------------------------------------


def _parallel_pair(b1: Bicomodule, b2: Bicomodule, budget=None):
    if b1.d != b2.c:
        raise TypeMismatch("bicomodules do not share the middle comonoid")
    m, n, D = b1.m, b2.m, b1.d.carrier
    f1 = compose_all(compose_tri_mor(b1.right, mor_id(n), budget), tri_associator(m, D, n, budget))
    f2 = compose_tri_mor(mor_id(m), b2.left, budget)
    return compose_tri(m, n, budget), f1, f2


def _left_on(b1: Bicomodule, b2: Bicomodule, A: Poly, budget=None) -> PolyMor:
    """c-coaction on m ◁ n: A → c ◁ (m ◁ n)."""
    C = b1.c.carrier
    return compose_all(
        compose_tri_mor(b1.left, mor_id(b2.m), budget),
        tri_associator(C, b1.m, b2.m, budget),
    )


def _right_on(b1: Bicomodule, b2: Bicomodule, A: Poly, budget=None) -> PolyMor:
    """e-coaction on m ◁ n: A → (m ◁ n) ◁ e."""
    E = b2.d.carrier
    return compose_all(
        compose_tri_mor(mor_id(b1.m), b2.right, budget),
        mor_inverse(tri_associator(b1.m, b2.m, E, budget)),
    )


def bicomod_compose(b1: Bicomodule, b2: Bicomodule, budget=None) -> tuple[Bicomodule, PolyMor]:
    """m ⊗_d n for a right coaction and left coaction that are cartesian.

    The equalizer is computed as a limit of cartesian maps; positions are
    the positions of m ◁ n that it keeps. Returns the composite and its
    inclusion into m ◁ n.
    """
    if not is_cartesian(b1.right) or not is_cartesian(b2.left):
        raise TypeMismatch("cartesian composition needs cartesian inner coactions")
    A, f1, f2 = _parallel_pair(b1, b2, budget)
    L, cone = cartesian_limit({0: A, 1: f1.cod}, [(0, 1, f1), (0, 1, f2)], budget)
    keep = [fam[0] for fam in L.positions]
    N = Poly({x: A.dirs[x] for x in keep})
    inc = PolyMor(N, A, {x: x for x in keep}, {x: {e: e for e in A.dirs[x]} for x in keep}, check=False)
    return _restrict(b1, b2, A, N, inc, {x: {e: e for e in A.dirs[x]} for x in keep}, budget), inc


def bicomod_compose_general(b1: Bicomodule, b2: Bicomodule, budget=None) -> tuple[Bicomodule, PolyMor]:
    """m ⊗_d n through the general equalizer, whose fibers are quotients.

    Checks afterwards that ``- ◁ e`` carries this equalizer to an equalizer,
    raising :class:`InvalidStructure` otherwise.
    """
    A, f1, f2 = _parallel_pair(b1, b2, budget)
    N, inc = poly_equalizer(f1, f2)
    E = b2.d.carrier
    e_id = mor_id(E)
    N2, inc2 = poly_equalizer(compose_tri_mor(f1, e_id, budget), compose_tri_mor(f2, e_id, budget))
    via = compose_tri_mor(inc, e_id, budget)
    on_pos, on_dir = {}, {}
    for z in via.dom.positions:
        w = via.on_pos[z]
        if w not in N2.dirs:
            raise InvalidStructure("right whiskering does not preserve the equalizer")
        on_pos[z] = w
        back = {}
        for cls in N2.dirs[w]:
            members = {via.on_dir[z][u] for u, r in inc2.on_dir[w].items() if r == cls}
            if len(members) != 1:
                raise InvalidStructure("right whiskering does not preserve the equalizer")
            back[cls] = members.pop()
        on_dir[z] = back
    if not is_iso(PolyMor(via.dom, N2, on_pos, on_dir, check=False)):
        raise InvalidStructure("right whiskering does not preserve the equalizer")
    return _restrict(b1, b2, A, N, inc, inc.on_dir, budget), inc


def _restrict(b1, b2, A, N, inc, rep, budget) -> Bicomodule:
    """Restrict the outer coactions of m ◁ n to the equalizer N.

    ``rep[x]`` sends each direction of m ◁ n at x to its class in N[x].
    """
    K = _left_on(b1, b2, A, budget)
    R = _right_on(b1, b2, A, budget)
    C, E = b1.c.carrier, b2.d.carrier
    cN, Ne = compose_tri(C, N, budget), compose_tri(N, E, budget)

    kp, kd = {}, {}
    for x in N.positions:
        J, F = K.on_pos[x]
        if any(v not in N.dirs for _, v in F):
            raise InvalidStructure(f"left coaction leaves the equalizer at {x!r}")
        kp[x] = (J, F)
        kd[x] = {(j, cls): rep[x][K.on_dir[x][(j, cls)]] for j, v in F for cls in N.dirs[v]}
        for j, v in F:
            for u in A.dirs[v]:
                if rep[x][K.on_dir[x][(j, u)]] != kd[x][(j, rep[v][u])]:
                    raise InvalidStructure("left coaction is not defined on classes")
    rp, rd = {}, {}
    for x in N.positions:
        x2, g = R.on_pos[x]
        if x2 != x:
            raise InvalidStructure(f"right coaction moves position {x!r}")
        gd = dict(g)
        if any(gd[u] != gd[rep[x][u]] for u in A.dirs[x]):
            raise InvalidStructure("right coaction is not defined on classes")
        rp[x] = (x, tuple((cls, gd[cls]) for cls in N.dirs[x]))
        rd[x] = {}
        for cls in N.dirs[x]:
            for k in E.dirs[gd[cls]]:
                imgs = {rep[x][R.on_dir[x][(u, k)]] for u in A.dirs[x] if rep[x][u] == cls}
                if len(imgs) != 1:
                    raise InvalidStructure("right coaction is not defined on classes")
                rd[x][(cls, k)] = imgs.pop()
    left = PolyMor(N, cN, kp, kd)
    right = PolyMor(N, Ne, rp, rd)
    out = Bicomodule(N, b1.c, b2.d, left, right)
    bicomodule_check(out, budget).raise_if_failed()
    return out


# ---- homomorphisms ------------------------------------------------------------------------


def is_bicomod_hom(h: PolyMor, b1: Bicomodule, b2: Bicomodule, budget=None) -> bool:
    if h.dom != b1.m or h.cod != b2.m:
        raise TypeMismatch("bicomodule map endpoints do not match")
    l = mor_compose(b1.left, compose_tri_mor(mor_id(b1.c.carrier), h, budget)) == mor_compose(h, b2.left)
    r = mor_compose(b1.right, compose_tri_mor(h, mor_id(b1.d.carrier), budget)) == mor_compose(h, b2.right)
    return l and r


def bicomod_homs(b1: Bicomodule, b2: Bicomodule, budget=None) -> list[PolyMor]:
    return [h for h in hom_enumerate(b1.m, b2.m, budget) if is_bicomod_hom(h, b1, b2, budget)]


# ---- typed polynomials (discrete comonoids) ----------------------------------------------


@dataclass(frozen=True, eq=False)
class TypedPoly:
    """D ← M_* → M → C: ``src`` types directions, ``tgt`` types positions."""

    m: Poly
    src: FinFn  # elements (x, e) → D
    tgt: FinFn  # positions → C

    def __eq__(self, other) -> bool:
        return isinstance(other, TypedPoly) and (self.m, self.src, self.tgt) == (other.m, other.src, other.tgt)

    def __hash__(self):
        return hash(self.m)

    @property
    def C(self) -> FinSet:
        return self.tgt.cod

    @property
    def D(self) -> FinSet:
        return self.src.cod


def make_typed(m: Poly, C, D, src, tgt) -> TypedPoly:
    C = C if isinstance(C, FinSet) else FinSet(C)
    D = D if isinstance(D, FinSet) else FinSet(D)
    sf = src if callable(src) else (lambda x, e: src[(x, e)])
    tf = tgt if callable(tgt) else tgt.__getitem__
    tot = FinSet((x, e) for x in m.positions for e in m.dirs[x])
    return TypedPoly(m, FinFn(tot, D, {(x, e): sf(x, e) for x, e in tot}), FinFn(m.positions, C, {x: tf(x) for x in m.positions}))


def typed_compose(p: TypedPoly, q: TypedPoly, budget=None) -> TypedPoly:
    """p : D → C after q : E → D; positions (I, f) with f typed-compatible."""
    if p.D != q.C:
        raise TypeMismatch("typed polynomials do not share the middle set")
    by_type: dict = {}
    for J in q.m.positions:
        by_type.setdefault(q.tgt.map[J], []).append(J)
    dirs, src, tgt = {}, {}, {}
    for I in p.m.positions:
        ds = p.m.dirs[I].elements
        choices = [by_type.get(p.src.map[(I, d)], []) for d in ds]
        n = 1
        for ch in choices:
            n *= len(ch)
        check_budget(n, budget, "typed composite")
        for Js in itertools.product(*choices):
            f = tuple(zip(ds, Js))
            pos = (I, f)
            dirs[pos] = [(d, e) for d, J in f for e in q.m.dirs[J]]
            tgt[pos] = p.tgt.map[I]
            for d, J in f:
                for e in q.m.dirs[J]:
                    src[(pos, (d, e))] = q.src.map[(J, e)]
    return make_typed(Poly(dirs), p.C, q.D, lambda x, e: src[(x, e)], tgt.__getitem__)


def bicomod_from_typed(t: TypedPoly) -> Bicomodule:
    c, d, m = discrete_comonoid(t.C), discrete_comonoid(t.D), t.m
    left = PolyMor(
        m,
        compose_tri(c.carrier, m),
        {x: (t.tgt.map[x], (((), x),)) for x in m.positions},
        {x: {((), e): e for e in m.dirs[x]} for x in m.positions},
    )
    right = PolyMor(
        m,
        compose_tri(m, d.carrier),
        {x: (x, tuple((e, t.src.map[(x, e)]) for e in m.dirs[x])) for x in m.positions},
        {x: {(e, ()): e for e in m.dirs[x]} for x in m.positions},
    )
    return Bicomodule(m, c, d, left, right)


def _discrete_set(c: Comonoid) -> FinSet:
    C = c.carrier
    if any(len(C.dirs[x]) != 1 for x in C.positions):
        raise TypeMismatch("comonoid is not discrete")
    return C.positions


def typed_from_bicomod(b: Bicomodule) -> TypedPoly:
    C, D = _discrete_set(b.c), _discrete_set(b.d)
    return make_typed(
        b.m,
        C,
        D,
        lambda x, e: dict(b.right.on_pos[x][1])[e],
        lambda x: b.left.on_pos[x][0],
    )


def is_typed_hom(h: PolyMor, p: TypedPoly, q: TypedPoly) -> bool:
    """A map of polynomials preserving both typings."""
    for x in p.m.positions:
        y = h.on_pos[x]
        if q.tgt.map[y] != p.tgt.map[x]:
            return False
        for e in q.m.dirs[y]:
            if p.src.map[(x, h.on_dir[x][e])] != q.src.map[(y, e)]:
                return False
    return True


def typed_homs(p: TypedPoly, q: TypedPoly, budget=None) -> list[PolyMor]:
    return [h for h in hom_enumerate(p.m, q.m, budget) if is_typed_hom(h, p, q)]


# ---- data migration ----------------------------------------------------------------------


def migrate(b: Bicomodule, X: Coalgebra, budget: int | None = None) -> Coalgebra:
    """Carry a d-coalgebra to a c-coalgebra.

    Elements are pairs (x, g) with x a position of m and g a table m[x] → S
    on which the two maps P(m)(S) ⇉ P(m)(P(d)(S)) agree.
    """
    if X.comonoid != b.d:
        raise TypeMismatch("coalgebra is over the wrong comonoid")
    m, chi, kappa = b.m, b.right, b.left
    S = X.S
    check_budget(sum(len(S) ** len(m.dirs[x]) for x in m.positions), budget, "migration")
    keep = []
    for x in m.positions:
        es = m.dirs[x].elements
        x2, h = chi.on_pos[x]
        hd = dict(h)
        for imgs in itertools.product(S.elements, repeat=len(es)):
            g = dict(zip(es, imgs))
            # P(m)(κ_X) against the comparison after P(χ)_S
            first = tuple((e, X.structure(g[e])) for e in es)
            second = tuple(
                (e, (hd[e], tuple((k, g[chi.on_dir[x][(e, k)]]) for k in b.d.carrier.dirs[hd[e]]))) for e in es
            )
            if x2 == x and first == second:
                keep.append((x, tuple(zip(es, imgs))))
    carrier = FinSet(keep)

    def act(el, j):
        x, g = el
        gd = dict(g)
        _, F = kappa.on_pos[x]
        x2 = dict(F)[j]
        return (x2, tuple((e2, gd[kappa.on_dir[x][(j, e2)]]) for e2 in m.dirs[x2]))

    return make_coalgebra(b.c, carrier, lambda el: kappa.on_pos[el[0]][0], act)


def migrate_hom(b: Bicomodule, h: FinFn, X: Coalgebra, Y: Coalgebra, budget=None) -> FinFn:
    MX, MY = migrate(b, X, budget), migrate(b, Y, budget)
    hm = h.map
    return FinFn(MX.S, MY.S, {(x, g): (x, tuple((e, hm[s]) for e, s in g)) for x, g in MX.S})


def fiber_coalgebra(b: Bicomodule, x: Label) -> Coalgebra:
    """The d-coalgebra on m[x] induced by the right coaction."""
    full_dirs = b.m.dirs[x]
    chi = b.right
    hd = dict(chi.on_pos[x][1])
    return make_coalgebra(b.d, full_dirs, hd.__getitem__, lambda e, k: chi.on_dir[x][(e, k)])


def migrate_count_by_formula(b: Bicomodule, X: Coalgebra, budget=None) -> dict:
    """|migrate(X)| over each c-position, as a sum of coalgebra hom counts."""
    out = {J: 0 for J in b.c.carrier.positions}
    for x in b.m.positions:
        J = b.left.on_pos[x][0]
        out[J] += len(coalg_homs(fiber_coalgebra(b, x), X, budget))
    return out


def representable_bicomodule(d: Comonoid, a: Label) -> Bicomodule:
    """The (y, d)-bicomodule with one position whose fiber is d[a]."""
    y = discrete_comonoid(FinSet([()]))
    out = d.carrier.dirs[a]
    m = Poly({(): out})
    left = PolyMor(m, compose_tri(y.carrier, m), {(): ((), (((), ()),))}, {(): {((), e): e for e in out}})
    right = PolyMor(
        m,
        compose_tri(m, d.carrier),
        {(): ((), tuple((e, d.target(a, e)) for e in out))},
        {(): {(e, k): d.compose_at(a, e, k) for e in out for k in d.carrier.dirs[d.target(a, e)]}},
    )
    return Bicomodule(m, y, d, left, right)
