"""Coalgebras of a comonoid, discrete opfibrations and copresheaves.

A coalgebra of ``c`` on a set S is a position map ``κ1 : S → c(1)`` and an
action ``κ♯ : S ×_C C_* → S`` sending ``(s, (x, d))`` with ``κ1 s = x`` to the
codomain of ``d`` acting on ``s``. Laws are checked on the structure map
``S → P(c)(S)`` through the functor ``P``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .comonoid import Comonoid, comonoid_to_cat, cat_to_comonoid, cofunctor_check, morphism_labels
from .errors import InvalidStructure, TypeMismatch, check_budget
from .fincat import FinCat, Report, make_fincat, opposite
from .labels import Label
from .poly import Poly, PolyMor, is_cartesian, p_star
from .presheaf import Presheaf, make_presheaf, make_pshmor, enumerate_homs
from .sets import FinFn, FinSet, functions, pullback


def total_space(c: Comonoid) -> FinFn:
    """C_* → C(1): elements (x, d)."""
    ps, _ = p_star(c.carrier)
    return FinFn(ps.positions, c.carrier.positions, {(x, d): x for x, d in ps.positions})


@dataclass(frozen=True, eq=False)
class Coalgebra:
    comonoid: Comonoid
    S: FinSet
    kappa1: FinFn  # S → C(1)
    kappa_sharp: FinFn  # S ×_C C_* → S, elements (s, (x, d))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Coalgebra)
            and self.comonoid == other.comonoid
            and self.S == other.S
            and self.kappa1 == other.kappa1
            and self.kappa_sharp == other.kappa_sharp
        )

    def __hash__(self):
        return hash((self.S, self.kappa1))

    def act(self, s: Label, d: Label) -> Label:
        return self.kappa_sharp.map[(s, (self.kappa1.map[s], d))]

    def structure(self, s: Label) -> tuple:
        """κ(s) ∈ P(c)(S)."""
        x = self.kappa1.map[s]
        return (x, tuple((d, self.act(s, d)) for d in self.comonoid.carrier.dirs[x]))


def make_coalgebra(c: Comonoid, S, pos, act) -> Coalgebra:
    """From ``pos(s)`` and ``act(s, d)``; both may be dicts or callables."""
    S = S if isinstance(S, FinSet) else FinSet(S)
    pf = pos if callable(pos) else pos.__getitem__
    af = act if callable(act) else (lambda s, d: act[(s, d)])
    k1 = FinFn(S, c.carrier.positions, {s: pf(s) for s in S})
    pb, _, _ = pullback(k1, total_space(c))
    ks = FinFn(pb, S, {(s, (x, d)): af(s, d) for s, (x, d) in pb})
    return Coalgebra(c, S, k1, ks)


def _nat_point(phi: PolyMor, el: tuple) -> tuple:
    I, g = el
    gd = dict(g)
    J = phi.on_pos[I]
    return (J, tuple((e, gd[phi.on_dir[I][e]]) for e in phi.cod.dirs[J]))


def _comparison_point(q: Poly, el: tuple) -> tuple:
    (I, f), g = el
    gd = dict(g)
    return (I, tuple((d, (J, tuple((e, gd[(d, e)]) for e in q.dirs[J]))) for d, J in f))


def coalg_check(X: Coalgebra) -> Report:
    """Counit and comultiplication squares, evaluated pointwise on S."""
    r = Report("coalgebra")
    c = X.comonoid
    if X.kappa1.cod != c.carrier.positions or X.kappa1.dom != X.S:
        r.add("position map typing", None)
        return r
    pb, _, _ = pullback(X.kappa1, total_space(c))
    if X.kappa_sharp.dom != pb or X.kappa_sharp.cod != X.S:
        r.add("action typing", None)
        return r
    for s in X.S:
        ks = X.structure(s)
        if _nat_point(c.counit, ks) != ((), (((), s),)):
            r.add("counit", s)
        lhs = _comparison_point(c.carrier, _nat_point(c.comult, ks))
        rhs = (ks[0], tuple((d, X.structure(t)) for d, t in ks[1]))
        if lhs != rhs:
            r.add("comultiplication", s)
    return r


# ---- homomorphisms ------------------------------------------------------------------


def is_coalg_hom(h: FinFn, X: Coalgebra, Y: Coalgebra) -> bool:
    if h.dom != X.S or h.cod != Y.S:
        raise TypeMismatch("coalgebra map endpoints do not match")
    for s in X.S:
        t = h.map[s]
        if Y.kappa1.map[t] != X.kappa1.map[s]:
            return False
        for d in X.comonoid.carrier.dirs[X.kappa1.map[s]]:
            if h.map[X.act(s, d)] != Y.act(t, d):
                return False
    return True


def coalg_homs(X: Coalgebra, Y: Coalgebra, budget: int | None = None) -> list[FinFn]:
    """All coalgebra maps, by filtering every function S_X → S_Y."""
    out = []
    for m in functions(X.S, Y.S, budget):
        h = FinFn(X.S, Y.S, m)
        if is_coalg_hom(h, X, Y):
            out.append(h)
    return out


def enumerate_coalgebras(c: Comonoid, S, budget: int | None = None) -> list[Coalgebra]:
    """Every coalgebra structure on S, found by brute force over (κ1, κ♯)."""
    S = S if isinstance(S, FinSet) else FinSet(S)
    C = c.carrier
    out = []
    for k1 in functions(S, C.positions, budget):
        slots = [(s, d) for s in S for d in C.dirs[k1[s]]]
        check_budget(len(S) ** len(slots), budget, "coalgebra enumeration")
        for images in itertools.product(S.elements, repeat=len(slots)):
            act = dict(zip(slots, images))
            X = make_coalgebra(c, S, k1, act)
            if coalg_check(X).ok:
                out.append(X)
    return out


# ---- discrete opfibrations -------------------------------------------------------------


def coalg_to_opfib(X: Coalgebra) -> tuple[FinCat, PolyMor]:
    """The category of elements and its cartesian cofunctor to c.

    Objects are S and morphisms are pairs (s, d) with d ∈ c[κ1 s].
    """
    coalg_check(X).raise_if_failed()
    c = X.comonoid
    morphisms, ids, comp = {}, {}, {}
    for s in X.S:
        x = X.kappa1.map[s]
        ids[s] = (s, c.identity_at(x))
        for d in c.carrier.dirs[x]:
            t = X.act(s, d)
            morphisms[(s, d)] = (s, t)
            for d2 in c.carrier.dirs[c.target(x, d)]:
                comp[((t, d2), (s, d))] = (s, c.compose_at(x, d, d2))
    E = make_fincat(X.S, morphisms, ids, comp)
    e = cat_to_comonoid(E)
    phi = PolyMor(
        e.carrier,
        c.carrier,
        {s: X.kappa1.map[s] for s in X.S},
        {s: {d: (s, d) for d in c.carrier.dirs[X.kappa1.map[s]]} for s in X.S},
    )
    return E, phi


def opfib_to_coalg(d: Comonoid, phi: PolyMor, c: Comonoid) -> Coalgebra:
    """From a cartesian cofunctor d → c, the coalgebra on d's objects."""
    if not is_cartesian(phi):
        raise InvalidStructure("the cofunctor is not cartesian")
    rep = cofunctor_check(phi, d, c)
    if not rep.ok:
        raise InvalidStructure(f"not a cofunctor: {rep.cofunctor.violations[:1] or rep.homomorphism.violations[:1]}")
    S = d.carrier.positions
    return make_coalgebra(c, S, phi.on_pos, lambda s, m: d.target(s, phi.on_dir[s][m]))


# ---- copresheaves ------------------------------------------------------------------------


def coalg_to_copresheaf(X: Coalgebra) -> Presheaf:
    """Functor C → Set, as a presheaf on the opposite category.

    The value at x is the fiber of κ1 over x.
    """
    c = X.comonoid
    C = comonoid_to_cat(c)
    lab = morphism_labels(c.carrier)
    back = {m: xd for xd, m in lab.items()}
    at = {x: X.kappa1.fiber(x) for x in C.objects}
    act = {m: (lambda s, m=m: X.act(s, back[m][1])) for m in C.morphisms}
    return make_presheaf(opposite(C), at, act)


def copresheaf_to_coalg(c: Comonoid, F: Presheaf) -> Coalgebra:
    """Elements are pairs (x, v) with v ∈ F(x)."""
    lab = morphism_labels(c.carrier)
    S = FinSet((x, v) for x in c.carrier.positions for v in F.at[x])
    return make_coalgebra(
        c,
        S,
        lambda s: s[0],
        lambda s, d: (c.target(s[0], d), F.restrict(s[1], lab[(s[0], d)])),
    )


def copresheaf_iso(c: Comonoid, F: Presheaf):
    """The natural isomorphism F → coalg_to_copresheaf(copresheaf_to_coalg(F))."""
    G = coalg_to_copresheaf(copresheaf_to_coalg(c, F))
    return make_pshmor(F, G, lambda x, v: (x, v))


def copresheaf_homs(F: Presheaf, G: Presheaf, budget: int | None = None):
    return enumerate_homs(F, G, budget=budget)


def pullback_coalgebra(h1: FinFn, X1: Coalgebra, h2: FinFn, X2: Coalgebra) -> tuple[Coalgebra, FinFn, FinFn]:
    """Pullback of coalgebra maps X1 → X3 ← X2, computed on underlying sets."""
    pb, p1, p2 = pullback(h1, h2)
    P = make_coalgebra(
        X1.comonoid,
        pb,
        lambda s: X1.kappa1.map[s[0]],
        lambda s, d: (X1.act(s[0], d), X2.act(s[1], d)),
    )
    return P, p1, p2


def equalizer_coalgebra(h: FinFn, k: FinFn, X: Coalgebra) -> tuple[Coalgebra, FinFn]:
    """The subcoalgebra where two coalgebra maps out of X agree."""
    keep = FinSet(s for s in X.S if h.map[s] == k.map[s])
    E = make_coalgebra(X.comonoid, keep, X.kappa1.map, X.act)
    return E, FinFn(keep, X.S, {s: s for s in keep})
