"""Seeded generators for the law-checking corpus.

Every generator takes a :class:`random.Random` so that one seed fixes the
whole corpus. Polynomials are sampled by drawing the position count
uniformly from ``0..max_pos`` and then each direction count uniformly from
``0..max_dir``.
"""

from __future__ import annotations

import itertools
import random

from .bicomodule import TypedPoly, make_typed
from .coalgebra import Coalgebra, make_coalgebra
from .comonoid import Comonoid
from .errors import InvalidStructure
from .fincat import FinCat, make_fincat, parallel_pair, walking_arrow
from .poly import Poly, PolyMor, constant, from_arities, hom_count, identity_y, zero
from .presheaf import Presheaf, make_presheaf, make_pshmor
from .psh_poly import PshPoly
from .sets import FinSet


def random_poly(rng: random.Random, max_pos: int = 3, max_dir: int = 3) -> Poly:
    n = rng.randint(0, max_pos)
    return from_arities(rng.randint(0, max_dir) for _ in range(n))


def poly_pool() -> list[Poly]:
    """0, 1, y, y², 2y and y + 1."""
    return [zero(), constant([0]), identity_y(), from_arities([2]), from_arities([1, 1]), from_arities([1, 0])]


def random_mor(rng: random.Random, p: Poly, q: Poly, budget: int | None = None) -> PolyMor | None:
    """A uniformly chosen map p → q, or None when there is none."""
    if hom_count(p, q) == 0:
        return None
    on_pos, on_dir = {}, {}
    for I in p.positions:
        options = [(J, len(p.dirs[I]) ** len(q.dirs[J])) for J in q.positions]
        total = sum(w for _, w in options)
        pick = rng.randrange(total)
        for J, w in options:
            if pick < w:
                break
            pick -= w
        on_pos[I] = J
        on_dir[I] = {e: rng.choice(p.dirs[I].elements) for e in q.dirs[J]}
    return PolyMor(p, q, on_pos, on_dir)


# ---- concrete categories -------------------------------------------------------------------


def random_fincat(rng: random.Random, max_objects: int = 3, max_morphisms: int = 8) -> FinCat:
    """A category of functions between tiny sets.

    Objects are integers carrying a set of size 0..2; morphisms are labelled
    (source, target, table) and composition is composition of functions.
    Random generators are closed under composition; draws that exceed the
    morphism bound are retried with fewer generators.
    """
    while True:
        n = rng.randint(1, max_objects)
        sizes = [rng.randint(0, 2) for _ in range(n)]
        ids = {x: (x, x, tuple(range(sizes[x]))) for x in range(n)}
        gens = []
        for _ in range(rng.randint(0, 3)):
            s, t = rng.randrange(n), rng.randrange(n)
            if sizes[t] == 0 and sizes[s] > 0:
                continue
            gens.append((s, t, tuple(rng.randrange(sizes[t]) for _ in range(sizes[s]))))
        mors = set(ids.values()) | set(gens)
        grew = True
        while grew and len(mors) <= max_morphisms:
            grew = False
            for f, g in list(itertools.product(mors, mors)):
                if f[1] == g[0]:
                    h = (f[0], g[1], tuple(g[2][i] for i in f[2]))
                    if h not in mors:
                        mors.add(h)
                        grew = True
        if len(mors) > max_morphisms:
            continue
        comp = {}
        for f, g in itertools.product(mors, mors):
            if f[1] == g[0]:
                comp[(g, f)] = (f[0], g[1], tuple(g[2][i] for i in f[2]))
        return make_fincat(range(n), {m: (m[0], m[1]) for m in mors}, ids, comp)


def tautological_coalgebra(c: Comonoid, C: FinCat) -> Coalgebra:
    """For a category of functions: each object acts on its own underlying set."""
    S = FinSet((x, i) for x in C.objects for i in range(len(C.id(x)[2])))
    return make_coalgebra(
        c,
        S,
        lambda s: s[0],
        lambda s, d: (d[1], d[2][s[1]]),
    )


# ---- copresheaves on the walking arrow -----------------------------------------------------


def random_arrow_coalgebra(rng: random.Random, c: Comonoid, max_size: int = 3) -> Coalgebra:
    """A copresheaf a → b on the walking arrow, as a coalgebra on (object, i)."""
    while True:
        na, nb = rng.randint(0, max_size), rng.randint(0, max_size)
        if na and not nb:
            continue
        fmap = {i: rng.randrange(nb) for i in range(na)}
        S = [("a", i) for i in range(na)] + [("b", j) for j in range(nb)]
        return make_coalgebra(
            c,
            S,
            lambda s: s[0],
            lambda s, d: ("b", fmap[s[1]]) if d == "f" else s,
        )


# ---- typed polynomials ---------------------------------------------------------------------


def random_typed(rng: random.Random, C, D, max_pos: int = 3, max_dir: int = 2) -> TypedPoly:
    C, D = FinSet(C), FinSet(D)
    m = random_poly(rng, max_pos, max_dir)
    src = {(x, e): rng.choice(D.elements) for x in m.positions for e in m.dirs[x]}
    tgt = {x: rng.choice(C.elements) for x in m.positions}
    return make_typed(m, C, D, src, tgt)


def typed_identity(C) -> TypedPoly:
    """Cy typed by the identity on both sides."""
    C = FinSet(C)
    m = Poly({x: [()] for x in C})
    return make_typed(m, C, C, lambda x, e: x, lambda x: x)


# ---- presheaf polynomials --------------------------------------------------------------------


PSH_BASES = {"arrow": walking_arrow, "graph": parallel_pair}


def random_presheaf(rng: random.Random, base: FinCat, max_size: int = 2) -> Presheaf:
    """Random presheaf on a base whose non-identity morphisms do not compose."""
    while True:
        at = {a: list(range(rng.randint(0, max_size))) for a in base.objects}
        action, ok = {}, True
        for u in base.morphisms:
            a, b = base.tgt.map[u], base.src.map[u]
            if u == base.id(a):
                continue
            if at[a] and not at[b]:
                ok = False
                break
            action[u] = {x: rng.choice(at[b]) for x in at[a]}
        if ok:
            return make_presheaf(base, at, action)


def random_over(rng: random.Random, P: Presheaf, tries: int = 50):
    """A random presheaf map T → P; elements of T are labelled (x, i)."""
    base = P.base
    for _ in range(tries):
        at = {a: [(x, i) for x in P.at[a] for i in range(rng.randint(0, 2))] for a in base.objects}
        action, ok = {}, True
        for u in base.morphisms:
            a, b = base.tgt.map[u], base.src.map[u]
            if u == base.id(a):
                continue
            table = {}
            for e in at[a]:
                over = [t for t in at[b] if t[0] == P.restrict(e[0], u)]
                if not over:
                    ok = False
                    break
                table[e] = rng.choice(over)
            if not ok:
                break
            action[u] = table
        if ok:
            T = make_presheaf(base, at, action)
            return make_pshmor(T, P, lambda a, e: e[0])
    raise InvalidStructure("could not sample a presheaf map")


def random_pshpoly(rng: random.Random, base: FinCat, max_size: int = 2) -> PshPoly:
    return PshPoly(random_over(rng, random_presheaf(rng, base, max_size)))
