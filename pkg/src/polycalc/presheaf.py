"""Finite presheaves on a finite category, their morphisms, and Π along them.

A presheaf ``X`` on ``A`` assigns a finite set ``X.at[a]`` to each object and,
to each morphism ``u : b → a``, a restriction function ``X.at[a] → X.at[b]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

from .errors import Counter, TypeMismatch
from .fincat import FinCat, Report
from .labels import Label
from .sets import FinFn, FinSet, identity as set_identity


@dataclass(frozen=True, eq=False)
class Presheaf:
    base: FinCat
    at: Mapping[Label, FinSet]
    action: Mapping[Label, FinFn]

    def restrict(self, x: Label, u: Label) -> Label:
        return self.action[u].map[x]

    def elements(self) -> Iterator[tuple]:
        for a in self.base.objects:
            for x in self.at[a]:
                yield a, x

    def size(self) -> int:
        return sum(len(self.at[a]) for a in self.base.objects)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Presheaf)
            and self.base == other.base
            and all(self.at[a] == other.at[a] for a in self.base.objects)
            and all(self.action[u] == other.action[u] for u in self.base.morphisms)
        )

    def __hash__(self):
        return hash(tuple(self.at[a] for a in self.base.objects))

    def __repr__(self) -> str:
        return "Presheaf(" + ", ".join(f"{a}: {list(self.at[a])}" for a in self.base.objects) + ")"


def make_presheaf(base: FinCat, at: Mapping, action: Mapping[Label, Callable | Mapping]) -> Presheaf:
    """Build a presheaf; restrictions along identities may be omitted."""
    sets = {a: v if isinstance(v, FinSet) else FinSet(v) for a, v in at.items()}
    acts = {}
    for u in base.morphisms:
        a, b = base.tgt.map[u], base.src.map[u]
        if u in action:
            spec = action[u]
            if isinstance(spec, FinFn):
                acts[u] = spec
            elif callable(spec):
                acts[u] = FinFn.of(sets[a], sets[b], spec)
            else:
                acts[u] = FinFn(sets[a], sets[b], dict(spec))
        elif base.identity.map[a] == u:
            acts[u] = set_identity(sets[a])
        else:
            raise TypeMismatch(f"no restriction given along {u!r}")
    return Presheaf(base, sets, acts)


def presheaf_validate(X: Presheaf) -> Report:
    r = Report("presheaf")
    c = X.base
    for a in c.objects:
        if a not in X.at:
            r.add("missing component", a)
    for u in c.morphisms:
        fn = X.action.get(u)
        if fn is None:
            r.add("missing restriction", u)
            continue
        if fn.dom != X.at[c.tgt.map[u]] or fn.cod != X.at[c.src.map[u]]:
            r.add("restriction typing", u)
    if not r.ok:
        return r
    for a in c.objects:
        if X.action[c.id(a)] != set_identity(X.at[a]):
            r.add("identity acts trivially", a)
    for f, g in c.composable_pairs():
        # X(g∘f) = X(f)∘X(g)
        gf = c.comp(g, f)
        for x in X.at[c.tgt.map[g]]:
            if X.restrict(x, gf) != X.restrict(X.restrict(x, g), f):
                r.add("functoriality", (g, f, x))
    return r


@dataclass(frozen=True, eq=False)
class PshMor:
    dom: Presheaf
    cod: Presheaf
    components: Mapping[Label, FinFn]

    def __call__(self, a: Label, x: Label) -> Label:
        return self.components[a].map[x]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PshMor)
            and self.dom == other.dom
            and self.cod == other.cod
            and all(self.components[a] == other.components[a] for a in self.dom.base.objects)
        )

    def __hash__(self):
        return hash(tuple(self.components[a] for a in self.dom.base.objects))

    def then(self, other: "PshMor") -> "PshMor":
        if self.cod != other.dom:
            raise TypeMismatch("composite of non-composable presheaf maps")
        return PshMor(
            self.dom,
            other.cod,
            {a: self.components[a].then(other.components[a]) for a in self.dom.base.objects},
        )

    def is_iso(self) -> bool:
        return all(fn.is_bijective() for fn in self.components.values())


def make_pshmor(dom: Presheaf, cod: Presheaf, fn: Callable[[Label, Label], Label]) -> PshMor:
    return PshMor(
        dom, cod, {a: FinFn.of(dom.at[a], cod.at[a], lambda x, a=a: fn(a, x)) for a in dom.base.objects}
    )


def pshmor_validate(m: PshMor) -> Report:
    r = Report("presheaf morphism")
    if m.dom.base != m.cod.base:
        r.add("base mismatch", None)
        return r
    c = m.dom.base
    for a in c.objects:
        fn = m.components.get(a)
        if fn is None or fn.dom != m.dom.at[a] or fn.cod != m.cod.at[a]:
            r.add("component typing", a)
    if not r.ok:
        return r
    for u in c.morphisms:
        a, b = c.tgt.map[u], c.src.map[u]
        for x in m.dom.at[a]:
            if m(b, m.dom.restrict(x, u)) != m.cod.restrict(m(a, x), u):
                r.add("naturality", (u, x))
    return r


def identity_pshmor(X: Presheaf) -> PshMor:
    return PshMor(X, X, {a: set_identity(X.at[a]) for a in X.base.objects})


def _same_base(*xs: Presheaf) -> FinCat:
    base = xs[0].base
    for x in xs[1:]:
        if x.base != base:
            raise TypeMismatch("presheaves over different base categories")
    return base


def terminal_presheaf(base: FinCat) -> Presheaf:
    return make_presheaf(base, {a: [()] for a in base.objects}, {u: (lambda x: ()) for u in base.morphisms})


def representable(base: FinCat, a: Label) -> Presheaf:
    """y(a): at c the morphisms c → a; restriction along u is precomposition."""
    at = {c: base.hom(c, a) for c in base.objects}
    return make_presheaf(base, at, {u: (lambda v, u=u: base.comp(v, u)) for u in base.morphisms})


def yoneda(X: Presheaf, a: Label, sigma: Label) -> PshMor:
    """The map y(a) → X classifying the element sigma of X(a)."""
    return make_pshmor(representable(X.base, a), X, lambda c, v: X.restrict(sigma, v))


def product_presheaf(X: Presheaf, Y: Presheaf) -> tuple[Presheaf, PshMor, PshMor]:
    base = _same_base(X, Y)
    P = make_presheaf(
        base,
        {a: [(x, y) for x in X.at[a] for y in Y.at[a]] for a in base.objects},
        {u: (lambda p, u=u: (X.restrict(p[0], u), Y.restrict(p[1], u))) for u in base.morphisms},
    )
    return P, make_pshmor(P, X, lambda a, p: p[0]), make_pshmor(P, Y, lambda a, p: p[1])


def pullback_presheaf(f: PshMor, g: PshMor) -> tuple[Presheaf, PshMor, PshMor]:
    """Componentwise canonical pullback of f and g, elements (x, y)."""
    if f.cod != g.cod:
        raise TypeMismatch("pullback of presheaf maps with different codomains")
    base = f.cod.base
    at = {}
    for a in base.objects:
        by_image: dict = {}
        for y in g.dom.at[a]:
            by_image.setdefault(g(a, y), []).append(y)
        at[a] = [(x, y) for x in f.dom.at[a] for y in by_image.get(f(a, x), ())]
    P = make_presheaf(
        base,
        at,
        {u: (lambda p, u=u: (f.dom.restrict(p[0], u), g.dom.restrict(p[1], u))) for u in base.morphisms},
    )
    return P, make_pshmor(P, f.dom, lambda a, p: p[0]), make_pshmor(P, g.dom, lambda a, p: p[1])


# ---- hom enumeration --------------------------------------------------------------


def enumerate_homs(
    W: Presheaf,
    X: Presheaf,
    candidates: Callable[[Label, Label], list] | None = None,
    budget: int | None = None,
) -> list[dict]:
    """All natural transformations W → X as ``{(a, w): x}`` dicts.

    ``candidates(a, w)`` restricts the admissible images of ``w`` (used for
    maps over a fixed base). Search order is canonical, so the output order is
    deterministic. Restrictions of an assigned element are forced at once.
    """
    base = _same_base(W, X)
    elems = list(W.elements())
    incoming = {a: [u for u in base.morphisms if base.tgt.map[u] == a] for a in base.objects}
    if candidates is None:
        cand = {(a, w): list(X.at[a]) for a, w in elems}
    else:
        cand = {(a, w): list(candidates(a, w)) for a, w in elems}
    cand_sets = {k: set(v) for k, v in cand.items()}
    counter = Counter(budget, "presheaf hom search")
    assign: dict = {}
    out: list = []

    def force(a, w, x, trail) -> bool:
        stack = [(a, w, x)]
        while stack:
            a, w, x = stack.pop()
            key = (a, w)
            if key in assign:
                if assign[key] != x:
                    return False
                continue
            if x not in cand_sets[key]:
                return False
            assign[key] = x
            trail.append(key)
            for u in incoming[a]:
                b = base.src.map[u]
                stack.append((b, W.restrict(w, u), X.restrict(x, u)))
        return True

    def search(i: int) -> None:
        while i < len(elems) and elems[i] in assign:
            i += 1
        if i == len(elems):
            counter.tick()
            out.append(dict(assign))
            return
        a, w = elems[i]
        for x in cand[(a, w)]:
            counter.tick()
            trail: list = []
            if force(a, w, x, trail):
                search(i + 1)
            for key in trail:
                del assign[key]

    search(0)
    return out


def homs(W: Presheaf, X: Presheaf, budget: int | None = None) -> list[PshMor]:
    return [_as_pshmor(W, X, h) for h in enumerate_homs(W, X, budget=budget)]


def slice_homs(a: PshMor, g: PshMor, budget: int | None = None) -> list[PshMor]:
    """Maps γ : dom(a) → dom(g) with g ∘ γ = a."""
    if a.cod != g.cod:
        raise TypeMismatch("slice maps need a common base presheaf")
    over = {obj: {} for obj in g.cod.base.objects}
    for obj in g.cod.base.objects:
        for z in g.dom.at[obj]:
            over[obj].setdefault(g(obj, z), []).append(z)
    hs = enumerate_homs(
        a.dom, g.dom, candidates=lambda obj, w: over[obj].get(a(obj, w), []), budget=budget
    )
    return [_as_pshmor(a.dom, g.dom, h) for h in hs]


def _as_pshmor(W: Presheaf, X: Presheaf, h: dict) -> PshMor:
    return PshMor(
        W, X, {a: FinFn(W.at[a], X.at[a], {w: h[(a, w)] for w in W.at[a]}) for a in W.base.objects}
    )


# ---- dependent product ------------------------------------------------------------


def pullback_of_representable(f: PshMor, a: Label, sigma: Label) -> tuple[Presheaf, PshMor]:
    """Δ_σ Y for σ ∈ X(a) and f : Y → X, with its projection to Y.

    Elements at c are pairs (v, e) with v : c → a and X(v)(σ) = f(e).
    """
    X, Y = f.cod, f.dom
    base = X.base
    at = {}
    for c in base.objects:
        at[c] = [(v, e) for v in base.hom(c, a) for e in Y.at[c] if X.restrict(sigma, v) == f(c, e)]
    D = make_presheaf(
        base,
        at,
        {u: (lambda p, u=u: (base.comp(p[0], u), Y.restrict(p[1], u))) for u in base.morphisms},
    )
    return D, make_pshmor(D, Y, lambda c, p: p[1])


def section_table(gamma: PshMor) -> tuple:
    return tuple(((c, x), gamma(c, x)) for c, x in gamma.dom.elements())


def presheaf_pi(f: PshMor, g: PshMor, budget: int | None = None) -> PshMor:
    """Π_f g : Π_f Z → X for f : Y → X and g : Z → Y.

    The component at a has elements (σ, γ) with σ ∈ X(a) and γ a map
    Δ_σ Y → Z over Y, recorded as a table of ((c, (v, e)), z) entries.
    """
    if g.cod != f.dom:
        raise TypeMismatch("Π_f g needs cod(g) = dom(f)")
    X = f.cod
    base = X.base
    counter = Counter(budget, "presheaf Π enumeration")
    at: dict = {}
    for a in base.objects:
        elems = []
        for sigma in X.at[a]:
            D, proj = pullback_of_representable(f, a, sigma)
            remaining = counter.budget - counter.used
            for gamma in slice_homs(proj, g, budget=max(remaining, 1)):
                counter.tick()
                elems.append((sigma, section_table(gamma)))
        at[a] = elems

    def act(u):
        def run(el):
            sigma, table = el
            lookup = dict(table)
            b = base.src.map[u]
            D, _ = pullback_of_representable(f, b, X.restrict(sigma, u))
            new = tuple(((c, (v, e)), lookup[(c, (base.comp(u, v), e))]) for c, (v, e) in D.elements())
            return (X.restrict(sigma, u), new)

        return run

    Pi = make_presheaf(base, at, {u: act(u) for u in base.morphisms})
    return make_pshmor(Pi, X, lambda a, el: el[0])


def pi_hom_transpose(f: PshMor, g: PshMor, pi: PshMor, alpha: PshMor) -> tuple[PshMor, PshMor]:
    """A map α : W → Π_f Z as the pair (σ : W → X, γ : W ×_X Y → Z over Y)."""
    sigma = alpha.then(pi)
    PB, _, p2 = pullback_presheaf(sigma, f)
    base = f.cod.base

    def gamma(c, pair):
        w, e = pair
        _, table = alpha(c, w)
        return dict(table)[(c, (base.id(c), e))]

    return sigma, make_pshmor(PB, g.dom, gamma)


def pi_hom_untranspose(f: PshMor, g: PshMor, pi: PshMor, sigma: PshMor, gamma: PshMor) -> PshMor:
    """Inverse of :func:`pi_hom_transpose`."""
    W = sigma.dom

    def fn(a, w):
        D, _ = pullback_of_representable(f, a, sigma(a, w))
        return (
            sigma(a, w),
            tuple(((c, (v, e)), gamma(c, (W.restrict(w, v), e))) for c, (v, e) in D.elements()),
        )

    return make_pshmor(W, pi.dom, fn)
