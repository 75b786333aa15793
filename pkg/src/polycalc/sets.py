"""Finite sets, finite functions, and the Σ ⊣ Δ ⊣ Π triple over FinSet."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

from .errors import TypeMismatch, check_budget
from .labels import Label, is_label, label_key


class FinSet:
    """An ordered finite set of labels, kept in canonical order."""

    __slots__ = ("elements", "_members", "_hash")

    def __init__(self, elements: Iterable[Label] = ()):
        elems = list(elements)
        members = frozenset(elems)
        if len(members) != len(elems):
            seen, dup = set(), None
            for e in elems:
                if e in seen:
                    dup = e
                    break
                seen.add(e)
            raise TypeMismatch(f"duplicate label {dup!r} in finite set")
        for e in elems:
            if not is_label(e):
                raise TypeMismatch(f"not a label: {e!r}")
        self.elements = tuple(sorted(elems, key=label_key))
        self._members = members
        self._hash = None

    @classmethod
    def range(cls, n: int) -> "FinSet":
        return cls(range(n))

    def __iter__(self) -> Iterator[Label]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._members

    def __eq__(self, other) -> bool:
        return isinstance(other, FinSet) and self.elements == other.elements

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.elements)
        return self._hash

    def __repr__(self) -> str:
        return f"FinSet({list(self.elements)!r})"


EMPTY = FinSet()
ONE = FinSet([()])


@dataclass(frozen=True, eq=False)
class FinFn:
    dom: FinSet
    cod: FinSet
    map: Mapping[Label, Label]

    def __post_init__(self):
        m = self.map
        if len(m) != len(self.dom):
            missing = [x for x in self.dom if x not in m]
            if missing:
                raise TypeMismatch(f"function undefined on {missing[0]!r}")
            extra = [x for x in m if x not in self.dom]
            raise TypeMismatch(f"function defined outside its domain at {extra[0]!r}")
        for x in self.dom:
            if x not in m:
                raise TypeMismatch(f"function undefined on {x!r}")
            if m[x] not in self.cod:
                raise TypeMismatch(f"image {m[x]!r} of {x!r} is not in the codomain")

    def __call__(self, x: Label) -> Label:
        return self.map[x]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinFn)
            and self.dom == other.dom
            and self.cod == other.cod
            and all(self.map[x] == other.map[x] for x in self.dom)
        )

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, tuple(self.map[x] for x in self.dom)))

    def __repr__(self) -> str:
        return f"FinFn({ {x: self.map[x] for x in self.dom}!r})"

    @classmethod
    def of(cls, dom: FinSet, cod: FinSet, fn: Callable[[Label], Label]) -> "FinFn":
        return cls(dom, cod, {x: fn(x) for x in dom})

    def then(self, other: "FinFn") -> "FinFn":
        """Diagrammatic composite: first self, then other."""
        if self.cod != other.dom:
            raise TypeMismatch("composite of non-composable functions")
        return FinFn(self.dom, other.cod, {x: other.map[self.map[x]] for x in self.dom})

    def fiber(self, y: Label) -> list:
        return [x for x in self.dom if self.map[x] == y]

    def fibers(self) -> dict:
        out = {y: [] for y in self.cod}
        for x in self.dom:
            out[self.map[x]].append(x)
        return out

    def is_injective(self) -> bool:
        return len(set(self.map.values())) == len(self.dom)

    def is_surjective(self) -> bool:
        return set(self.map.values()) == set(self.cod)

    def is_bijective(self) -> bool:
        return len(self.dom) == len(self.cod) and self.is_injective()

    def inverse(self) -> "FinFn":
        if not self.is_bijective():
            raise TypeMismatch("inverse of a non-bijection")
        return FinFn(self.cod, self.dom, {y: x for x, y in self.map.items()})

    def table(self) -> tuple:
        return tuple((x, self.map[x]) for x in self.dom)


def identity(A: FinSet) -> FinFn:
    return FinFn(A, A, {x: x for x in A})


def compose(g: FinFn, f: FinFn) -> FinFn:
    """g ∘ f."""
    return f.then(g)


def product(A: FinSet, B: FinSet) -> FinSet:
    return FinSet((a, b) for a in A for b in B)


def product_map(f: FinFn, g: FinFn) -> FinFn:
    return FinFn(
        product(f.dom, g.dom),
        product(f.cod, g.cod),
        {(a, b): (f.map[a], g.map[b]) for a in f.dom for b in g.dom},
    )


def pullback(f: FinFn, g: FinFn) -> tuple[FinSet, FinFn, FinFn]:
    """Canonical pullback {(a, b) : f(a) = g(b)} with its two projections."""
    if f.cod != g.cod:
        raise TypeMismatch("pullback of functions with different codomains")

    by_image: dict = {}
    for b in g.dom:
        by_image.setdefault(g.map[b], []).append(b)
    pb = FinSet((a, b) for a in f.dom for b in by_image.get(f.map[a], ()))
    return (
        pb,
        FinFn(pb, f.dom, {x: x[0] for x in pb}),
        FinFn(pb, g.dom, {x: x[1] for x in pb}),
    )


def equalizer(f: FinFn, g: FinFn) -> FinFn:
    """Inclusion of {x : f(x) = g(x)}."""
    if f.dom != g.dom or f.cod != g.cod:
        raise TypeMismatch("equalizer of non-parallel functions")
    E = FinSet(x for x in f.dom if f.map[x] == g.map[x])
    return FinFn(E, f.dom, {x: x for x in E})


def functions(A: FinSet, B: FinSet, budget: int | None = None) -> Iterator[dict]:
    """All functions A → B as dicts, in canonical lexicographic order."""
    check_budget(len(B) ** len(A), budget, "function enumeration")
    dom = A.elements
    for images in itertools.product(B.elements, repeat=len(dom)):
        yield dict(zip(dom, images))


def sections(
    fiber_choices: list, budget: int | None = None, what: str = "section enumeration"
) -> Iterator[tuple]:
    """Product of candidate lists, budget-guarded."""
    n = 1
    for c in fiber_choices:
        n *= len(c)
    check_budget(n, budget, what)
    return itertools.product(*fiber_choices)


# ---- the adjoint triple along f : B → A -----------------------------------------


def sigma(f: FinFn, d: FinFn) -> FinFn:
    """Σ_f: an object D → B of the slice over B, pushed to the slice over A."""
    return d.then(f)


def delta(f: FinFn, c: FinFn) -> FinFn:
    """Δ_f: pull C → A back along f, giving C ×_A B → B."""
    _, _, p2 = pullback(c, f)
    return p2


def pi_finset(f: FinFn, g: FinFn, budget: int | None = None) -> FinFn:
    """Π_f Z → A: over a, the sections s of g on the fiber f⁻¹(a).

    Elements are labeled ``(a, ((b, z), ...))`` with b in canonical order. An
    empty fiber yields exactly the empty section.
    """
    if g.cod != f.dom:
        raise TypeMismatch("Π_f g needs cod(g) = dom(f)")
    over = g.fibers()
    out = {}
    total = 0
    fibers = f.fibers()
    for a in f.cod:
        bs = fibers[a]
        n = 1
        for b in bs:
            n *= len(over[b])
        total += n
    check_budget(total, budget, "Π_f enumeration")
    for a in f.cod:
        bs = fibers[a]
        for choice in itertools.product(*(over[b] for b in bs)):
            out[(a, tuple(zip(bs, choice)))] = a
    return FinFn(FinSet(out), f.cod, out)


@dataclass(frozen=True)
class DistributivityPullback:
    """The square around (f, g): Π_f C → A, its pullback along f, ε and h."""

    pi: FinFn  # Π_f C → A
    apex: FinSet  # Δ_f Π_f C, labels ((a, section), b)
    h: FinFn  # apex → Π_f C
    to_b: FinFn  # apex → B
    counit: FinFn  # ε : apex → C


def distributivity_pullback(f: FinFn, g: FinFn, budget: int | None = None) -> DistributivityPullback:
    pi = pi_finset(f, g, budget)
    apex, h, to_b = pullback(pi, f)
    counit = FinFn(apex, g.dom, {x: dict(x[0][1])[x[1]] for x in apex})
    return DistributivityPullback(pi, apex, h, to_b, counit)


def pi_transpose(f: FinFn, g: FinFn, d: FinFn, k: FinFn, pi: FinFn | None = None) -> FinFn:
    """From k : D ×_A B → C over B (D ↦ A via d), the map D → Π_f C over A."""
    if pi is None:
        pi = pi_finset(f, g)
    fibers = f.fibers()
    out = {}
    for x in d.dom:
        a = d.map[x]
        out[x] = (a, tuple((b, k.map[(x, b)]) for b in fibers[a]))
    return FinFn(d.dom, pi.dom, out)


def pi_untranspose(f: FinFn, g: FinFn, d: FinFn, m: FinFn) -> FinFn:
    """From m : D → Π_f C over A, the map D ×_A B → C over B."""
    pb, _, _ = pullback(d, f)
    return FinFn(pb, g.dom, {(x, b): dict(m.map[x][1])[b] for (x, b) in pb})
