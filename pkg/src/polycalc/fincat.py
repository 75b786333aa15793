"""Finite categories given by explicit composition tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import InvalidStructure
from .labels import Label
from .sets import FinFn, FinSet


@dataclass
class Report:
    """Outcome of a validation or law check; ``violations`` holds witnesses."""

    name: str
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, law: str, witness) -> None:
        self.violations.append((law, witness))

    def raise_if_failed(self) -> None:
        if self.violations:
            law, witness = self.violations[0]
            raise InvalidStructure(f"{self.name}: {law} fails at {witness!r}")


@dataclass(frozen=True, eq=False)
class FinCat:
    objects: FinSet
    morphisms: FinSet
    src: FinFn
    tgt: FinFn
    identity: FinFn
    compose: Mapping[tuple, Label]  # (g, f) ↦ g∘f, defined when tgt(f) = src(g)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinCat)
            and self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.src == other.src
            and self.tgt == other.tgt
            and self.identity == other.identity
            and dict(self.compose) == dict(other.compose)
        )

    def __hash__(self):
        return hash((self.objects, self.morphisms))

    def id(self, x: Label) -> Label:
        return self.identity.map[x]

    def comp(self, g: Label, f: Label) -> Label:
        """g ∘ f (f first)."""
        return self.compose[(g, f)]

    def hom(self, x: Label, y: Label) -> list:
        return [m for m in self.morphisms if self.src.map[m] == x and self.tgt.map[m] == y]

    def outgoing(self, x: Label) -> list:
        return [m for m in self.morphisms if self.src.map[m] == x]

    def composable_pairs(self):
        """Pairs (f, g) with tgt(f) = src(g), i.e. f then g."""
        by_src: dict = {}
        for g in self.morphisms:
            by_src.setdefault(self.src.map[g], []).append(g)
        for f in self.morphisms:
            for g in by_src.get(self.tgt.map[f], ()):
                yield f, g


def fincat_validate(c: FinCat) -> Report:
    r = Report("category")
    for name, fn, dom, cod in (
        ("src", c.src, c.morphisms, c.objects),
        ("tgt", c.tgt, c.morphisms, c.objects),
        ("identity", c.identity, c.objects, c.morphisms),
    ):
        if fn.dom != dom or fn.cod != cod:
            r.add(f"{name} typing", name)
    if not r.ok:
        return r
    for x in c.objects:
        i = c.id(x)
        if c.src.map[i] != x or c.tgt.map[i] != x:
            r.add("identity endpoints", x)
    for (g, f), h in c.compose.items():
        if f not in c.morphisms or g not in c.morphisms or h not in c.morphisms:
            r.add("compose entry mentions unknown morphism", (g, f))
            continue
        if c.tgt.map[f] != c.src.map[g]:
            r.add("compose entry on non-composable pair", (g, f))
    if not r.ok:
        return r
    for f, g in c.composable_pairs():
        if (g, f) not in c.compose:
            r.add("missing composite", (g, f))
            continue
        h = c.compose[(g, f)]
        if c.src.map[h] != c.src.map[f] or c.tgt.map[h] != c.tgt.map[g]:
            r.add("composite endpoints", (g, f))
    if not r.ok:
        return r
    for f in c.morphisms:
        if c.comp(c.id(c.tgt.map[f]), f) != f:
            r.add("left unit", f)
        if c.comp(f, c.id(c.src.map[f])) != f:
            r.add("right unit", f)
    for f, g in c.composable_pairs():
        for h in c.outgoing(c.tgt.map[g]):
            if c.comp(h, c.comp(g, f)) != c.comp(c.comp(h, g), f):
                r.add("associativity", (f, g, h))
    return r


def make_fincat(objects, morphisms: Mapping, identities: Mapping, compose: Mapping) -> FinCat:
    """Build from ``morphisms = {m: (src, tgt)}``, ``identities = {x: m}`` and a
    composition dict keyed by (g, f)."""
    O = FinSet(objects)
    M = FinSet(morphisms)
    return FinCat(
        O,
        M,
        FinFn(M, O, {m: st[0] for m, st in morphisms.items()}),
        FinFn(M, O, {m: st[1] for m, st in morphisms.items()}),
        FinFn(O, M, dict(identities)),
        dict(compose),
    )


def free_on_reflexive(objects, arrows: Mapping) -> FinCat:
    """Category whose only non-identity morphisms are ``arrows`` and whose
    non-trivial composites are all undefined (so no two arrows compose)."""
    morphisms = {("id", x): (x, x) for x in objects}
    morphisms.update(arrows)
    ids = {x: ("id", x) for x in objects}
    comp = {}
    for m, (s, t) in morphisms.items():
        comp[(ids[t], m)] = m
        comp[(m, ids[s])] = m
    for f, (_, t) in arrows.items():
        for g, (s, _) in arrows.items():
            if t == s:
                raise InvalidStructure("arrows compose; supply the composite explicitly")
    return make_fincat(objects, morphisms, ids, comp)


def terminal_cat() -> FinCat:
    return free_on_reflexive(["*"], {})


def discrete_cat(objects) -> FinCat:
    return free_on_reflexive(list(objects), {})


def walking_arrow() -> FinCat:
    """Objects a, b and one non-identity morphism f : a → b."""
    return free_on_reflexive(["a", "b"], {"f": ("a", "b")})


def parallel_pair() -> FinCat:
    """Objects E, V and two morphisms s, t : V → E.

    Presheaves on this category are directed multigraphs: X(E) is the edge
    set and X(s), X(t) send an edge to its endpoints.
    """
    return free_on_reflexive(["E", "V"], {"s": ("V", "E"), "t": ("V", "E")})


def opposite(c: FinCat) -> FinCat:
    return FinCat(
        c.objects,
        c.morphisms,
        c.tgt,
        c.src,
        c.identity,
        {(f, g): h for (g, f), h in c.compose.items()},
    )
