"""Polynomials over finite sets and their morphisms.

A polynomial is a finite family of finite direction sets ``p[I]`` indexed by
positions ``I``. A morphism ``φ : p → q`` sends each position ``I`` forward to
``φ1(I)`` and each direction of ``q[φ1 I]`` back to a direction of ``p[I]``.

Composite constructions carry structured labels:

* ``p ◁ q`` has positions ``(I, f)`` with ``f`` a table ``((d, J), ...)`` over
  ``p[I]`` and directions ``(d, e)`` with ``e ∈ q[f(d)]``;
* ``p ⊗ q`` has positions ``(I, J)`` and directions ``(d, e)``;
* ``y`` has the single position ``()`` with the single direction ``()``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import TypeMismatch, check_budget
from .labels import Label, label_key
from .sets import FinFn, FinSet, product


class Poly:
    __slots__ = ("positions", "dirs", "_hash")

    def __init__(self, dirs: Mapping[Label, Iterable[Label]]):
        self.dirs = {I: (d if isinstance(d, FinSet) else FinSet(d)) for I, d in dirs.items()}
        self.positions = FinSet(self.dirs)
        self._hash = None

    def __getitem__(self, I: Label) -> FinSet:
        return self.dirs[I]

    def __len__(self) -> int:
        return len(self.positions)

    def arities(self) -> list[int]:
        return [len(self.dirs[I]) for I in self.positions]

    def total(self) -> list[tuple]:
        """The total space P_* as pairs (I, d)."""
        return [(I, d) for I in self.positions for d in self.dirs[I]]

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Poly)
            and self.positions == other.positions
            and all(self.dirs[I] == other.dirs[I] for I in self.positions)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple((I, self.dirs[I]) for I in self.positions))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({describe(self)})"


def describe(p: Poly) -> str:
    """Shape of p as a sum of monomials, e.g. ``2y^2 + 1``."""
    counts: dict = {}
    for n in p.arities():
        counts[n] = counts.get(n, 0) + 1
    if not counts:
        return "0"
    terms = []
    for n in sorted(counts, reverse=True):
        k = counts[n]
        mono = "" if n == 0 else ("y" if n == 1 else f"y^{n}")
        coef = "" if (k == 1 and mono) else str(k)
        terms.append(coef + mono)
    return " + ".join(terms)


def from_arities(arities: Iterable[int]) -> Poly:
    """Positions 0..n-1 with directions 0..k-1."""
    return Poly({i: range(k) for i, k in enumerate(arities)})


def identity_y() -> Poly:
    return Poly({(): [()]})


def zero() -> Poly:
    return Poly({})


def linear(A: FinSet | Iterable[Label]) -> Poly:
    """Ay: one position per element of A, each with the single direction ()."""
    return Poly({a: [()] for a in A})


def constant(A: FinSet | Iterable[Label]) -> Poly:
    return Poly({a: [] for a in A})


def representable_poly(S: FinSet | Iterable[Label]) -> Poly:
    """y^S."""
    return Poly({(): S})


# ---- morphisms ----------------------------------------------------------------------


class PolyMor:
    """φ : dom → cod with ``on_pos[I] = φ1(I)`` and ``on_dir[I][e] = φ♯_I(e)``."""

    __slots__ = ("dom", "cod", "on_pos", "on_dir")

    def __init__(self, dom: Poly, cod: Poly, on_pos: Mapping, on_dir: Mapping, check: bool = True):
        self.dom = dom
        self.cod = cod
        self.on_pos = on_pos
        self.on_dir = on_dir
        if check:
            self.validate()

    def validate(self) -> None:
        p, q = self.dom, self.cod
        for I in p.positions:
            if I not in self.on_pos:
                raise TypeMismatch(f"position map undefined at {I!r}")
            J = self.on_pos[I]
            if J not in q.dirs:
                raise TypeMismatch(f"position {I!r} sent to {J!r}, not a position of the codomain")
            back = self.on_dir.get(I)
            if back is None:
                raise TypeMismatch(f"direction map missing at position {I!r}")
            for e in q.dirs[J]:
                if e not in back:
                    raise TypeMismatch(f"direction map at {I!r} undefined on {e!r}")
                if back[e] not in p.dirs[I]:
                    raise TypeMismatch(f"direction map at {I!r} sends {e!r} outside p[{I!r}]")
            if len(back) != len(q.dirs[J]):
                raise TypeMismatch(f"direction map at {I!r} has extra entries")
        if len(self.on_pos) != len(p.positions):
            raise TypeMismatch("position map defined outside the domain")

    def pos(self, I: Label) -> Label:
        return self.on_pos[I]

    def back(self, I: Label, e: Label) -> Label:
        return self.on_dir[I][e]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMor):
            return False
        if self.dom != other.dom or self.cod != other.cod:
            return False
        for I in self.dom.positions:
            if self.on_pos[I] != other.on_pos[I]:
                return False
            if self.on_dir[I] != other.on_dir[I]:
                return False
        return True

    def __hash__(self) -> int:
        return hash(self.as_label())

    def first_difference(self, other: "PolyMor"):
        """A witness (position, direction or None) where two parallel maps differ."""
        for I in self.dom.positions:
            if self.on_pos[I] != other.on_pos[I]:
                return (I, None)
            for e in self.cod.dirs[self.on_pos[I]]:
                if self.on_dir[I][e] != other.on_dir[I][e]:
                    return (I, e)
        return None

    def as_label(self) -> tuple:
        """Canonical serialization (given dom and cod) used for closure positions."""
        p, q = self.dom, self.cod
        return tuple(
            (I, self.on_pos[I], tuple((e, self.on_dir[I][e]) for e in q.dirs[self.on_pos[I]]))
            for I in p.positions
        )

    @classmethod
    def from_label(cls, dom: Poly, cod: Poly, label: tuple, check: bool = False) -> "PolyMor":
        on_pos, on_dir = {}, {}
        for I, J, back in label:
            on_pos[I] = J
            on_dir[I] = dict(back)
        return cls(dom, cod, on_pos, on_dir, check=check)

    def __repr__(self) -> str:
        return f"PolyMor({describe(self.dom)} → {describe(self.cod)}, {self.as_label()!r})"


def mor_id(p: Poly) -> PolyMor:
    return PolyMor(p, p, {I: I for I in p.positions}, {I: {d: d for d in p.dirs[I]} for I in p.positions}, check=False)


def mor_compose(phi: PolyMor, psi: PolyMor) -> PolyMor:
    """ψ ∘ φ: positions forward through φ then ψ, directions back through ψ then φ."""
    if phi.cod != psi.dom:
        raise TypeMismatch("mor_compose: codomain of the first map is not the domain of the second")
    on_pos, on_dir = {}, {}
    for I in phi.dom.positions:
        J = phi.on_pos[I]
        K = psi.on_pos[J]
        on_pos[I] = K
        pb, qb = phi.on_dir[I], psi.on_dir[J]
        on_dir[I] = {e: pb[qb[e]] for e in psi.cod.dirs[K]}
    return PolyMor(phi.dom, psi.cod, on_pos, on_dir, check=False)


def compose_all(*maps: PolyMor) -> PolyMor:
    """Diagrammatic composite of a chain of maps (first map first)."""
    out = maps[0]
    for m in maps[1:]:
        out = mor_compose(out, m)
    return out


@dataclass(frozen=True)
class MorClass:
    cartesian: bool
    vertical: bool


def is_cartesian(phi: PolyMor) -> bool:
    for I in phi.dom.positions:
        back = phi.on_dir[I]
        if len(back) != len(phi.dom.dirs[I]) or len(set(back.values())) != len(back):
            return False
    return True


def is_vertical(phi: PolyMor) -> bool:
    """φ1 is the identity: both sides have the same positions and φ1 fixes them."""
    return phi.dom.positions == phi.cod.positions and all(phi.on_pos[I] == I for I in phi.dom.positions)


def classify(phi: PolyMor) -> MorClass:
    return MorClass(is_cartesian(phi), is_vertical(phi))


def is_iso(phi: PolyMor) -> bool:
    images = [phi.on_pos[I] for I in phi.dom.positions]
    return is_cartesian(phi) and len(set(images)) == len(phi.cod.positions) == len(images)


def mor_inverse(phi: PolyMor) -> PolyMor:
    if not is_iso(phi):
        raise TypeMismatch("inverse of a non-isomorphism")
    on_pos, on_dir = {}, {}
    for I in phi.dom.positions:
        J = phi.on_pos[I]
        on_pos[J] = I
        on_dir[J] = {d: e for e, d in phi.on_dir[I].items()}
    return PolyMor(phi.cod, phi.dom, on_pos, on_dir, check=False)


def vert_cart_factorize(phi: PolyMor) -> tuple[PolyMor, PolyMor]:
    """φ = c ∘ v with v vertical and c cartesian.

    The middle polynomial is Σ_I y^{q[φ1 I]}. Cartesian maps factor as
    (id, φ) and vertical maps as (φ, id).
    """
    if is_cartesian(phi):
        return mor_id(phi.dom), phi
    if is_vertical(phi):
        return phi, mor_id(phi.cod)
    p, q = phi.dom, phi.cod
    mid = Poly({I: q.dirs[phi.on_pos[I]] for I in p.positions})
    v = PolyMor(p, mid, {I: I for I in p.positions}, {I: dict(phi.on_dir[I]) for I in p.positions}, check=False)
    c = PolyMor(
        mid,
        q,
        dict(phi.on_pos),
        {I: {e: e for e in q.dirs[phi.on_pos[I]]} for I in p.positions},
        check=False,
    )
    return v, c


# ---- the composition product ◁ ---------------------------------------------------


def _table(order, fn) -> tuple:
    return tuple((x, fn(x)) for x in order)


def compose_size(p: Poly, q: Poly) -> int:
    """Number of positions plus directions of p ◁ q, computed without building it."""
    nQ = len(q.positions)
    total = 0
    for I in p.positions:
        k = len(p.dirs[I])
        # positions: |Q|^k; directions: Σ_f Σ_d |q[f d]| = k |Q|^{k-1} Σ_J |q[J]|
        total += nQ**k
        if k:
            total += k * nQ ** (k - 1) * sum(len(q.dirs[J]) for J in q.positions)
    return total


def compose_tri(p, q, budget: int | None = None):
    """p ◁ q (dispatches to the presheaf version for presheaf-base polynomials)."""
    if not isinstance(p, Poly):
        from .psh_poly import psh_compose_tri

        return psh_compose_tri(p, q, budget=budget)
    check_budget(compose_size(p, q), budget, "◁ construction")
    Q = q.positions.elements
    dirs = {}
    for I in p.positions:
        ds = p.dirs[I].elements
        for choice in itertools.product(Q, repeat=len(ds)):
            f = tuple(zip(ds, choice))
            dirs[(I, f)] = FinSet([(d, e) for d, J in f for e in q.dirs[J]])
    return Poly(dirs)


def compose_tri_mor(phi: PolyMor, psi: PolyMor, budget: int | None = None) -> PolyMor:
    """φ ◁ ψ : p ◁ q → p' ◁ q'."""
    if not isinstance(phi, PolyMor):
        from .psh_poly import psh_compose_tri_mor

        return psh_compose_tri_mor(phi, psi, budget=budget)
    dom = compose_tri(phi.dom, psi.dom, budget)
    cod = compose_tri(phi.cod, psi.cod, budget)
    on_pos, on_dir = {}, {}
    for X in dom.positions:
        I, f = X
        fd = dict(f)
        I2 = phi.on_pos[I]
        pb = phi.on_dir[I]
        f2 = tuple((d2, psi.on_pos[fd[pb[d2]]]) for d2 in phi.cod.dirs[I2])
        Y = (I2, f2)
        on_pos[X] = Y
        back = {}
        for d2, e2 in cod.dirs[Y]:
            d = pb[d2]
            back[(d2, e2)] = (d, psi.on_dir[fd[d]][e2])
        on_dir[X] = back
    return PolyMor(dom, cod, on_pos, on_dir, check=False)


# Pointwise versions: the value (position, backward map) of a map at one
# position of its domain, without building the (possibly huge) codomain.


def tri_mor_at(phi: PolyMor, psi: PolyMor, X: tuple) -> tuple:
    """(φ ◁ ψ) at the position X = (I, f) of dom φ ◁ dom ψ."""
    I, f = X
    fd = dict(f)
    I2 = phi.on_pos[I]
    pb = phi.on_dir[I]
    f2 = tuple((d2, psi.on_pos[fd[pb[d2]]]) for d2 in phi.cod.dirs[I2])
    back = {}
    for d2, J2 in f2:
        d = pb[d2]
        qb = psi.on_dir[fd[d]]
        for e2 in psi.cod.dirs[J2]:
            back[(d2, e2)] = (d, qb[e2])
    return (I2, f2), back


def tri_associator_at(q: Poly, r: Poly, X: tuple) -> tuple:
    """α at the position X = ((I, f), g) of (p ◁ q) ◁ r."""
    (I, f), g = X
    gd = dict(g)
    F = tuple((d, (J, tuple((e, gd[(d, e)]) for e in q.dirs[J]))) for d, J in f)
    back = {(d, (e, h)): ((d, e), h) for d, (J, g2) in F for e, K in g2 for h in r.dirs[K]}
    return (I, F), back


def then_at(first: tuple, second: tuple) -> tuple:
    """Compose two pointwise values: ``second`` is taken at ``first``'s position."""
    _, b1 = first
    K, b2 = second
    return K, {e: b1[d] for e, d in b2.items()}


def tri_left_unitor(p: Poly) -> PolyMor:
    """λ : y ◁ p → p."""
    yp = compose_tri(identity_y(), p)
    on_pos, on_dir = {}, {}
    for X in yp.positions:
        (_, ((_, J),)) = X
        on_pos[X] = J
        on_dir[X] = {e: ((), e) for e in p.dirs[J]}
    return PolyMor(yp, p, on_pos, on_dir, check=False)


def tri_right_unitor(p: Poly) -> PolyMor:
    """ρ : p ◁ y → p."""
    py = compose_tri(p, identity_y())
    on_pos, on_dir = {}, {}
    for X in py.positions:
        I = X[0]
        on_pos[X] = I
        on_dir[X] = {d: (d, ()) for d in p.dirs[I]}
    return PolyMor(py, p, on_pos, on_dir, check=False)


def tri_associator(p: Poly, q: Poly, r: Poly, budget: int | None = None) -> PolyMor:
    """α : (p ◁ q) ◁ r → p ◁ (q ◁ r)."""
    pq = compose_tri(p, q, budget)
    left = compose_tri(pq, r, budget)
    right = compose_tri(p, compose_tri(q, r, budget), budget)
    on_pos, on_dir = {}, {}
    for X in left.positions:
        (I, f), g = X
        gd = dict(g)
        F = tuple(
            (d, (J, tuple((e, gd[(d, e)]) for e in q.dirs[J])))
            for d, J in f
        )
        Y = (I, F)
        on_pos[X] = Y
        on_dir[X] = {(d, (e, h)): ((d, e), h) for d, (e, h) in right.dirs[Y]}
    return PolyMor(left, right, on_pos, on_dir, check=False)


# ---- the Dirichlet product ⊗ ------------------------------------------------------


def tensor(p, q):
    if not isinstance(p, Poly):
        from .psh_poly import psh_tensor

        return psh_tensor(p, q)
    return Poly({(I, J): product(p.dirs[I], q.dirs[J]) for I in p.positions for J in q.positions})


def tensor_mor(phi: PolyMor, psi: PolyMor) -> PolyMor:
    dom = tensor(phi.dom, psi.dom)
    cod = tensor(phi.cod, psi.cod)
    on_pos, on_dir = {}, {}
    for I, J in dom.positions:
        I2, J2 = phi.on_pos[I], psi.on_pos[J]
        on_pos[(I, J)] = (I2, J2)
        a, b = phi.on_dir[I], psi.on_dir[J]
        on_dir[(I, J)] = {(d, e): (a[d], b[e]) for d, e in cod.dirs[(I2, J2)]}
    return PolyMor(dom, cod, on_pos, on_dir, check=False)


def _relabel_iso(dom: Poly, cod: Poly, pos: dict, back: dict) -> PolyMor:
    return PolyMor(dom, cod, pos, back, check=False)


def tensor_left_unitor(p: Poly) -> PolyMor:
    """y ⊗ p → p."""
    yp = tensor(identity_y(), p)
    return _relabel_iso(
        yp,
        p,
        {((), I): I for I in p.positions},
        {((), I): {d: ((), d) for d in p.dirs[I]} for I in p.positions},
    )


def tensor_right_unitor(p: Poly) -> PolyMor:
    """p ⊗ y → p."""
    py = tensor(p, identity_y())
    return _relabel_iso(
        py,
        p,
        {(I, ()): I for I in p.positions},
        {(I, ()): {d: (d, ()) for d in p.dirs[I]} for I in p.positions},
    )


def tensor_associator(p: Poly, q: Poly, r: Poly) -> PolyMor:
    """(p ⊗ q) ⊗ r → p ⊗ (q ⊗ r)."""
    left = tensor(tensor(p, q), r)
    right = tensor(p, tensor(q, r))
    on_pos, on_dir = {}, {}
    for (I, J), K in left.positions:
        on_pos[((I, J), K)] = (I, (J, K))
        on_dir[((I, J), K)] = {(a, (b, c)): ((a, b), c) for a, (b, c) in right.dirs[(I, (J, K))]}
    return _relabel_iso(left, right, on_pos, on_dir)


def braiding(p: Poly, q: Poly) -> PolyMor:
    """σ : p ⊗ q → q ⊗ p."""
    pq, qp = tensor(p, q), tensor(q, p)
    return _relabel_iso(
        pq,
        qp,
        {(I, J): (J, I) for I, J in pq.positions},
        {(I, J): {(e, d): (d, e) for e, d in qp.dirs[(J, I)]} for I, J in pq.positions},
    )


# ---- polynomial functors --------------------------------------------------------------


def eval_size(p: Poly, n: int) -> int:
    return sum(n ** len(p.dirs[I]) for I in p.positions)


def eval_functor(p: Poly, X: FinSet, budget: int | None = None) -> FinSet:
    """P(p)(X) = ⨿_I X^{p[I]}, elements (I, ((d, x), ...))."""
    check_budget(eval_size(p, len(X)), budget, "P(p)(X) construction")
    out = []
    for I in p.positions:
        ds = p.dirs[I].elements
        for xs in itertools.product(X.elements, repeat=len(ds)):
            out.append((I, tuple(zip(ds, xs))))
    return FinSet(out)


def eval_functor_mor(p: Poly, h: FinFn, budget: int | None = None) -> FinFn:
    """P(p)(h)(I, g) = (I, h ∘ g)."""
    dom = eval_functor(p, h.dom, budget)
    cod = eval_functor(p, h.cod, budget)
    m = h.map
    return FinFn(dom, cod, {(I, g): (I, tuple((d, m[x]) for d, x in g)) for I, g in dom})


def eval_nat(phi: PolyMor, X: FinSet, budget: int | None = None) -> FinFn:
    """P(φ)_X(I, g) = (φ1 I, g ∘ φ♯_I)."""
    dom = eval_functor(phi.dom, X, budget)
    cod = eval_functor(phi.cod, X, budget)
    out = {}
    for I, g in dom:
        gd = dict(g)
        J = phi.on_pos[I]
        back = phi.on_dir[I]
        out[(I, g)] = (J, tuple((e, gd[back[e]]) for e in phi.cod.dirs[J]))
    return FinFn(dom, cod, out)


def functor_comparison(p: Poly, q: Poly, X: FinSet, budget: int | None = None) -> FinFn:
    """The canonical map P(p ◁ q)(X) → P(p)(P(q)(X)) read off from ◁'s labels."""
    pq = compose_tri(p, q, budget)
    dom = eval_functor(pq, X, budget)
    cod = eval_functor(p, eval_functor(q, X, budget), budget)
    out = {}
    for (I, f), g in dom:
        gd = dict(g)
        out[((I, f), g)] = (
            I,
            tuple((d, (J, tuple((e, gd[(d, e)]) for e in q.dirs[J]))) for d, J in f),
        )
    return FinFn(dom, cod, out)


def strength(p: Poly, A: FinSet, B: FinSet, budget: int | None = None) -> FinFn:
    """τ : A × P(p)(B) → P(p)(A × B), τ(a, (I, g)) = (I, d ↦ (a, g(d)))."""
    PB = eval_functor(p, B, budget)
    dom = product(A, PB)
    cod = eval_functor(p, product(A, B), budget)
    return FinFn(dom, cod, {(a, (I, g)): (I, tuple((d, (a, x)) for d, x in g)) for a, (I, g) in dom})


def scalar(A: FinSet, q: Poly) -> Poly:
    """Aq: positions (a, J), directions q[J]."""
    return Poly({(a, J): q.dirs[J] for a in A for J in q.positions})


def p_star(p: Poly) -> tuple[Poly, PolyMor]:
    """p_*, with positions (I, d) and directions p[I], and its cartesian map to p."""
    ps = Poly({(I, d): p.dirs[I] for I in p.positions for d in p.dirs[I]})
    proj = PolyMor(
        ps,
        p,
        {(I, d): I for I, d in ps.positions},
        {(I, d): {e: e for e in p.dirs[I]} for I, d in ps.positions},
        check=False,
    )
    return ps, proj


# ---- isomorphisms and hom-sets ---------------------------------------------------------


def iso_check(p: Poly, q: Poly) -> PolyMor | None:
    """An isomorphism p → q when the arity multisets agree, else None.

    Positions are matched in canonical order within each arity class and
    directions in canonical order within each fiber.
    """
    if sorted(p.arities()) != sorted(q.arities()):
        return None
    if p == q:
        return mor_id(p)
    by_arity: dict = {}
    for J in q.positions:
        by_arity.setdefault(len(q.dirs[J]), []).append(J)
    on_pos, on_dir = {}, {}
    used = {k: 0 for k in by_arity}
    for I in p.positions:
        k = len(p.dirs[I])
        J = by_arity[k][used[k]]
        used[k] += 1
        on_pos[I] = J
        on_dir[I] = dict(zip(q.dirs[J].elements, p.dirs[I].elements))
    return PolyMor(p, q, on_pos, on_dir, check=False)


def hom_count(p: Poly, q: Poly) -> int:
    n = 1
    for I in p.positions:
        k = len(p.dirs[I])
        n *= sum(k ** len(q.dirs[J]) for J in q.positions)
    return n


def hom_enumerate(p: Poly, q: Poly, budget: int | None = None) -> list[PolyMor]:
    """All morphisms p → q in canonical order."""
    check_budget(hom_count(p, q), budget, "hom enumeration")
    per_pos = []
    for I in p.positions:
        opts = []
        ds = p.dirs[I].elements
        for J in q.positions:
            es = q.dirs[J].elements
            for images in itertools.product(ds, repeat=len(es)):
                opts.append((J, dict(zip(es, images))))
        per_pos.append(opts)
    out = []
    Ps = p.positions.elements
    for choice in itertools.product(*per_pos):
        on_pos = {I: c[0] for I, c in zip(Ps, choice)}
        on_dir = {I: c[1] for I, c in zip(Ps, choice)}
        out.append(PolyMor(p, q, on_pos, on_dir, check=False))
    return out


def sort_mors(ms: Iterable[PolyMor]) -> list[PolyMor]:
    return sorted(ms, key=lambda m: label_key(m.as_label()))
