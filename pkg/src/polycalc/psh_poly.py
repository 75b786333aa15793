"""Polynomials over a presheaf category on a finite base.

A polynomial is a presheaf map ``P_* → P``. A morphism ``p → q`` is a pair
``(φ1 : P → Q, φ♯ : P ×_Q Q_* → P_*)`` with φ♯ lying over P. The composite
``p ◁ q`` is computed with :func:`presheaf_pi` and then relabelled so that a
position at ``a`` reads ``(x, f)`` with ``x ∈ P(a)`` and ``f`` a table from the
elements ``(c, (v, e))`` of ``Δ_x P_*`` to ``Q``, and a direction reads
``((x, f), (e, e'))`` with ``e ∈ P_*(a)`` over ``x`` and ``e' ∈ Q_*(a)`` over
``f(a, (id, e))``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TypeMismatch
from .fincat import FinCat, Report
from .presheaf import (
    Presheaf,
    PshMor,
    identity_pshmor,
    make_presheaf,
    make_pshmor,
    presheaf_pi,
    product_presheaf,
    pullback_of_representable,
    pullback_presheaf,
    pshmor_validate,
    terminal_presheaf,
)


@dataclass(frozen=True, eq=False)
class PshPoly:
    proj: PshMor  # P_* → P

    @property
    def base(self) -> FinCat:
        return self.proj.cod.base

    @property
    def positions(self) -> Presheaf:
        return self.proj.cod

    @property
    def total(self) -> Presheaf:
        return self.proj.dom

    def __eq__(self, other) -> bool:
        return isinstance(other, PshPoly) and self.proj == other.proj

    def __hash__(self):
        return hash(self.proj)

    def fiber(self, a, x) -> list:
        """Elements of P_*(a) over x ∈ P(a)."""
        return [e for e in self.total.at[a] if self.proj(a, e) == x]


def pshpoly_validate(p: PshPoly) -> Report:
    from .presheaf import presheaf_validate

    r = Report("presheaf polynomial")
    for X in (p.positions, p.total):
        r.violations.extend(presheaf_validate(X).violations)
    r.violations.extend(pshmor_validate(p.proj).violations)
    return r


class PshPolyMor:
    __slots__ = ("dom", "cod", "phi1", "phisharp")

    def __init__(self, dom: PshPoly, cod: PshPoly, phi1: PshMor, phisharp: PshMor):
        self.dom, self.cod, self.phi1, self.phisharp = dom, cod, phi1, phisharp

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PshPolyMor)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.phi1 == other.phi1
            and self.phisharp == other.phisharp
        )

    def __hash__(self):
        return hash(self.phi1)

    def first_difference(self, other: "PshPolyMor"):
        base = self.dom.base
        for a in base.objects:
            for x in self.dom.positions.at[a]:
                if self.phi1(a, x) != other.phi1(a, x):
                    return (a, x, None)
        for a in base.objects:
            for pair in self.phisharp.dom.at[a]:
                if self.phisharp(a, pair) != other.phisharp(a, pair):
                    return (a, pair[0], pair[1])
        return None


def sharp_domain(phi1: PshMor, q: PshPoly) -> Presheaf:
    return pullback_presheaf(phi1, q.proj)[0]


def make_pshpolymor(p: PshPoly, q: PshPoly, pos, back) -> PshPolyMor:
    """From ``pos(a, x)`` and ``back(a, x, e)`` (e over pos(a, x))."""
    phi1 = make_pshmor(p.positions, q.positions, pos)
    D = sharp_domain(phi1, q)
    return PshPolyMor(p, q, phi1, make_pshmor(D, p.total, lambda a, xe: back(a, xe[0], xe[1])))


def pshpolymor_validate(m: PshPolyMor) -> Report:
    r = Report("presheaf polynomial morphism")
    p, q = m.dom, m.cod
    if m.phi1.dom != p.positions or m.phi1.cod != q.positions:
        r.add("position map typing", None)
        return r
    r.violations.extend(pshmor_validate(m.phi1).violations)
    D = sharp_domain(m.phi1, q)
    if m.phisharp.dom != D or m.phisharp.cod != p.total:
        r.add("direction map typing", None)
        return r
    r.violations.extend(pshmor_validate(m.phisharp).violations)
    for a in p.base.objects:
        for x, e in D.at[a]:
            if p.proj(a, m.phisharp(a, (x, e))) != x:
                r.add("direction map not over positions", (a, x, e))
    return r


def psh_identity_y(base: FinCat) -> PshPoly:
    return PshPoly(identity_pshmor(terminal_presheaf(base)))


def psh_mor_id(p: PshPoly) -> PshPolyMor:
    return make_pshpolymor(p, p, lambda a, x: x, lambda a, x, e: e)


def psh_mor_compose(phi: PshPolyMor, psi: PshPolyMor) -> PshPolyMor:
    if phi.cod != psi.dom:
        raise TypeMismatch("presheaf polynomial maps are not composable")
    return make_pshpolymor(
        phi.dom,
        psi.cod,
        lambda a, x: psi.phi1(a, phi.phi1(a, x)),
        lambda a, x, e: phi.phisharp(a, (x, psi.phisharp(a, (phi.phi1(a, x), e)))),
    )


def psh_is_iso(m: PshPolyMor) -> bool:
    return m.phi1.is_iso() and m.phisharp.is_iso()


def psh_mor_inverse(m: PshPolyMor) -> PshPolyMor:
    if not psh_is_iso(m):
        raise TypeMismatch("inverse of a non-isomorphism")
    base = m.dom.base
    inv1 = {a: {y: x for x, y in m.phi1.components[a].map.items()} for a in base.objects}
    inv_sharp = {a: {d: pair for pair, d in m.phisharp.components[a].map.items()} for a in base.objects}
    return make_pshpolymor(
        m.cod,
        m.dom,
        lambda a, y: inv1[a][y],
        lambda a, y, d: inv_sharp[a][d][1],
    )


# ---- ◁ ------------------------------------------------------------------------------


def _gamma_to_f(table) -> tuple:
    return tuple((k, z[0]) for k, z in table)


def _f_to_gamma(table) -> tuple:
    return tuple((k, (qel, k[1][1])) for k, qel in table)


def psh_compose_tri(p: PshPoly, q: PshPoly, budget: int | None = None) -> PshPoly:
    base = p.base
    if q.base != base:
        raise TypeMismatch("◁ of polynomials over different bases")
    Z, _, to_total = product_presheaf(q.positions, p.total)
    pi = presheaf_pi(p.proj, to_total, budget=budget)
    Pi = pi.dom

    pos_at = {a: [(s, _gamma_to_f(g)) for s, g in Pi.at[a]] for a in base.objects}

    def pos_act(u):
        return lambda el: (lambda r: (r[0], _gamma_to_f(r[1])))(Pi.restrict((el[0], _f_to_gamma(el[1])), u))

    positions = make_presheaf(base, pos_at, {u: pos_act(u) for u in base.morphisms})

    def lookup(a, el, e):
        return dict(el[1])[(a, (base.id(a), e))]

    tot_at = {}
    for a in base.objects:
        out = []
        for el in pos_at[a]:
            for e in p.fiber(a, el[0]):
                qel = lookup(a, el, e)
                for eq in q.fiber(a, qel):
                    out.append((el, (e, eq)))
        tot_at[a] = out

    def tot_act(u):
        def run(d):
            el, (e, eq) = d
            return (positions.restrict(el, u), (p.total.restrict(e, u), q.total.restrict(eq, u)))

        return run

    total = make_presheaf(base, tot_at, {u: tot_act(u) for u in base.morphisms})
    return PshPoly(make_pshmor(total, positions, lambda a, d: d[0]))


def _fiber_table(p: PshPoly, a, x):
    """Elements (c, (v, e)) of Δ_x P_* in canonical order."""
    D, _ = pullback_of_representable(p.proj, a, x)
    return list(D.elements())


def psh_compose_tri_mor(phi: PshPolyMor, psi: PshPolyMor, budget: int | None = None) -> PshPolyMor:
    """φ ◁ ψ : p ◁ q → p' ◁ q'."""
    dom = psh_compose_tri(phi.dom, psi.dom, budget)
    cod = psh_compose_tri(phi.cod, psi.cod, budget)
    base = dom.base
    P = phi.dom.positions

    def pos(a, el):
        x, f = el
        fd = dict(f)
        x2 = phi.phi1(a, x)
        new = tuple(
            ((c, (v, e2)), psi.phi1(c, fd[(c, (v, phi.phisharp(c, (P.restrict(x, v), e2))))]))
            for c, (v, e2) in _fiber_table(phi.cod, a, x2)
        )
        return (x2, new)

    def back(a, el, d2):
        x, f = el
        _, (e2, eq2) = d2
        e = phi.phisharp(a, (x, e2))
        qel = dict(f)[(a, (base.id(a), e))]
        return (el, (e, psi.phisharp(a, (qel, eq2))))

    return make_pshpolymor(dom, cod, pos, back)


def psh_tri_left_unitor(p: PshPoly) -> PshPolyMor:
    """λ : y ◁ p → p."""
    base = p.base
    yp = psh_compose_tri(psh_identity_y(base), p)
    return make_pshpolymor(
        yp,
        p,
        lambda a, el: dict(el[1])[(a, (base.id(a), ()))],
        lambda a, el, e: (el, ((), e)),
    )


def psh_tri_right_unitor(p: PshPoly) -> PshPolyMor:
    """ρ : p ◁ y → p."""
    py = psh_compose_tri(p, psh_identity_y(p.base))
    return make_pshpolymor(py, p, lambda a, el: el[0], lambda a, el, e: (el, (e, ())))


def psh_tri_associator(p: PshPoly, q: PshPoly, r: PshPoly, budget: int | None = None) -> PshPolyMor:
    """α : (p ◁ q) ◁ r → p ◁ (q ◁ r)."""
    base = p.base
    pq = psh_compose_tri(p, q, budget)
    qr = psh_compose_tri(q, r, budget)
    left = psh_compose_tri(pq, r, budget)
    right = psh_compose_tri(p, qr, budget)
    PQ = pq.positions

    def pos(a, el):
        X, g = el  # X = (x, f) a position of p ◁ q at a
        x, f = X
        fd, gd = dict(f), dict(g)
        F = []
        for c, (v, e) in _fiber_table(p, a, x):
            qel = fd[(c, (v, e))]
            Xv = PQ.restrict(X, v)
            h = tuple(
                ((c2, (w, eq)), gd[(c2, (base.comp(v, w), (PQ.restrict(Xv, w), (p.total.restrict(e, w), eq))))])
                for c2, (w, eq) in _fiber_table(q, c, qel)
            )
            F.append(((c, (v, e)), (qel, h)))
        return (x, tuple(F))

    def back(a, el, d):
        X, g = el
        _, (e, ((qel, h), (eq, er))) = d
        return (el, ((X, (e, eq)), er))

    return make_pshpolymor(left, right, pos, back)


# ---- ⊗ ------------------------------------------------------------------------------


def psh_tensor(p: PshPoly, q: PshPoly) -> PshPoly:
    P, _, _ = product_presheaf(p.positions, q.positions)
    T, _, _ = product_presheaf(p.total, q.total)
    return PshPoly(make_pshmor(T, P, lambda a, de: (p.proj(a, de[0]), q.proj(a, de[1]))))


def linear_over(X: Presheaf) -> PshPoly:
    """Xy: positions X with a single direction each."""
    return PshPoly(identity_pshmor(X))
