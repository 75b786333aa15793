"""Interchange, the closure for ⊗, and the two coclosures for ◁.

Labels:

* ``[p, q]`` has the morphisms ``φ : p → q`` (as :meth:`PolyMor.as_label`) for
  positions and pairs ``(I, j)`` with ``j ∈ q[φ1 I]`` for directions;
* ``⟨p|q⟩`` has the positions of ``p`` and directions ``(J, h)`` where ``h``
  is a table of a function ``q[J] → p[I]``;
* ``p ⌢_f q`` has positions ``(I, e)`` with ``e ∈ q[f(I)]`` and directions
  ``p[I]``.
"""

from __future__ import annotations

import itertools

from .errors import TypeMismatch, check_budget
from .poly import (
    Poly,
    PolyMor,
    braiding,
    compose_all,
    compose_tri,
    compose_tri_mor,
    hom_enumerate,
    identity_y,
    is_cartesian,
    mor_compose,
    mor_id,
    tensor,
    tensor_mor,
)
from .sets import FinFn


def _tensor_factors_ok(phi: PolyMor, p: Poly, q: Poly) -> None:
    if phi.dom != tensor(p, q):
        raise TypeMismatch("map domain is not the stated tensor product")


# ---- interchange -----------------------------------------------------------------------


def interchange(p1: Poly, p2: Poly, q1: Poly, q2: Poly, budget: int | None = None) -> PolyMor:
    """(p1 ◁ p2) ⊗ (q1 ◁ q2) → (p1 ⊗ q1) ◁ (p2 ⊗ q2).

    The position ((I, f), (K, g)) goes to ((I, K), f × g); the direction
    ((d, k), (e, l)) comes back as ((d, e), (k, l)).
    """
    dom = tensor(compose_tri(p1, p2, budget), compose_tri(q1, q2, budget))
    cod = compose_tri(tensor(p1, q1), tensor(p2, q2), budget)
    on_pos, on_dir = {}, {}
    for X in dom.positions:
        (I, f), (K, g) = X
        fd, gd = dict(f), dict(g)
        h = tuple(((d, k), (fd[d], gd[k])) for d in p1.dirs[I] for k in q1.dirs[K])
        Y = ((I, K), h)
        on_pos[X] = Y
        on_dir[X] = {((d, k), (e, l)): ((d, e), (k, l)) for (d, k), (e, l) in cod.dirs[Y]}
    return PolyMor(dom, cod, on_pos, on_dir, check=False)


# ---- closure --------------------------------------------------------------------------


def closure(p: Poly, q: Poly, budget: int | None = None) -> Poly:
    """[p, q]: positions Hom(p, q), directions ⨿_I q[φ1 I]."""
    dirs = {}
    for phi in hom_enumerate(p, q, budget):
        dirs[phi.as_label()] = [(I, j) for I in p.positions for j in q.dirs[phi.on_pos[I]]]
    return Poly(dirs)


def closure_eval(p: Poly, q: Poly, budget: int | None = None) -> PolyMor:
    """p ⊗ [p, q] → q."""
    pq = closure(p, q, budget)
    dom = tensor(p, pq)
    on_pos, on_dir = {}, {}
    for I, lab in dom.positions:
        phi = PolyMor.from_label(p, q, lab)
        J = phi.on_pos[I]
        on_pos[(I, lab)] = J
        on_dir[(I, lab)] = {j: (phi.on_dir[I][j], (I, j)) for j in q.dirs[J]}
    return PolyMor(dom, q, on_pos, on_dir, check=False)


def _pair_with(p: Poly, q: Poly, J) -> PolyMor:
    pq = tensor(p, q)
    return PolyMor(
        p,
        pq,
        {I: (I, J) for I in p.positions},
        {I: {(d, e): d for d, e in pq.dirs[(I, J)]} for I in p.positions},
        check=False,
    )


def closure_pair(p: Poly, q: Poly, budget: int | None = None) -> PolyMor:
    """q → [p, p ⊗ q], J ↦ (I ↦ (I, J))."""
    cod = closure(p, tensor(p, q), budget)
    on_pos, on_dir = {}, {}
    for J in q.positions:
        lab = _pair_with(p, q, J).as_label()
        on_pos[J] = lab
        on_dir[J] = {(I, (d, e)): e for I, (d, e) in cod.dirs[lab]}
    return PolyMor(q, cod, on_pos, on_dir, check=False)


def closure_transpose(phi: PolyMor, p: Poly, q: Poly, budget: int | None = None) -> PolyMor:
    """φ : p ⊗ q → r  ↦  p → [q, r]."""
    _tensor_factors_ok(phi, p, q)
    r = phi.cod
    qr = closure(q, r, budget)
    on_pos, on_dir = {}, {}
    for I in p.positions:
        inner = PolyMor(
            q,
            r,
            {J: phi.on_pos[(I, J)] for J in q.positions},
            {J: {k: phi.on_dir[(I, J)][k][1] for k in r.dirs[phi.on_pos[(I, J)]]} for J in q.positions},
            check=False,
        )
        lab = inner.as_label()
        on_pos[I] = lab
        on_dir[I] = {(J, k): phi.on_dir[(I, J)][k][0] for J, k in qr.dirs[lab]}
    return PolyMor(p, qr, on_pos, on_dir, check=False)


def closure_untranspose(psi: PolyMor, q: Poly, r: Poly) -> PolyMor:
    """ψ : p → [q, r]  ↦  p ⊗ q → r."""
    p = psi.dom
    dom = tensor(p, q)
    on_pos, on_dir = {}, {}
    for I in p.positions:
        inner = PolyMor.from_label(q, r, psi.on_pos[I])
        for J in q.positions:
            K = inner.on_pos[J]
            on_pos[(I, J)] = K
            on_dir[(I, J)] = {k: (psi.on_dir[I][(J, k)], inner.on_dir[J][k]) for k in r.dirs[K]}
    return PolyMor(dom, r, on_pos, on_dir, check=False)


def closure_functor(gamma: PolyMor, psi: PolyMor, budget: int | None = None) -> PolyMor:
    """[γ, ψ] : [p, q] → [p', q'] for γ : p' → p and ψ : q → q', φ ↦ ψ ∘ φ ∘ γ."""
    p2, p = gamma.dom, gamma.cod
    q, q2 = psi.dom, psi.cod
    dom = closure(p, q, budget)
    cod = closure(p2, q2, budget)
    on_pos, on_dir = {}, {}
    for lab in dom.positions:
        phi = PolyMor.from_label(p, q, lab)
        new = compose_all(gamma, phi, psi).as_label()
        on_pos[lab] = new
        on_dir[lab] = {
            (I2, j2): (gamma.on_pos[I2], psi.on_dir[phi.on_pos[gamma.on_pos[I2]]][j2])
            for I2, j2 in cod.dirs[new]
        }
    return PolyMor(dom, cod, on_pos, on_dir, check=False)


def closure_unit_iso(q: Poly, budget: int | None = None) -> PolyMor:
    """[y, q] → q, φ ↦ φ1(()) with directions j ↦ ((), j)."""
    y = identity_y()
    yq = closure(y, q, budget)
    on_pos, on_dir = {}, {}
    for lab in yq.positions:
        phi = PolyMor.from_label(y, q, lab)
        J = phi.on_pos[()]
        on_pos[lab] = J
        on_dir[lab] = {j: ((), j) for j in q.dirs[J]}
    return PolyMor(yq, q, on_pos, on_dir, check=False)


# ---- right coclosure ----------------------------------------------------------------------


def right_coclosure(p: Poly, q: Poly, budget: int | None = None) -> Poly:
    """⟨p|q⟩: positions P, directions ⨿_J p[I]^{q[J]} labelled (J, table)."""
    need = sum(len(p.dirs[I]) ** len(q.dirs[J]) for I in p.positions for J in q.positions)
    check_budget(need, budget, "right coclosure construction")
    dirs = {}
    for I in p.positions:
        ds = []
        for J in q.positions:
            es = q.dirs[J].elements
            for imgs in itertools.product(p.dirs[I].elements, repeat=len(es)):
                ds.append((J, tuple(zip(es, imgs))))
        dirs[I] = ds
    return Poly(dirs)


def rc_transpose(psi: PolyMor, r: Poly, q: Poly, budget: int | None = None) -> PolyMor:
    """ψ : p → r ◁ q  ↦  ⟨p|q⟩ → r."""
    p = psi.dom
    if psi.cod != compose_tri(r, q, budget):
        raise TypeMismatch("map codomain is not the stated composite r ◁ q")
    dom = right_coclosure(p, q, budget)
    on_pos, on_dir = {}, {}
    for I in p.positions:
        K, f = psi.on_pos[I]
        on_pos[I] = K
        back = psi.on_dir[I]
        on_dir[I] = {k: (J, tuple((e, back[(k, e)]) for e in q.dirs[J])) for k, J in f}
    return PolyMor(dom, r, on_pos, on_dir, check=False)


def rc_untranspose(phi: PolyMor, p: Poly, q: Poly, budget: int | None = None) -> PolyMor:
    """φ : ⟨p|q⟩ → r  ↦  p → r ◁ q."""
    r = phi.cod
    if phi.dom != right_coclosure(p, q, budget):
        raise TypeMismatch("map domain is not the stated coclosure ⟨p|q⟩")
    cod = compose_tri(r, q, budget)
    on_pos, on_dir = {}, {}
    for I in p.positions:
        K = phi.on_pos[I]
        back = phi.on_dir[I]
        on_pos[I] = (K, tuple((k, back[k][0]) for k in r.dirs[K]))
        on_dir[I] = {(k, e): dict(back[k][1])[e] for k in r.dirs[K] for e in q.dirs[back[k][0]]}
    return PolyMor(p, cod, on_pos, on_dir, check=False)


def rc_unit_iso(p: Poly) -> PolyMor:
    """⟨p|y⟩ → p: identity on positions, d ↦ ((), (((), d),))."""
    py = right_coclosure(p, identity_y())
    return PolyMor(
        py,
        p,
        {I: I for I in p.positions},
        {I: {d: ((), (((), d),)) for d in p.dirs[I]} for I in p.positions},
        check=False,
    )


# ---- indexed left coclosure ---------------------------------------------------------------


def frown(p: Poly, f: FinFn, q: Poly) -> Poly:
    """p ⌢_f q for a position map f : P → Q."""
    if f.dom != p.positions or f.cod != q.positions:
        raise TypeMismatch("frown index must be a map from the positions of p to those of q")
    return Poly({(I, e): p.dirs[I] for I in p.positions for e in q.dirs[f.map[I]]})


def frown_transpose(psi: PolyMor, q: Poly, r: Poly, budget: int | None = None) -> tuple[FinFn, PolyMor]:
    """ψ : p → q ◁ r  ↦  (f, p ⌢_f q → r)."""
    p = psi.dom
    if psi.cod != compose_tri(q, r, budget):
        raise TypeMismatch("map codomain is not the stated composite q ◁ r")
    f = FinFn(p.positions, q.positions, {I: psi.on_pos[I][0] for I in p.positions})
    dom = frown(p, f, q)
    on_pos, on_dir = {}, {}
    for I, e in dom.positions:
        g = dict(psi.on_pos[I][1])
        K = g[e]
        on_pos[(I, e)] = K
        on_dir[(I, e)] = {h: psi.on_dir[I][(e, h)] for h in r.dirs[K]}
    return f, PolyMor(dom, r, on_pos, on_dir, check=False)


def frown_untranspose(f: FinFn, phi: PolyMor, p: Poly, q: Poly, budget: int | None = None) -> PolyMor:
    """(f, φ : p ⌢_f q → r)  ↦  p → q ◁ r."""
    r = phi.cod
    if phi.dom != frown(p, f, q):
        raise TypeMismatch("map domain is not the stated p ⌢_f q")
    cod = compose_tri(q, r, budget)
    on_pos, on_dir = {}, {}
    for I in p.positions:
        J = f.map[I]
        g = tuple((e, phi.on_pos[(I, e)]) for e in q.dirs[J])
        on_pos[I] = (J, g)
        on_dir[I] = {(e, h): phi.on_dir[(I, e)][h] for e, K in g for h in r.dirs[K]}
    return PolyMor(p, cod, on_pos, on_dir, check=False)


def frown_reindex_iso(p: Poly, f: FinFn, phi: PolyMor) -> PolyMor:
    """p ⌢_f q → p ⌢_{φ1∘f} q′ for a cartesian φ : q → q′."""
    if not is_cartesian(phi):
        raise TypeMismatch("reindexing a frown needs a cartesian map")
    q, q2 = phi.dom, phi.cod
    f2 = FinFn(f.dom, q2.positions, {I: phi.on_pos[f.map[I]] for I in f.dom})
    dom, cod = frown(p, f, q), frown(p, f2, q2)
    on_pos, on_dir = {}, {}
    for I in p.positions:
        inv = {e: e2 for e2, e in phi.on_dir[f.map[I]].items()}
        for e in q.dirs[f.map[I]]:
            on_pos[(I, e)] = (I, inv[e])
            on_dir[(I, e)] = {d: d for d in p.dirs[I]}
    return PolyMor(dom, cod, on_pos, on_dir, check=False)


def frown_tensor_iso(p1: Poly, f1: FinFn, q1: Poly, p2: Poly, f2: FinFn, q2: Poly) -> PolyMor:
    """(p1 ⊗ p2) ⌢_{f1×f2} (q1 ⊗ q2) → (p1 ⌢_{f1} q1) ⊗ (p2 ⌢_{f2} q2)."""
    from .sets import product_map

    dom = frown(tensor(p1, p2), product_map(f1, f2), tensor(q1, q2))
    cod = tensor(frown(p1, f1, q1), frown(p2, f2, q2))
    on_pos, on_dir = {}, {}
    for X in dom.positions:
        (I1, I2), (e1, e2) = X
        on_pos[X] = ((I1, e1), (I2, e2))
        on_dir[X] = {de: de for de in dom.dirs[X]}
    return PolyMor(dom, cod, on_pos, on_dir, check=False)


# ---- derived comparison maps ---------------------------------------------------------------


def closure_tri_lax(p1: Poly, q1: Poly, p2: Poly, q2: Poly, budget: int | None = None) -> PolyMor:
    """[p1, q1] ◁ [p2, q2] → [p1 ◁ p2, q1 ◁ q2].

    Transpose of the composite of braiding, interchange and the two
    evaluations ``X ⊗ (p1 ◁ p2) → (p1 ⊗ [p1,q1]) ◁ (p2 ⊗ [p2,q2]) → q1 ◁ q2``.
    """
    A, B = closure(p1, q1, budget), closure(p2, q2, budget)
    X = compose_tri(A, B, budget)
    P = compose_tri(p1, p2, budget)
    phi = compose_all(
        braiding(X, P),
        interchange(p1, p2, A, B, budget),
        compose_tri_mor(closure_eval(p1, q1, budget), closure_eval(p2, q2, budget), budget),
    )
    return closure_transpose(phi, X, P, budget)


def coclosure_tensor_map(p1: Poly, q1: Poly, p2: Poly, q2: Poly, budget: int | None = None) -> PolyMor:
    """⟨p1 ⊗ p2 | q1 ⊗ q2⟩ → ⟨p1|q1⟩ ⊗ ⟨p2|q2⟩.

    Transpose of ``p1 ⊗ p2 → (⟨p1|q1⟩ ◁ q1) ⊗ (⟨p2|q2⟩ ◁ q2) → (⟨p1|q1⟩ ⊗ ⟨p2|q2⟩) ◁ (q1 ⊗ q2)``,
    the first map being the tensor of the two units.
    """
    C1, C2 = right_coclosure(p1, q1, budget), right_coclosure(p2, q2, budget)
    eta1 = rc_untranspose(mor_id(C1), p1, q1, budget)
    eta2 = rc_untranspose(mor_id(C2), p2, q2, budget)
    psi = mor_compose(tensor_mor(eta1, eta2), interchange(C1, q1, C2, q2, budget))
    return rc_transpose(psi, tensor(C1, C2), tensor(q1, q2), budget)


def rc_functor(phi: PolyMor, q: Poly, budget: int | None = None) -> PolyMor:
    """⟨φ|q⟩ : ⟨p|q⟩ → ⟨p′|q⟩, the transpose of p → p′ → ⟨p′|q⟩ ◁ q."""
    p2 = phi.cod
    C2 = right_coclosure(p2, q, budget)
    eta = rc_untranspose(mor_id(C2), p2, q, budget)
    return rc_transpose(mor_compose(phi, eta), C2, q, budget)


