"""Connected limits of polynomials.

Limits of connected diagrams whose edges are cartesian are computed on
positions, with directions transported from a base node along the edge
bijections. Equalizers of arbitrary parallel pairs are also available; there
the fibers become coequalizers of the two backward maps.
"""

from __future__ import annotations

from collections import deque
from typing import Mapping, Sequence

from .errors import InvalidStructure, TypeMismatch, check_budget
from .labels import Label, label_key
from .poly import Poly, PolyMor, is_cartesian


Edge = tuple  # (source node, target node, PolyMor)


def _check_diagram(nodes: Mapping[Label, Poly], edges: Sequence[Edge]) -> list:
    if not nodes:
        raise TypeMismatch("empty diagram")
    for s, t, m in edges:
        if s not in nodes or t not in nodes:
            raise TypeMismatch(f"edge {s!r} → {t!r} mentions an unknown node")
        if m.dom != nodes[s] or m.cod != nodes[t]:
            raise TypeMismatch(f"edge {s!r} → {t!r} is not typed by its endpoints")
        if not is_cartesian(m):
            raise TypeMismatch(f"edge {s!r} → {t!r} is not cartesian")
    order = sorted(nodes, key=label_key)
    adj = {n: [] for n in order}
    for s, t, _ in edges:
        adj[s].append(t)
        adj[t].append(s)
    seen = {order[0]}
    todo = deque([order[0]])
    while todo:
        n = todo.popleft()
        for k in adj[n]:
            if k not in seen:
                seen.add(k)
                todo.append(k)
    if len(seen) != len(order):
        raise TypeMismatch("diagram is not connected")
    return order


def _families(nodes, edges, order, budget) -> list[tuple]:
    """Compatible families of positions, as tuples indexed like ``order``."""
    out_edges = {n: [] for n in order}
    for s, t, m in edges:
        out_edges[s].append((t, m))
    results = []
    limit = budget

    def extend(i, fam):
        if i == len(order):
            results.append(tuple(fam[n] for n in order))
            if limit is not None:
                check_budget(len(results), limit, "limit positions")
            return
        n = order[i]
        if n in fam:
            extend(i + 1, fam)
            return
        for x in nodes[n].positions:
            new = {n: x}
            ok = _propagate(fam, new, out_edges, edges)
            if ok:
                merged = dict(fam)
                merged.update(new)
                extend(i + 1, merged)

    extend(0, {})
    return results


def _propagate(fam, new, out_edges, edges) -> bool:
    """Force positions along outgoing edges and check every edge between
    assigned nodes."""
    todo = list(new.items())
    while todo:
        n, x = todo.pop()
        for t, m in out_edges[n]:
            y = m.on_pos[x]
            have = new.get(t, fam.get(t))
            if have is None:
                new[t] = y
                todo.append((t, y))
            elif have != y:
                return False
    assigned = {**fam, **new}
    for s, t, m in edges:
        if s in assigned and t in assigned and m.on_pos[assigned[s]] != assigned[t]:
            return False
    return True


def cartesian_limit(
    nodes: Mapping[Label, Poly], edges: Sequence[Edge], budget: int | None = None
) -> tuple[Poly, dict]:
    """Limit of a finite connected diagram of cartesian maps.

    Positions are compatible families ``(x_n for n in sorted nodes)``; the
    direction set at a family is the fiber of the first node. Returns the
    limit and its projection cone ``{node: PolyMor}``. Raises
    :class:`InvalidStructure` when transporting directions around a cycle of
    the diagram is not the identity, since the formula is then not a limit.
    """
    order = _check_diagram(nodes, edges)
    base = order[0]
    fams = _families(nodes, edges, order, budget)
    idx = {n: i for i, n in enumerate(order)}
    L = Poly({fam: nodes[base].dirs[fam[0]] for fam in fams})

    # spanning tree from the base node; π♯_j is computed from a neighbour's
    tree = []
    seen = {base}
    todo = deque([base])
    while todo:
        n = todo.popleft()
        for s, t, m in edges:
            if s == n and t not in seen:
                seen.add(t)
                tree.append((n, t, m, "out"))
                todo.append(t)
            elif t == n and s not in seen:
                seen.add(s)
                tree.append((n, s, m, "in"))
                todo.append(s)

    back: dict = {base: {fam: {d: d for d in nodes[base].dirs[fam[0]]} for fam in fams}}
    for n, k, m, way in tree:
        back[k] = {}
        for fam in fams:
            xn, xk = fam[idx[n]], fam[idx[k]]
            bn = back[n][fam]
            if way == "out":
                # m : n → k, π_k♯ = π_n♯ ∘ m♯
                back[k][fam] = {e: bn[m.on_dir[xn][e]] for e in nodes[k].dirs[xk]}
            else:
                # m : k → n, π_k♯ = π_n♯ ∘ (m♯)^{-1}
                inv = {d: e for e, d in m.on_dir[xk].items()}
                back[k][fam] = {d: bn[inv[d]] for d in nodes[k].dirs[xk]}

    for s, t, m in edges:
        for fam in fams:
            xs = fam[idx[s]]
            bs, bt = back[s][fam], back[t][fam]
            for e in nodes[t].dirs[fam[idx[t]]]:
                if bs[m.on_dir[xs][e]] != bt[e]:
                    raise InvalidStructure(
                        f"directions transported around the diagram disagree at family {fam!r}"
                    )

    cone = {
        n: PolyMor(L, nodes[n], {fam: fam[idx[n]] for fam in fams}, {fam: back[n][fam] for fam in fams}, check=False)
        for n in order
    }
    return L, cone


def mediate(L: Poly, cone: Mapping[Label, PolyMor], probe: Mapping[Label, PolyMor]) -> PolyMor:
    """The map p → L induced by a cone ``probe`` over the same diagram.

    Raises :class:`InvalidStructure` if the induced map does not factor the
    probe cone, which happens exactly when ``probe`` is not a cone.
    """
    order = sorted(cone, key=label_key)
    base = order[0]
    p = probe[base].dom
    on_pos, on_dir = {}, {}
    for x in p.positions:
        fam = tuple(probe[n].on_pos[x] for n in order)
        if fam not in L.dirs:
            raise InvalidStructure(f"probe position {x!r} gives an incompatible family")
        on_pos[x] = fam
        on_dir[x] = {d: probe[base].on_dir[x][d] for d in L.dirs[fam]}
    m = PolyMor(p, L, on_pos, on_dir, check=False)
    from .poly import mor_compose

    for n in order:
        if mor_compose(m, cone[n]) != probe[n]:
            raise InvalidStructure(f"probe does not factor through the limit at node {n!r}")
    return m


def cartesian_equalizer(phi: PolyMor, psi: PolyMor) -> tuple[Poly, PolyMor]:
    """Equalizer of two parallel cartesian maps, labelled by domain positions.

    Agrees with :func:`cartesian_limit` on the two-node diagram up to the
    relabelling of a family ``(x, φ1 x)`` to ``x``.
    """
    if phi.dom != psi.dom or phi.cod != psi.cod:
        raise TypeMismatch("equalizer of non-parallel maps")
    if not (is_cartesian(phi) and is_cartesian(psi)):
        raise TypeMismatch("cartesian_equalizer needs cartesian maps")
    p = phi.dom
    keep = []
    for x in p.positions:
        if phi.on_pos[x] != psi.on_pos[x]:
            continue
        if phi.on_dir[x] != psi.on_dir[x]:
            raise InvalidStructure(f"backward maps differ at equalized position {x!r}")
        keep.append(x)
    E = Poly({x: p.dirs[x] for x in keep})
    inc = PolyMor(E, p, {x: x for x in keep}, {x: {d: d for d in p.dirs[x]} for x in keep}, check=False)
    return E, inc


def poly_equalizer(phi: PolyMor, psi: PolyMor) -> tuple[Poly, PolyMor]:
    """Equalizer of an arbitrary parallel pair.

    Positions are those where φ1 and ψ1 agree; the fiber over x is the
    quotient of p[x] identifying φ♯(e) with ψ♯(e), each class labelled by
    its least member.
    """
    if phi.dom != psi.dom or phi.cod != psi.cod:
        raise TypeMismatch("equalizer of non-parallel maps")
    p = phi.dom
    dirs, back = {}, {}
    for x in p.positions:
        y = phi.on_pos[x]
        if y != psi.on_pos[x]:
            continue
        parent = {d: d for d in p.dirs[x]}

        def find(d):
            while parent[d] != d:
                parent[d] = parent[parent[d]]
                d = parent[d]
            return d

        for e in phi.cod.dirs[y]:
            a, b = find(phi.on_dir[x][e]), find(psi.on_dir[x][e])
            if a != b:
                lo, hi = sorted((a, b), key=label_key)
                parent[hi] = lo
        classes: dict = {}
        for d in p.dirs[x]:
            classes.setdefault(find(d), []).append(d)
        rep = {d: min(members, key=label_key) for members in classes.values() for d in members}
        dirs[x] = sorted(set(rep.values()), key=label_key)
        back[x] = rep
    E = Poly(dirs)
    inc = PolyMor(E, p, {x: x for x in dirs}, back, check=False)
    return E, inc
