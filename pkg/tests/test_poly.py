import itertools
import random
from collections import Counter

import pytest
from conftest import mor_between, polys, seeds, small_polys
from hypothesis import given
from hypothesis import strategies as st

from polycalc import corpus
from polycalc import poly as P
from polycalc.errors import BudgetExceeded, InvalidStructure, TypeMismatch
from polycalc.limits import cartesian_equalizer, cartesian_limit, mediate, poly_equalizer
from polycalc.sets import FinFn, FinSet, functions, identity

y = P.identity_y()
Y2 = P.from_arities([2])
TWO_Y = P.from_arities([1, 1])


def arities(p):
    return sorted(p.arities())


def naive_hom_count(p, q) -> int:
    """Count maps p → q by listing position maps and backward tables."""
    total = 0
    for pos in itertools.product(q.positions.elements, repeat=len(p.positions)):
        n = 1
        for I, J in zip(p.positions, pos):
            n *= len(list(functions(q.dirs[J], p.dirs[I])))
        total += n
    return total


# ---- identity y ------------------------------------------------------------------------


@given(polys())
def test_y_is_a_unit_for_composition_up_to_iso(p):
    assert P.is_iso(P.tri_left_unitor(p)) and P.is_iso(P.tri_right_unitor(p))
    assert arities(P.compose_tri(y, p)) == arities(p) == arities(P.compose_tri(p, y))


def test_y_evaluates_to_the_identity_functor():
    for n in range(4):
        assert len(P.eval_functor(y, FinSet.range(n))) == n


def test_zero_has_exactly_one_map_to_y():
    assert len(P.hom_enumerate(P.zero(), y)) == 1


# ---- morphisms ---------------------------------------------------------------------------


@given(small_polys, small_polys, seeds)
def test_identity_maps_are_units(p, q, seed):
    phi = mor_between(p, q, seed)
    if phi is None:
        return
    assert P.mor_compose(P.mor_id(p), phi) == phi == P.mor_compose(phi, P.mor_id(q))


def test_cartesian_maps_are_closed_under_composition():
    pool = corpus.poly_pool() + [P.from_arities([2, 2]), P.from_arities([2, 1])]
    for p, q, r in itertools.product(pool, repeat=3):
        if P.hom_count(p, q) * P.hom_count(q, r) > 400:
            continue
        cq = [m for m in P.hom_enumerate(p, q) if P.is_cartesian(m)]
        cr = [m for m in P.hom_enumerate(q, r) if P.is_cartesian(m)]
        for a, b in itertools.product(cq, cr):
            assert P.is_cartesian(P.mor_compose(a, b))


def test_composition_is_associative_on_full_hom_sets():
    p, q, r, s = P.from_arities([1, 0]), Y2, TWO_Y, P.from_arities([1])
    for a, b, c in itertools.product(P.hom_enumerate(p, q), P.hom_enumerate(q, r), P.hom_enumerate(r, s)):
        assert P.mor_compose(P.mor_compose(a, b), c) == P.mor_compose(a, P.mor_compose(b, c))


def test_mismatched_composition_is_rejected():
    with pytest.raises(TypeMismatch):
        P.mor_compose(P.mor_id(Y2), P.mor_id(TWO_Y))


def test_ill_typed_maps_are_rejected():
    with pytest.raises(TypeMismatch):
        P.PolyMor(Y2, TWO_Y, {0: 0}, {0: {0: 5}})
    with pytest.raises(TypeMismatch):
        P.PolyMor(Y2, TWO_Y, {0: 7}, {0: {0: 0}})


# ---- classification and factorization -----------------------------------------------------


def test_classify_identity():
    assert P.classify(P.mor_id(Y2)) == P.MorClass(cartesian=True, vertical=True)


def test_maps_y2_to_y_are_vertical_not_cartesian():
    y0 = P.from_arities([1])  # y with its position labelled like that of y²
    ms = P.hom_enumerate(Y2, y0)
    assert len(ms) == 2
    for m in ms:
        assert P.classify(m) == P.MorClass(cartesian=False, vertical=True)


def test_interchange_is_cartesian():
    from polycalc.structures import interchange

    m = interchange(Y2, TWO_Y, P.from_arities([1, 0]), Y2)
    assert P.classify(m).cartesian


def test_vertical_non_cartesian_endomap():
    m = P.PolyMor(Y2, Y2, {0: 0}, {0: {0: 0, 1: 0}})
    assert P.classify(m) == P.MorClass(cartesian=False, vertical=True)


@given(small_polys, small_polys, seeds)
def test_cartesian_and_vertical_iff_identity_on_positions_and_bijective(p, q, seed):
    m = mor_between(p, q, seed)
    if m is None:
        return
    c = P.classify(m)
    bijective = all(
        len(m.on_dir[I]) == len(p.dirs[I]) and set(m.on_dir[I].values()) == set(p.dirs[I]) for I in p.positions
    )
    identity_on_positions = p.positions == q.positions and all(m.on_pos[I] == I for I in p.positions)
    assert c.cartesian == bijective
    assert (c.cartesian and c.vertical) == (bijective and identity_on_positions)


def test_factorize_cartesian_and_vertical_maps():
    swap = P.PolyMor(TWO_Y, TWO_Y, {0: 1, 1: 0}, {0: {0: 0}, 1: {0: 0}})
    assert P.vert_cart_factorize(swap) == (P.mor_id(TWO_Y), swap)
    fold = P.PolyMor(Y2, Y2, {0: 0}, {0: {0: 0, 1: 0}})
    assert P.vert_cart_factorize(fold) == (fold, P.mor_id(Y2))


def test_factorize_y2_to_2y():
    for phi in P.hom_enumerate(Y2, TWO_Y):
        v, c = P.vert_cart_factorize(phi)
        assert arities(v.cod) == [1]
        assert P.is_vertical(v)
        assert P.is_cartesian(c)
        assert P.mor_compose(v, c) == phi


@given(small_polys, small_polys, seeds)
def test_factorization_composes_back(p, q, seed):
    phi = mor_between(p, q, seed)
    if phi is None:
        return
    v, c = P.vert_cart_factorize(phi)
    assert P.is_cartesian(c) and P.is_vertical(v)
    assert P.mor_compose(v, c) == phi


# ---- ◁ and ⊗ -------------------------------------------------------------------------------


def test_y2_composed_with_2y_is_4y2():
    r = P.compose_tri(Y2, TWO_Y)
    assert arities(r) == [2, 2, 2, 2]
    for n in range(4):
        assert len(P.eval_functor(r, FinSet.range(n))) == (2 * n) ** 2


def test_composing_into_zero_keeps_constant_positions():
    r = P.compose_tri(P.from_arities([2, 0]), P.zero())
    assert arities(r) == [0]
    assert len(P.eval_functor(P.from_arities([2, 0]), FinSet())) == 1


def test_compose_budget():
    with pytest.raises(BudgetExceeded):
        P.compose_tri(P.from_arities([3, 3]), P.from_arities([3, 3, 3]), budget=50)


def test_tensor_examples():
    assert arities(P.tensor(Y2, y)) == [2]
    assert arities(P.tensor(Y2, P.from_arities([1, 0]))) == [0, 2]
    assert arities(P.tensor(TWO_Y, P.from_arities([1, 1, 1]))) == [1] * 6


@given(polys(), polys())
def test_tensor_size_formula(p, q):
    t = P.tensor(p, q)
    assert Counter(t.arities()) == Counter(a * b for a in p.arities() for b in q.arities())


@given(polys(2, 2), polys(2, 2))
def test_functor_composition_oracle(p, q):
    pq = P.compose_tri(p, q)
    for n in range(4):
        X = FinSet.range(n)
        inner = sum(n ** k for k in q.arities())
        assert len(P.eval_functor(pq, X)) == sum(inner**k for k in p.arities())
        assert P.functor_comparison(p, q, X).is_bijective()


@given(polys(2, 2), polys(2, 2), polys(2, 2))
def test_associator_is_an_iso(p, q, r):
    a = P.tri_associator(p, q, r)
    assert P.is_iso(a)
    assert a.dom == P.compose_tri(P.compose_tri(p, q), r)
    assert a.cod == P.compose_tri(p, P.compose_tri(q, r))


@given(polys(2, 2), polys(2, 2), polys(2, 2))
def test_tensor_is_symmetric_monoidal(p, q, r):
    assert P.mor_compose(P.braiding(p, q), P.braiding(q, p)) == P.mor_id(P.tensor(p, q))
    T, tm, ta, br = P.tensor, P.tensor_mor, P.tensor_associator, P.braiding
    lhs = P.compose_all(ta(p, q, r), br(p, T(q, r)), ta(q, r, p))
    rhs = P.compose_all(tm(br(p, q), P.mor_id(r)), ta(q, p, r), tm(P.mor_id(q), br(p, r)))
    assert lhs == rhs


# ---- the polynomial functor -----------------------------------------------------------------


def test_eval_examples():
    assert len(P.eval_functor(P.from_arities([2, 0]), FinSet.range(3))) == 10
    assert len(P.eval_functor(TWO_Y, FinSet())) == 0


def test_naturality_for_all_maps_y2_to_2y():
    h = FinFn(FinSet.range(2), FinSet.range(3), {0: 2, 1: 0})
    phis = P.hom_enumerate(Y2, TWO_Y)
    assert len(phis) == 4
    for phi in phis:
        top = P.eval_nat(phi, h.dom).then(P.eval_functor_mor(TWO_Y, h))
        bottom = P.eval_functor_mor(Y2, h).then(P.eval_nat(phi, h.cod))
        assert top == bottom


@given(small_polys, small_polys, small_polys, seeds, st.integers(0, 3))
def test_eval_nat_is_functorial(p, q, r, seed, n):
    X = FinSet.range(n)
    assert P.eval_nat(P.mor_id(p), X) == identity(P.eval_functor(p, X))
    phi, psi = mor_between(p, q, seed), mor_between(q, r, seed + 1)
    if phi is None or psi is None:
        return
    assert P.eval_nat(P.mor_compose(phi, psi), X) == P.eval_nat(phi, X).then(P.eval_nat(psi, X))


def test_strength_examples():
    A, B = FinSet.range(2), FinSet.range(1)
    tau = P.strength(Y2, A, B)
    assert tau.is_injective()
    assert len(set(tau.map.values())) == 2 and len(tau.cod) == 4


@given(small_polys, st.integers(0, 2))
def test_strength_unit(p, nb):
    B = FinSet.range(nb)
    tau = P.strength(p, FinSet(["*"]), B)
    assert tau.is_bijective()
    for (_, (I, g)), (J, h) in tau.map.items():
        assert I == J and tuple((d, b) for d, (_, b) in h) == g


@given(small_polys, st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_strength_composition(p, na, na2, nb):
    A, A2, B = FinSet.range(na), FinSet(["u", "v"][:na2]), FinSet.range(nb)
    from polycalc.sets import product

    left = P.strength(p, product(A, A2), B)
    inner = P.strength(p, A2, B)
    outer = P.strength(p, A, product(A2, B))
    for ((a, a2), (I, g)), (J, h) in left.map.items():
        J2, h2 = outer((a, inner((a2, (I, g)))))
        assert J == J2
        assert tuple((d, ((x, x2), b)) for d, (x, (x2, b)) in h2) == h


def test_scalar_examples():
    q = P.from_arities([2, 0])
    assert arities(P.scalar(FinSet(["*"]), q)) == arities(q)
    assert arities(P.scalar(FinSet.range(2), q)) == [0, 0, 2, 2]
    assert arities(P.scalar(FinSet.range(3), y)) == [1, 1, 1]


@given(st.integers(0, 3), polys())
def test_scalar_is_linear_composed(n, q):
    A = FinSet.range(n)
    assert arities(P.scalar(A, q)) == arities(P.compose_tri(P.linear(A), q))


def test_p_star_examples():
    assert arities(P.p_star(y)[0]) == [1]
    assert arities(P.p_star(P.from_arities([2, 1]))[0]) == [1, 2, 2]
    assert arities(P.p_star(P.constant(range(2)))[0]) == []


@given(polys())
def test_p_star_projection_is_cartesian(p):
    ps, proj = P.p_star(p)
    assert P.is_cartesian(proj)
    assert len(ps.positions) == sum(p.arities())


# ---- isomorphisms and hom-sets --------------------------------------------------------------


def test_iso_check_examples():
    p = P.from_arities([2, 0, 1])
    assert P.iso_check(p, p) == P.mor_id(p)
    m = P.iso_check(P.from_arities([2, 2, 2, 2]), P.compose_tri(Y2, TWO_Y))
    assert m is not None and P.is_iso(m)
    assert P.iso_check(P.from_arities([2, 0]), P.from_arities([1, 1])) is None


@given(polys(), polys())
def test_iso_check_matches_arity_multisets(p, q):
    m = P.iso_check(p, q)
    assert (m is not None) == (arities(p) == arities(q))
    if m is not None:
        assert P.is_iso(m) and P.is_iso(P.mor_inverse(m))


def test_hom_count_examples():
    assert len(P.hom_enumerate(Y2, TWO_Y)) == 4
    assert len(P.hom_enumerate(Y2, y)) == 2
    assert len(P.hom_enumerate(P.zero(), P.from_arities([3, 1]))) == 1


@given(polys(2, 2), polys(2, 2))
def test_hom_enumeration_is_complete_and_duplicate_free(p, q):
    ms = P.hom_enumerate(p, q)
    assert len(ms) == len(set(ms)) == P.hom_count(p, q) == naive_hom_count(p, q)
    assert ms == P.sort_mors(ms)


# ---- cartesian limits ------------------------------------------------------------------------


def test_equalizer_of_equal_pair_is_the_domain():
    phi = P.PolyMor(TWO_Y, TWO_Y, {0: 1, 1: 0}, {0: {0: 0}, 1: {0: 0}})
    L, cone = cartesian_limit({0: TWO_Y, 1: TWO_Y}, [(0, 1, phi), (0, 1, phi)])
    assert arities(L) == [1, 1]


def test_equalizer_of_identity_and_swap_is_zero():
    swap = P.PolyMor(TWO_Y, TWO_Y, {0: 1, 1: 0}, {0: {0: 0}, 1: {0: 0}})
    L, _ = cartesian_limit({0: TWO_Y, 1: TWO_Y}, [(0, 1, P.mor_id(TWO_Y)), (0, 1, swap)])
    assert len(L.positions) == 0


def test_pullback_of_cartesian_maps_into_2y2():
    target = P.from_arities([2, 2])
    a = P.PolyMor(P.from_arities([2, 2, 2]), target, {0: 0, 1: 1, 2: 1}, {i: {0: 1, 1: 0} for i in range(3)})
    b = P.PolyMor(P.from_arities([2, 2]), target, {0: 1, 1: 1}, {i: {0: 0, 1: 1} for i in range(2)})
    nodes = {"a": a.dom, "b": b.dom, "t": target}
    L, cone = cartesian_limit(nodes, [("a", "t", a), ("b", "t", b)])
    assert arities(L) == [2] * 4
    assert all(P.is_cartesian(m) for m in cone.values())
    # every probe cone from small polynomials factors uniquely
    for probe_poly in (y, Y2, P.from_arities([2, 2])):
        for ma in P.hom_enumerate(probe_poly, a.dom):
            for mb in P.hom_enumerate(probe_poly, b.dom):
                probe = {"a": ma, "b": mb, "t": P.mor_compose(ma, a)}
                if P.mor_compose(mb, b) != probe["t"]:
                    continue
                m = mediate(L, cone, probe)
                assert all(P.mor_compose(m, cone[n]) == probe[n] for n in nodes)


def test_non_cartesian_edge_is_rejected():
    with pytest.raises(TypeMismatch):
        cartesian_limit({0: Y2, 1: y}, [(0, 1, P.hom_enumerate(Y2, y)[0])])


def test_inconsistent_cycle_is_rejected():
    flip = P.PolyMor(Y2, Y2, {0: 0}, {0: {0: 1, 1: 0}})
    with pytest.raises(InvalidStructure):
        cartesian_limit({0: Y2, 1: Y2}, [(0, 1, P.mor_id(Y2)), (0, 1, flip)])


@given(polys(2, 2), polys(2, 2), seeds)
def test_composing_on_the_left_preserves_cartesian_equalizers(q, p, seed):
    rng = random.Random(seed)
    cart = [m for m in P.hom_enumerate(p, p) if P.is_cartesian(m)]
    phi, psi = rng.choice(cart), rng.choice(cart)
    try:
        E, inc = cartesian_equalizer(phi, psi)
    except InvalidStructure:
        return
    qE = P.compose_tri(q, E)
    a, b = P.compose_tri_mor(P.mor_id(q), phi), P.compose_tri_mor(P.mor_id(q), psi)
    fixed = [x for x in a.dom.positions if a.on_pos[x] == b.on_pos[x] and a.on_dir[x] == b.on_dir[x]]
    assert len(qE.positions) == len(fixed)
    assert Counter(qE.arities()) == Counter(len(a.dom.dirs[x]) for x in fixed)


def test_general_equalizer_quotients_fibers():
    swapd = P.PolyMor(Y2, Y2, {0: 0}, {0: {0: 1, 1: 0}})
    E, inc = poly_equalizer(P.mor_id(Y2), swapd)
    assert arities(E) == [1]
