import itertools
import random

import pytest
from conftest import seeds
from hypothesis import given, settings

from polycalc import bicomodule as bm
from polycalc import coalgebra as co
from polycalc import comonoid as cm
from polycalc import corpus
from polycalc import poly as P
from polycalc.errors import TypeMismatch
from polycalc.fincat import parallel_pair, walking_arrow
from polycalc.harness import small_arrow_coalgebras, unit_isos
from polycalc.sets import FinFn, FinSet

ARROW = walking_arrow()
C_ARROW = cm.cat_to_comonoid(ARROW)


def arities(p):
    return sorted(p.arities())


def laws(rep):
    return {law for law, _ in rep.violations}


def family_eval(t: bm.TypedPoly, sizes: dict) -> dict:
    """Oracle: |Σ_! Π_p Δ (X)| over each c, for a family X given by fiber sizes over D."""
    out = {c: 0 for c in t.C}
    for I in t.m.positions:
        n = 1
        for e in t.m.dirs[I]:
            n *= sizes[t.src.map[(I, e)]]
        out[t.tgt.map[I]] += n
    return out


def typed_pair(seed, C=2, D=2, E=2):
    rng = random.Random(seed)
    p = corpus.random_typed(rng, range(C), range(D), 3, 2)
    q = corpus.random_typed(rng, range(D), range(E), 3, 2)
    return p, q, rng


# ---- comodules and bicomodules ----------------------------------------------------------------


@pytest.mark.parametrize("C", [walking_arrow(), parallel_pair()], ids=["arrow", "graph"])
def test_identity_bicomodule_passes(C):
    b = bm.identity_bicomodule(cm.cat_to_comonoid(C))
    assert bm.bicomodule_check(b).ok


def test_identity_bicomodule_is_a_unit_on_the_walking_arrow():
    assert unit_isos(bm.identity_bicomodule(C_ARROW), None).ok


def test_mutated_right_coaction_reports_counit():
    b = bm.identity_bicomodule(C_ARROW)
    ida, f = ARROW.id("a"), next(m for m in ARROW.morphisms if m not in (ARROW.id("a"), ARROW.id("b")))
    on_dir = {x: dict(v) for x, v in b.right.on_dir.items()}
    on_dir["a"][(ida, ida)] = f
    bad = P.PolyMor(b.m, b.right.cod, b.right.on_pos, on_dir)
    rep = bm.right_comodule_check(b.m, b.d, bad)
    assert "counit" in laws(rep)
    assert not bm.bicomodule_check(bm.Bicomodule(b.m, b.c, b.d, b.left, bad)).ok


def test_mistyped_coaction_is_reported():
    b = bm.identity_bicomodule(C_ARROW)
    assert laws(bm.left_comodule_check(b.m, b.c, P.mor_id(b.m))) == {"coaction typing"}


@given(seeds)
@settings(max_examples=20)
def test_coactions_induce_coalgebras(seed):
    C = corpus.random_fincat(random.Random(seed), 2, 4)
    c = cm.cat_to_comonoid(C)
    a = C.objects.elements[0]
    for b in (bm.identity_bicomodule(c), bm.representable_bicomodule(c, a)):
        assert bm.bicomodule_check(b).ok
        assert co.coalg_check(bm.left_coalgebra(b.m, b.c, b.left)).ok
        assert co.coalg_check(bm.right_coalgebra(b.m, b.d, b.right)).ok


# ---- typed polynomials ---------------------------------------------------------------------------


def test_typed_over_one_point_has_trivial_coactions():
    t = bm.make_typed(P.from_arities([2, 0]), [0], [0], lambda x, e: 0, lambda x: 0)
    b = bm.bicomod_from_typed(t)
    assert bm.bicomodule_check(b).ok
    assert P.is_cartesian(b.left) and P.is_cartesian(b.right)


def test_typed_y2_plus_y_over_two_points():
    m = P.from_arities([2, 1])
    I1, I2 = m.positions
    src = {(I1, 0): 0, (I1, 1): 1, (I2, 0): 1}
    t = bm.make_typed(m, [0, 1], [0, 1], src, {I1: 0, I2: 1})
    b = bm.bicomod_from_typed(t)
    assert bm.bicomodule_check(b).ok
    assert P.is_cartesian(b.left) and P.is_cartesian(b.right)
    assert bm.typed_from_bicomod(b) == t


@given(seeds)
def test_typed_round_trip_and_hom_counts(seed):
    p, q, _ = typed_pair(seed, 2, 2, 2)
    b = bm.bicomod_from_typed(p)
    assert bm.typed_from_bicomod(b) == p
    assert len(bm.bicomod_homs(b, b)) == len(bm.typed_homs(p, p))


def test_typed_from_bicomod_needs_discrete_comonoids():
    with pytest.raises(TypeMismatch):
        bm.typed_from_bicomod(bm.identity_bicomodule(C_ARROW))


def test_untyped_composition_is_compose_tri():
    p = bm.make_typed(P.from_arities([2, 1]), [0], [0], lambda x, e: 0, lambda x: 0)
    q = bm.make_typed(P.from_arities([1, 0]), [0], [0], lambda x, e: 0, lambda x: 0)
    assert bm.typed_compose(p, q).m == P.compose_tri(p.m, q.m)


@given(seeds)
def test_typed_identity_is_a_unit(seed):
    p, _, _ = typed_pair(seed)
    left = bm.typed_compose(corpus.typed_identity(p.C), p)
    right = bm.typed_compose(p, corpus.typed_identity(p.D))
    assert P.iso_check(left.m, p.m) is not None
    assert P.iso_check(right.m, p.m) is not None


@given(seeds)
def test_typed_composition_matches_the_slice_functor_oracle(seed):
    p, q, rng = typed_pair(seed)
    pq = bm.typed_compose(p, q)
    for sizes in itertools.product(range(3), repeat=2):
        X = dict(zip(q.D, sizes))
        assert family_eval(pq, X) == family_eval(p, family_eval(q, X))


def test_typed_compose_rejects_a_middle_mismatch():
    p, q, _ = typed_pair(0, 2, 2, 2)
    r = bm.make_typed(q.m, range(3), q.D, lambda x, e: q.src.map[(x, e)], lambda x: 0)
    with pytest.raises(TypeMismatch):
        bm.typed_compose(p, r)


# ---- composition ---------------------------------------------------------------------------------


@given(seeds)
@settings(max_examples=30)
def test_bicomodule_composition_agrees_with_typed(seed):
    p, q, _ = typed_pair(seed)
    N, inc = bm.bicomod_compose(bm.bicomod_from_typed(p), bm.bicomod_from_typed(q))
    assert bm.bicomodule_check(N).ok
    assert bm.typed_from_bicomod(N) == bm.typed_compose(p, q)
    G, _ = bm.bicomod_compose_general(bm.bicomod_from_typed(p), bm.bicomod_from_typed(q))
    assert G == N


@given(seeds)
@settings(max_examples=20)
def test_typed_composition_is_associative_up_to_iso(seed):
    rng = random.Random(seed)
    p = corpus.random_typed(rng, range(2), range(2), 2, 2)
    q = corpus.random_typed(rng, range(2), range(1), 2, 2)
    r = corpus.random_typed(rng, range(1), range(2), 2, 2)
    one = bm.typed_compose(bm.typed_compose(p, q), r)
    two = bm.typed_compose(p, bm.typed_compose(q, r))
    assert P.iso_check(one.m, two.m) is not None
    bp, bq, br = map(bm.bicomod_from_typed, (p, q, r))
    N1, _ = bm.bicomod_compose(bm.bicomod_compose(bp, bq)[0], br)
    N2, _ = bm.bicomod_compose(bp, bm.bicomod_compose(bq, br)[0])
    assert P.iso_check(N1.m, N2.m) is not None


def test_cartesian_composition_refuses_non_cartesian_coactions():
    b = bm.identity_bicomodule(C_ARROW)
    assert not P.is_cartesian(b.right)
    with pytest.raises(TypeMismatch):
        bm.bicomod_compose(b, b)


def test_general_composition_with_the_identity_is_the_unit():
    b = bm.representable_bicomodule(C_ARROW, "a")
    N, _ = bm.bicomod_compose_general(b, bm.identity_bicomodule(C_ARROW))
    assert arities(N.m) == arities(b.m)
    assert bm.bicomodule_check(N).ok


def test_composition_needs_a_shared_middle_comonoid():
    b = bm.identity_bicomodule(C_ARROW)
    other = bm.identity_bicomodule(cm.cat_to_comonoid(parallel_pair()))
    with pytest.raises(TypeMismatch):
        bm.bicomod_compose_general(b, other)


# ---- migration ------------------------------------------------------------------------------------


@pytest.mark.parametrize("X", small_arrow_coalgebras(C_ARROW, 3)[::2], ids=lambda X: str(len(X.S)))
def test_migration_along_the_identity_is_an_iso(X):
    M = bm.migrate(bm.identity_bicomodule(C_ARROW), X)
    assert co.coalg_check(M).ok
    assert {x: len(M.kappa1.fiber(x)) for x in "ab"} == {x: len(X.kappa1.fiber(x)) for x in "ab"}
    # (x, g) ↦ g(id_x) is a coalgebra iso
    h = FinFn(M.S, X.S, {(x, g): dict(g)[ARROW.id(x)] for x, g in M.S})
    assert h.is_bijective() and co.is_coalg_hom(h, M, X)


@pytest.mark.parametrize("a", ["a", "b"])
@pytest.mark.parametrize("X", small_arrow_coalgebras(C_ARROW, 3)[1::3], ids=lambda X: str(len(X.S)))
def test_migration_along_a_representable_is_evaluation(a, X):
    M = bm.migrate(bm.representable_bicomodule(C_ARROW, a), X)
    assert len(M.S) == len(X.kappa1.fiber(a))
    assert {J: len(M.kappa1.fiber(J)) for J in M.comonoid.carrier.positions} == bm.migrate_count_by_formula(
        bm.representable_bicomodule(C_ARROW, a), X
    )


@given(seeds)
@settings(max_examples=20)
def test_migration_along_typed_bicomodules_matches_the_formula(seed):
    rng = random.Random(seed)
    t = corpus.random_typed(rng, range(2), range(2), 3, 2)
    b = bm.bicomod_from_typed(t)
    S = FinSet(range(rng.randint(0, 3)))
    X = co.make_coalgebra(b.d, S, {s: rng.randrange(2) for s in S}, lambda s, d: s)
    M = bm.migrate(b, X)
    counts = {J: len(M.kappa1.fiber(J)) for J in b.c.carrier.positions}
    assert counts == bm.migrate_count_by_formula(b, X)
    sizes = {d: len(X.kappa1.fiber(d)) for d in t.D}
    assert counts == family_eval(t, sizes)


def test_migrate_hom_is_functorial():
    b = bm.representable_bicomodule(C_ARROW, "a")
    xs = small_arrow_coalgebras(C_ARROW, 2)
    for X, Y, Z in itertools.product(xs, repeat=3):
        for h, k in itertools.product(co.coalg_homs(X, Y), co.coalg_homs(Y, Z)):
            mh, mk = bm.migrate_hom(b, h, X, Y), bm.migrate_hom(b, k, Y, Z)
            assert co.is_coalg_hom(mh, bm.migrate(b, X), bm.migrate(b, Y))
            assert mh.then(mk) == bm.migrate_hom(b, h.then(k), X, Z)


def test_migrate_rejects_a_coalgebra_over_the_wrong_comonoid():
    X = co.make_coalgebra(cm.discrete_comonoid([0]), [0], lambda s: 0, lambda s, d: s)
    with pytest.raises(TypeMismatch):
        bm.migrate(bm.identity_bicomodule(C_ARROW), X)
