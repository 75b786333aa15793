import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polycalc import corpus
from polycalc.errors import BudgetExceeded, TypeMismatch
from polycalc.fincat import (
    FinCat,
    fincat_validate,
    make_fincat,
    opposite,
    parallel_pair,
    terminal_cat,
    walking_arrow,
)
from polycalc.presheaf import (
    homs,
    make_presheaf,
    make_pshmor,
    presheaf_pi,
    presheaf_validate,
    pshmor_validate,
    pullback_presheaf,
    representable,
    slice_homs,
)
from polycalc.sets import (
    FinFn,
    FinSet,
    delta,
    distributivity_pullback,
    functions,
    identity,
    pi_finset,
    pi_transpose,
    pi_untranspose,
    pullback,
    sigma,
)


def fn(dom, cod, table) -> FinFn:
    return FinFn(FinSet(dom), FinSet(cod), dict(table))


@st.composite
def finfns(draw, max_dom=3, max_cod=3, cod=None):
    cod = FinSet.range(draw(st.integers(1, max_cod))) if cod is None else cod
    n = draw(st.integers(0, max_dom))
    images = draw(st.lists(st.sampled_from(cod.elements), min_size=n, max_size=n)) if len(cod) else []
    return FinFn(FinSet.range(n), cod, dict(enumerate(images)))


def all_maps(A: FinSet, B: FinSet):
    return [FinFn(A, B, m) for m in functions(A, B)]


# ---- pullbacks -------------------------------------------------------------------------


def test_pullback_along_identity_is_the_domain():
    f = fn([0, 1], ["*"], {0: "*", 1: "*"})
    pb, p1, _ = pullback(f, identity(f.cod))
    assert len(pb) == 2 and p1.is_bijective()


def test_pullback_of_two_and_three_over_a_point_has_six_pairs():
    f = fn([0, 1], ["*"], {0: "*", 1: "*"})
    g = fn([0, 1, 2], ["*"], {i: "*" for i in range(3)})
    pb, _, _ = pullback(f, g)
    assert list(pb.elements) == [(a, b) for a in range(2) for b in range(3)]


def test_pullback_with_empty_domain_is_empty():
    f = fn([], ["*"], {})
    g = fn([0, 1, 2], ["*"], {i: "*" for i in range(3)})
    assert len(pullback(f, g)[0]) == 0


def test_pullback_rejects_different_codomains():
    with pytest.raises(TypeMismatch):
        pullback(fn([0], [0], {0: 0}), fn([0], [0, 1], {0: 0}))


@given(st.data())
def test_pullback_universal_property(data):
    C = FinSet.range(data.draw(st.integers(1, 3)))
    f, g = data.draw(finfns(cod=C)), data.draw(finfns(cod=C))
    pb, p1, p2 = pullback(f, g)
    assert all(f(p1(x)) == g(p2(x)) for x in pb)
    for n in range(3):
        D = FinSet.range(n)
        cones = [
            (u, v)
            for u in all_maps(D, f.dom)
            for v in all_maps(D, g.dom)
            if all(f(u(x)) == g(v(x)) for x in D)
        ]
        # every cone factors through exactly one map D → pb
        for u, v in cones:
            mediators = [m for m in all_maps(D, pb) if m.then(p1) == u and m.then(p2) == v]
            assert len(mediators) == 1
        assert len(cones) == len(pb) ** n


# ---- Σ ⊣ Δ ⊣ Π -----------------------------------------------------------------------


def slice_count(src: FinFn, tgt: FinFn) -> int:
    """|Hom_{/A}(src, tgt)| by brute force."""
    return sum(1 for h in functions(src.dom, tgt.dom) if all(tgt(h[x]) == src(x) for x in src.dom))


@given(st.data())
def test_sigma_delta_adjunction_counts(data):
    A = FinSet.range(data.draw(st.integers(1, 2)))
    f = data.draw(finfns(cod=A))  # B → A
    d = data.draw(finfns(max_dom=2, cod=f.dom)) if len(f.dom) else FinFn(FinSet(), f.dom, {})
    c = data.draw(finfns(max_dom=3, cod=A))
    assert slice_count(sigma(f, d), c) == slice_count(d, delta(f, c))


def test_pi_of_two_fibers_of_sizes_two_and_three_has_six_sections():
    f = fn(["b1", "b2"], ["a"], {"b1": "a", "b2": "a"})
    g = fn(range(5), ["b1", "b2"], {0: "b1", 1: "b1", 2: "b2", 3: "b2", 4: "b2"})
    assert len(pi_finset(f, g).dom) == 6


def test_pi_along_an_isomorphism_is_the_original_map():
    f = fn([0, 1], ["x", "y"], {0: "y", 1: "x"})
    g = fn(range(3), [0, 1], {0: 0, 1: 1, 2: 1})
    pi = pi_finset(f, g)
    assert sorted(len(pi.fiber(a)) for a in f.cod) == sorted(len(g.fiber(b)) for b in f.dom)
    assert len(pi.fiber("y")) == len(g.fiber(0))


def test_pi_of_an_isomorphism_is_an_isomorphism():
    f = fn([0, 1, 2], ["x", "y"], {0: "x", 1: "x", 2: "y"})
    pi = pi_finset(f, identity(f.dom))
    assert pi.is_bijective()


def test_empty_fiber_contributes_the_empty_section():
    f = fn([], ["a"], {})
    pi = pi_finset(f, fn([], [], {}))
    assert list(pi.dom.elements) == [("a", ())]


@given(st.data())
def test_delta_pi_adjunction_is_a_bijection(data):
    A = FinSet.range(data.draw(st.integers(1, 2)))
    f = data.draw(finfns(max_dom=3, cod=A))
    if not len(f.dom):
        return
    g = data.draw(finfns(max_dom=3, cod=f.dom))
    d = data.draw(finfns(max_dom=2, cod=A))
    pi = pi_finset(f, g)
    pb, _, to_b = pullback(d, f)
    lhs = [
        FinFn(d.dom, pi.dom, m) for m in functions(d.dom, pi.dom) if all(pi(m[x]) == d(x) for x in d.dom)
    ]
    rhs = [FinFn(pb, g.dom, k) for k in functions(pb, g.dom) if all(g(k[x]) == to_b(x) for x in pb)]
    assert len(lhs) == len(rhs)
    assert {pi_transpose(f, g, d, k, pi) for k in rhs} == set(lhs)
    for m in lhs:
        assert pi_transpose(f, g, d, pi_untranspose(f, g, d, m), pi) == m


def test_distributivity_pullback_apex_size():
    # f : 2 → 1, C → B with fibers 1 and 2: two sections, each pulled back along f twice
    f = fn([0, 1], ["*"], {0: "*", 1: "*"})
    g = fn(["c0", "c1", "c2"], [0, 1], {"c0": 0, "c1": 1, "c2": 1})
    dp = distributivity_pullback(f, g)
    assert len(dp.pi.dom) == 2 and len(dp.apex) == 4
    assert dp.counit.then(g) == dp.to_b
    assert dp.h.then(dp.pi) == dp.to_b.then(f)


def test_distributivity_pullback_along_identity_returns_g():
    g = fn(range(3), [0, 1], {0: 0, 1: 1, 2: 1})
    dp = distributivity_pullback(identity(g.cod), g)
    assert sorted(len(dp.pi.fiber(b)) for b in g.cod) == [1, 2]
    assert dp.counit.is_bijective()


def test_distributivity_pullback_with_identity_factor_is_trivial():
    f = fn([0, 1, 2], ["x", "y"], {0: "x", 1: "x", 2: "y"})
    dp = distributivity_pullback(f, identity(f.dom))
    assert dp.pi.is_bijective()


def test_distributivity_pullback_is_universal_among_competitors():
    f = fn([0, 1], ["*"], {0: "*", 1: "*"})
    g = fn(["c0", "c1", "c2"], [0, 1], {"c0": 0, "c1": 1, "c2": 1})
    dp = distributivity_pullback(f, g)
    D = FinSet.range(2)
    to_a = FinFn(D, f.cod, {0: "*", 1: "*"})
    pb, _, to_b = pullback(to_a, f)
    competitors = [k for k in functions(pb, g.dom) if all(g(k[x]) == to_b(x) for x in pb)]
    mediators = [m for m in functions(D, dp.pi.dom) if all(dp.pi(m[x]) == to_a(x) for x in D)]
    assert len(competitors) == len(mediators) == 4


def test_pi_budget_is_enforced():
    f = fn(range(6), ["a"], {i: "a" for i in range(6)})
    g = fn(range(18), range(6), {i: i // 3 for i in range(18)})
    with pytest.raises(BudgetExceeded):
        pi_finset(f, g, budget=100)


# ---- categories and presheaves ---------------------------------------------------------------


def test_terminal_category_is_valid():
    assert fincat_validate(terminal_cat()).ok


def test_broken_composition_entry_is_reported():
    C = walking_arrow()
    table = dict(C.compose)
    table[("f", C.id("a"))] = C.id("a")
    broken = FinCat(C.objects, C.morphisms, C.src, C.tgt, C.identity, table)
    rep = fincat_validate(broken)
    assert not rep.ok
    assert rep.violations[0][1] is not None


def test_missing_composite_is_reported():
    C = walking_arrow()
    table = {k: v for k, v in C.compose.items() if k != ("f", C.id("a"))}
    rep = fincat_validate(FinCat(C.objects, C.morphisms, C.src, C.tgt, C.identity, table))
    assert not rep.ok


def test_associativity_violation_names_the_triple():
    # a → b → c → d with two distinct composites a → d; one bracketing is forced wrong
    objs = ["a", "b", "c", "d"]
    mors = {
        "f": ("a", "b"),
        "g": ("b", "c"),
        "h": ("c", "d"),
        "gf": ("a", "c"),
        "hg": ("b", "d"),
        "u": ("a", "d"),
        "v": ("a", "d"),
    }
    ids = {x: f"id{x}" for x in objs}
    mors.update({f"id{x}": (x, x) for x in objs})
    comp = {}
    for m, (s, t) in mors.items():
        comp[(ids[t], m)] = m
        comp[(m, ids[s])] = m
    comp.update({("g", "f"): "gf", ("h", "g"): "hg", ("h", "gf"): "u", ("hg", "f"): "v"})
    rep = fincat_validate(make_fincat(objs, mors, ids, comp))
    assert [law for law, _ in rep.violations] == ["associativity"]
    assert set(rep.violations[0][1]) == {"f", "g", "h"}


def test_opposite_is_an_involution():
    C = parallel_pair()
    assert opposite(opposite(C)) == C
    assert fincat_validate(opposite(C)).ok


def test_representables_on_the_walking_arrow():
    C = walking_arrow()
    ya, yb = representable(C, "a"), representable(C, "b")
    assert presheaf_validate(ya).ok and presheaf_validate(yb).ok
    assert [len(ya.at[x]) for x in ("a", "b")] == [1, 0]
    assert [len(yb.at[x]) for x in ("a", "b")] == [1, 1]


def test_presheaf_functoriality_violation():
    C = parallel_pair()
    X = make_presheaf(C, {"E": [0], "V": [0, 1]}, {"s": {0: 0}, "t": {0: 1}})
    assert presheaf_validate(X).ok
    bad = make_presheaf(C, {"E": [0], "V": [0, 1]}, {"s": {0: 0}, "t": {0: 1}, C.id("V"): {0: 1, 1: 0}})
    assert not presheaf_validate(bad).ok


def naive_homs(W, X):
    """All natural transformations W → X by filtering componentwise functions."""
    objs = W.base.objects.elements
    comps = [list(functions(W.at[a], X.at[a])) for a in objs]
    out = []
    for choice in itertools.product(*comps):
        table = dict(zip(objs, choice))
        if all(
            table[W.base.src.map[u]][W.restrict(w, u)] == X.restrict(table[W.base.tgt.map[u]][w], u)
            for u in W.base.morphisms
            for w in W.at[W.base.tgt.map[u]]
        ):
            out.append(table)
    return out


@pytest.mark.parametrize("base", ["arrow", "graph"])
@given(seed=st.integers(0, 2**32 - 1))
def test_hom_enumeration_matches_naive_filter(base, seed):
    rng = random.Random(seed)
    C = corpus.PSH_BASES[base]()
    W, X = corpus.random_presheaf(rng, C), corpus.random_presheaf(rng, C)
    assert len(homs(W, X)) == len(naive_homs(W, X))


def test_presheaf_pi_on_the_terminal_base_agrees_with_sets():
    T = terminal_cat()

    def P(xs):
        return make_presheaf(T, {"*": xs}, {})

    X, Y, Z = P(["a"]), P(["b1", "b2"]), P(range(5))
    f = make_pshmor(Y, X, lambda _, y: "a")
    g = make_pshmor(Z, Y, lambda _, z: "b1" if z < 2 else "b2")
    pi = presheaf_pi(f, g)
    sf = fn(["b1", "b2"], ["a"], {"b1": "a", "b2": "a"})
    sg = fn(range(5), ["b1", "b2"], {z: ("b1" if z < 2 else "b2") for z in range(5)})
    assert len(pi.dom.at["*"]) == len(pi_finset(sf, sg).dom) == 6


def test_presheaf_pi_along_an_isomorphism():
    C = walking_arrow()
    rng = random.Random(7)
    X = corpus.random_presheaf(rng, C, 2)
    Y = make_presheaf(
        C,
        {a: [("copy", x) for x in X.at[a]] for a in C.objects},
        {u: (lambda y, u=u: ("copy", X.restrict(y[1], u))) for u in C.morphisms},
    )
    f = make_pshmor(Y, X, lambda a, y: y[1])
    g = corpus.random_over(rng, Y)
    pi = presheaf_pi(f, g)
    assert all(len(pi.dom.at[a]) == len(g.dom.at[a]) for a in C.objects)
    assert pshmor_validate(pi).ok


def test_presheaf_pi_adjunction_counts_on_graphs():
    rng = random.Random(3)
    C = parallel_pair()
    checked = 0
    while checked < 3:
        X = corpus.random_presheaf(rng, C, 2)
        f = corpus.random_over(rng, X)
        g = corpus.random_over(rng, f.dom)
        W = corpus.random_presheaf(rng, C, 2)
        pi = presheaf_pi(f, g)
        lhs = len(naive_homs(W, pi.dom))
        rhs = 0
        for sig in homs(W, X):
            _, _, p2 = pullback_presheaf(sig, f)
            rhs += len(slice_homs(p2, g))
        assert lhs == rhs
        checked += 1
