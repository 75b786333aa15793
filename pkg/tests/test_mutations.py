"""Single-point faults injected into lawful structures must be caught by the checks."""

import pytest

from polycalc import bicomodule as bm
from polycalc import coalgebra as co
from polycalc import comonoid as cm
from polycalc import poly as P
from polycalc.errors import PolycalcError, TypeMismatch
from polycalc.fincat import FinCat, fincat_validate, parallel_pair, walking_arrow
from polycalc.harness import HarnessConfig, fixed_comonoids, laws_run, walking_arrow_mutant
from polycalc.presheaf import make_presheaf, presheaf_validate
from polycalc.sets import FinFn, FinSet

ARROW = walking_arrow()
C_ARROW = cm.cat_to_comonoid(ARROW)
NAMED = ["arrow", "graph", "z2"]


def holds(check, *args) -> bool:
    """True iff the check accepts; a raised domain error counts as rejection."""
    try:
        return check(*args).ok
    except PolycalcError:
        return False


def copy_dirs(on_dir):
    return {I: dict(b) for I, b in on_dir.items()}


def is_monoid(table: dict, unit) -> bool:
    """Brute-force oracle for a one-object category given by its multiplication table."""
    elems = {x for pair in table for x in pair}
    if any(table[(unit, x)] != x or table[(x, unit)] != x for x in elems):
        return False
    return all(table[(table[(a, b)], c)] == table[(a, table[(b, c)])] for a in elems for b in elems for c in elems)


def lawful_alternative(C, table) -> bool:
    """Single-point rewirings that still give a category are only possible here on one object."""
    return len(C.objects) == 1 and is_monoid(table, C.id(C.objects.elements[0]))


# ---- categories -----------------------------------------------------------------------------


@pytest.mark.parametrize("C", [walking_arrow(), parallel_pair(), cm.comonoid_to_cat(fixed_comonoids()["z2"])])
def test_every_rewired_composite_is_caught(C):
    assert fincat_validate(C).ok
    for key, h in C.compose.items():
        for h2 in C.morphisms:
            if h2 != h:
                comp = dict(C.compose)
                comp[key] = h2
                bad = FinCat(C.objects, C.morphisms, C.src, C.tgt, C.identity, comp)
                assert fincat_validate(bad).ok == lawful_alternative(C, comp), (key, h2)


def test_wrong_identity_is_caught():
    f = next(m for m in ARROW.morphisms if m not in (ARROW.id("a"), ARROW.id("b")))
    ident = FinFn(ARROW.objects, ARROW.morphisms, {"a": f, "b": ARROW.id("b")})
    bad = FinCat(ARROW.objects, ARROW.morphisms, ARROW.src, ARROW.tgt, ident, ARROW.compose)
    assert not fincat_validate(bad).ok


# ---- comonoids ------------------------------------------------------------------------------


@pytest.mark.parametrize("name", NAMED)
def test_every_redirected_composite_is_caught(name):
    c = fixed_comonoids()[name]
    for I, back in c.comult.on_dir.items():
        for k, v in back.items():
            for w in c.carrier.dirs[I]:
                if w == v:
                    continue
                on_dir = copy_dirs(c.comult.on_dir)
                on_dir[I][k] = w
                delta = P.PolyMor(c.carrier, c.comult.cod, c.comult.on_pos, on_dir)
                expected = lawful_alternative(cm.comonoid_to_cat(c), on_dir[I])
                assert holds(cm.comonoid_check, cm.Comonoid(c.carrier, c.counit, delta)) == expected, (I, k, w)


@pytest.mark.parametrize("name", NAMED)
def test_every_retargeted_direction_is_caught(name):
    c = fixed_comonoids()[name]
    for I, (J, table) in c.comult.on_pos.items():
        for i, (d, K) in enumerate(table):
            for K2 in c.carrier.positions:
                if K2 == K:
                    continue
                t = list(table)
                t[i] = (d, K2)
                on_pos = dict(c.comult.on_pos)
                on_pos[I] = (J, tuple(t))
                try:
                    delta = P.PolyMor(c.carrier, c.comult.cod, on_pos, c.comult.on_dir)
                except TypeMismatch:
                    continue
                assert not holds(cm.comonoid_check, cm.Comonoid(c.carrier, c.counit, delta)), (I, d, K2)


@pytest.mark.parametrize("name", NAMED)
def test_every_moved_identity_is_caught(name):
    c = fixed_comonoids()[name]
    for I, back in c.counit.on_dir.items():
        ((k, v),) = back.items()
        for w in c.carrier.dirs[I]:
            if w != v:
                on_dir = copy_dirs(c.counit.on_dir)
                on_dir[I][k] = w
                eps = P.PolyMor(c.carrier, c.counit.cod, c.counit.on_pos, on_dir)
                assert not holds(cm.comonoid_check, cm.Comonoid(c.carrier, eps, c.comult))


def test_harness_mutant_is_caught_by_both_checks():
    m = walking_arrow_mutant()
    assert not cm.comonoid_check(m).ok
    assert not cm.comonoid_check(m, materialize=True).ok
    fails = [r for r in laws_run(HarnessConfig(suites=("comonoid",), inject_mutant=True)) if r.status == "fail"]
    assert len(fails) == 1 and fails[0].witness


# ---- coalgebras -----------------------------------------------------------------------------


def arrow_coalgebra():
    S = [("a", 0), ("a", 1), ("b", 0), ("b", 1)]
    return co.make_coalgebra(C_ARROW, S, lambda s: s[0], lambda s, d: ("b", s[1]) if d == "f" else s)


def test_every_moved_identity_action_is_caught():
    X = arrow_coalgebra()
    for s in X.S:
        ida = ARROW.id(X.kappa1.map[s])
        for t in X.S:
            if t != s:
                act = lambda u, d, s=s, t=t, ida=ida: t if (u, d) == (s, ida) else X.act(u, d)
                bad = co.make_coalgebra(C_ARROW, X.S, X.kappa1.map, act)
                assert not holds(co.coalg_check, bad), (s, t)


def test_action_landing_in_the_wrong_fibre_is_caught():
    X = arrow_coalgebra()
    for t in (("a", 0), ("a", 1)):
        bad = co.make_coalgebra(C_ARROW, X.S, X.kappa1.map, lambda u, d, t=t: t if d == "f" else X.act(u, d))
        assert not holds(co.coalg_check, bad)


def test_relabelled_position_is_caught():
    X = arrow_coalgebra()
    pos = dict(X.kappa1.map)
    pos[("b", 0)] = "a"
    try:
        bad = co.make_coalgebra(C_ARROW, X.S, pos, lambda u, d: ("b", u[1]) if d == "f" else u)
    except PolycalcError:
        return
    assert not co.coalg_check(bad).ok


# ---- bicomodules ---------------------------------------------------------------------------


@pytest.mark.parametrize("side", ["left", "right"])
def test_every_redirected_coaction_entry_is_caught(side):
    b = bm.identity_bicomodule(C_ARROW)
    coaction = getattr(b, side)
    for I, back in coaction.on_dir.items():
        for k, v in back.items():
            for w in b.m.dirs[I]:
                if w == v:
                    continue
                on_dir = copy_dirs(coaction.on_dir)
                on_dir[I][k] = w
                bad = P.PolyMor(b.m, coaction.cod, coaction.on_pos, on_dir)
                left, right = (bad, b.right) if side == "left" else (b.left, bad)
                assert not holds(bm.bicomodule_check, bm.Bicomodule(b.m, b.c, b.d, left, right)), (I, k, w)


# ---- polynomial maps, functions, presheaves --------------------------------------------------


def test_malformed_polynomial_maps_are_rejected():
    p, q = P.from_arities([2]), P.from_arities([1, 1])
    (I,) = p.positions
    J1, J2 = q.positions
    (e,) = q.dirs[J1]
    d = next(iter(p.dirs[I]))
    good = P.PolyMor(p, q, {I: J1}, {I: {e: d}})
    assert good.on_pos[I] == J1
    for on_pos, on_dir in [
        ({}, {I: {e: d}}),
        ({I: "nowhere"}, {I: {e: d}}),
        ({I: J1}, {}),
        ({I: J1}, {I: {}}),
        ({I: J1}, {I: {e: "stray"}}),
        ({I: J1}, {I: {e: d, "extra": d}}),
        ({I: J1, "ghost": J2}, {I: {e: d}}),
    ]:
        with pytest.raises(TypeMismatch):
            P.PolyMor(p, q, on_pos, on_dir)


def test_partial_and_escaping_functions_are_rejected():
    A, B = FinSet([0, 1]), FinSet(["x"])
    for m in ({0: "x"}, {0: "x", 1: "y"}, {0: "x", 1: "x", 2: "x"}):
        with pytest.raises(TypeMismatch):
            FinFn(A, B, m)


def test_presheaf_with_non_identity_unit_action_is_caught():
    X = make_presheaf(ARROW, {"a": [0, 1], "b": [0]}, {"f": {0: 0}})
    assert presheaf_validate(X).ok
    action = dict(X.action)
    action[ARROW.id("a")] = FinFn(X.at["a"], X.at["a"], {0: 1, 1: 0})
    bad = type(X)(ARROW, X.at, action)
    assert not presheaf_validate(bad).ok


def test_equivalent_mutant_on_z2_is_the_idempotent_monoid():
    C = cm.comonoid_to_cat(fixed_comonoids()["z2"])
    comp = dict(C.compose)
    comp[("s", "s")] = "s"
    assert is_monoid(comp, "e")
    assert fincat_validate(FinCat(C.objects, C.morphisms, C.src, C.tgt, C.identity, comp)).ok
