import io as stdio
import json

import pytest

from polycalc import harness as H
from polycalc.errors import BudgetExceeded, InvalidStructure, PolycalcError
from polycalc.fincat import Report


def reports(cfg):
    return list(H.laws_run(cfg))


# ---- configuration -----------------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [
        {"max_pos": -1},
        {"max_dir": -1},
        {"budget": 0},
        {"suites": ("monoidal", "nonsense")},
        {"seed": -1},
        {"seed": 2**64},
    ],
)
def test_bad_configuration_is_rejected(kwargs):
    with pytest.raises(PolycalcError):
        H.HarnessConfig(**kwargs)


def test_default_configuration():
    cfg = H.HarnessConfig()
    assert cfg.budget == H.HARNESS_BUDGET == 20_000
    assert cfg.suites == H.SUITES
    assert cfg.as_json()["seed"] == 0


# ---- running cases -------------------------------------------------------------------------


def case(name, fn):
    return H.Case(name, [name], fn)


def over_budget():
    raise BudgetExceeded(2, 1, "test")


def test_run_case_statuses():
    ok = H.run_case("s", case("ok", lambda: Report("r")))
    assert ok.status == "pass" and "witness" not in ok.as_json()

    def failing():
        r = Report("r")
        r.add("law", {"at": 1})
        return r

    bad = H.run_case("s", case("bad", failing))
    assert bad.status == "fail" and bad.as_json()["witness"] == [["law", {"at": 1}]]

    assert H.run_case("s", case("big", over_budget)).status == "skipped-budget"

    def broken():
        raise InvalidStructure("nope")

    err = H.run_case("s", case("err", broken))
    assert err.status == "fail" and err.witness["error"] == "InvalidStructure"


def test_sampled_suites_keep_drawing_until_enough_cases_verify():
    def gen():
        for i in range(100):
            yield case(f"c/{i}", over_budget if i % 2 else (lambda: Report("r")))

    out = list(H.run_suite(H.Suite("s", gen(), required=5, max_attempts=50)))
    assert sum(r.status == "pass" for r in out) == 5
    assert sum(r.status == "skipped-budget" for r in out) == 4


def test_sampled_suites_stop_at_the_attempt_cap():
    def gen():
        while True:
            yield case("c", over_budget)

    out = list(H.run_suite(H.Suite("s", gen(), required=5, max_attempts=7)))
    assert len(out) == 7 and all(r.status == "skipped-budget" for r in out)


def test_digest_depends_only_on_inputs():
    a = H.run_case("s", H.Case("x", [1, "a"], lambda: Report("r")))
    b = H.run_case("t", H.Case("y", [1, "a"], lambda: Report("r")))
    c = H.run_case("s", H.Case("x", [2, "a"], lambda: Report("r")))
    assert a.digest == b.digest != c.digest


# ---- suites ----------------------------------------------------------------------------------


def test_suite_streams_are_independent_of_other_suites():
    alone = reports(H.HarnessConfig(suites=("typed",)))
    together = [r for r in reports(H.HarnessConfig(suites=("closure", "typed"))) if r.suite == "typed"]
    assert alone == together


def test_seeds_change_sampled_corpora():
    a = H.summary(reports(H.HarnessConfig(seed=0, suites=("typed",))), H.HarnessConfig())
    b = H.summary(reports(H.HarnessConfig(seed=1, suites=("typed",))), H.HarnessConfig())
    assert a["corpus_digest"] != b["corpus_digest"]


def test_small_budget_skips_instead_of_failing():
    cfg = H.HarnessConfig(budget=10, suites=("closure", "coclosure", "comonoid"))
    rs = reports(cfg)
    statuses = {r.status for r in rs}
    assert "fail" not in statuses and "skipped-budget" in statuses


def test_injected_mutant_is_the_only_failure():
    rs = reports(H.HarnessConfig(suites=("comonoid",), inject_mutant=True))
    fails = [r for r in rs if r.status == "fail"]
    assert [r.case for r in fails] == ["mutant/walking-arrow-targets-swapped"]
    assert any(law == "coassociativity" for law, _ in fails[0].witness)


def test_report_format_and_footer():
    buf = stdio.StringIO()
    cfg = H.HarnessConfig(suites=("closure",))
    foot = H.write_report(cfg, buf)
    lines = buf.getvalue().splitlines()
    parsed = [json.loads(line) for line in lines]
    assert parsed[-1] == foot
    assert set(foot) == {"summary", "suites", "corpus_digest", "config"}
    assert foot["summary"] == {"pass": 216, "fail": 0, "skipped-budget": 0}
    assert foot["suites"] == {"closure": foot["summary"]}
    for row in parsed[:-1]:
        assert set(row) == {"suite", "case", "status", "digest"}
        assert row["status"] in H.STATUSES


def test_summary_counts():
    rs = [H.LawReport("a", "1", "pass", "d1"), H.LawReport("a", "2", "fail", "d2", []), H.LawReport("b", "3", "skipped-budget", "d3")]
    foot = H.summary(rs, H.HarnessConfig())
    assert foot["summary"] == {"pass": 1, "fail": 1, "skipped-budget": 1}
    assert foot["suites"]["b"] == {"pass": 0, "fail": 0, "skipped-budget": 1}
