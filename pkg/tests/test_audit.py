import json
import math

import pytest

from ineqaudit.audit import (AuditReport, SearchSpec, run_named_suite, run_suite, search,
                             suite_cases, verdicts_from_csv)
from ineqaudit.bounds import BoundId, Case
from ineqaudit.propositions import PropCase


@pytest.fixture(scope="module")
def default_report():
    return run_named_suite("default")


@pytest.fixture(scope="module")
def quick_report():
    return run_named_suite("quick")


def test_empty_suite():
    report = run_suite(["T1", "T2"], [])
    assert report.verdicts == [] and report.errors == []
    assert report.summary == {} and report.worst_violation is None


def test_one_verdict_per_claim_and_case():
    cases = [Case("x^2", 0, 1), Case("exp(x)", 1, 2, 3.0)]
    report = run_suite(["T1", "t2", "C1"], cases)
    assert [v.claim for v in report.verdicts] == ["T1"] * 2 + ["T2"] * 2 + ["C1"] * 2
    assert report.summary["T2"].violations == 1
    assert report.worst_violation.claim == "T2"


def test_case_failures_are_recorded_not_raised():
    cases = [Case("x^2", 0, 1), Case("1/x", 0.5, 2)]
    report = run_suite(["C3_STATED", "P4"], {"C3_STATED": cases, "P4": [PropCase("P4", 1, 2)]})
    # 1/x is undefined at 0, which the printed corollary's limits reach
    assert len(report.verdicts) == 2
    assert len(report.errors) == 1 and report.errors[0]["claim"] == "C3_STATED"
    assert "DomainError" in report.errors[0]["error"]


def test_mismatched_proposition_case_is_an_error():
    report = run_suite(["P1"], {"P1": [PropCase("P4", 1, 2)]})
    assert report.verdicts == [] and len(report.errors) == 1


def test_summary_matches_verdicts(default_report):
    for claim, s in default_report.summary.items():
        mine = [v for v in default_report.verdicts if v.claim == claim]
        assert s.cases == len(mine)
        assert s.holds == sum(v.holds for v in mine)
        assert s.violations == s.cases - s.holds
        assert s.max_margin == max(v.margin for v in mine)
        assert default_report.verdicts[s.argmax].margin == s.max_margin


def test_default_suite_contents(default_report):
    t1 = [v for v in default_report.verdicts if v.claim == "T1"]
    assert len(t1) >= 400
    assert default_report.sound_violations == []
    t2_bad = [v for v in default_report.verdicts if v.claim == "T2" and not v.holds]
    assert any(v.f == "x^2" and (v.a, v.b, v.p) == (0, 1, 2) for v in t2_bad)
    assert default_report.summary["C2_STATED"].violations > 0


def test_default_findings(default_report):
    f = default_report.findings
    assert f["c2_constant_ratio"]["ratio"] == pytest.approx(672 / 483, rel=1e-12)
    chains = f["proof_chains"]
    assert chains["T1"]["first_failure"] is None
    assert chains["T2"]["first_failure"] == "chebyshev_first"
    assert chains["T3_STATED"]["first_failure"] == "power_mean_constant"
    assert f["t3_stated_vs_derived"]
    for row in f["t3_stated_vs_derived"]:
        assert row["ratio"] == pytest.approx(row["closed_form"], rel=1e-8)
    assert {row["prop"] for row in f["proposition_crosschecks"]} == {f"P{i}" for i in range(1, 7)}


def test_json_round_trip(quick_report):
    again = AuditReport.from_json(quick_report.to_json())
    assert again == quick_report
    assert json.loads(again.to_json()) == json.loads(quick_report.to_json())


def test_json_csv_consistency(quick_report):
    from_csv = verdicts_from_csv(quick_report.to_csv())
    assert from_csv == quick_report.verdicts
    lines = quick_report.to_csv().strip().split("\n")
    assert len(lines) == len(quick_report.verdicts) + 1


def test_suite_is_deterministic():
    a, b = run_named_suite("quick"), run_named_suite("quick")
    assert a.verdicts == b.verdicts and a.findings == b.findings


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_named_suite("none")
    with pytest.raises(KeyError):
        suite_cases("none")


def test_corollary_cases_use_fixed_p():
    _, per_claim = suite_cases("quick")
    assert {c.p for c in per_claim["C1"]} == {2.0}
    assert {c.p for c in per_claim["C2_STATED"]} == {1.1}


# -- search ------------------------------------------------------------------

def test_search_finds_t2_violation():
    res = search(SearchSpec("T2", budget=2000))
    assert res.violated and res.best_margin >= 1 / 30 - 1e-9


def test_search_pinned_to_spot_case():
    spec = SearchSpec("T2", family="x^2", a_range=(0, 0), delta_range=(1, 1), p_range=(2, 2),
                      budget=10)
    res = search(spec)
    assert res.best_margin == pytest.approx(1 / 30, abs=1e-9)
    assert res.best_case == {"claim": "T2", "f": "x^2", "a": 0.0, "b": 1.0, "p": 2.0, "n": None}


def test_search_t1_sound():
    res = search(SearchSpec("T1", budget=1000, rounds=3))
    assert not res.violated and res.best_margin < 0


def test_search_is_deterministic():
    spec = SearchSpec("T3_STATED", budget=600, rounds=4, seed=3)
    one, two = search(spec), search(spec)
    assert (one.best_case, one.best_margin, one.trace) == (two.best_case, two.best_margin, two.trace)


def test_search_trace_is_monotone():
    res = search(SearchSpec("P2", budget=600, rounds=6, seed=1))
    assert all(x <= y for x, y in zip(res.trace, res.trace[1:]))
    assert res.evaluations <= 600


def test_search_budget_below_grid():
    with pytest.raises(ValueError):
        search(SearchSpec("T2", budget=1))


def test_search_infeasible_box_is_empty():
    res = search(SearchSpec("T1", family="reciprocal", a_range=(-3, -2), budget=100))
    assert res.best_case is None and res.best_margin is None and not res.violated


def test_search_proposition_and_fixed_p_boxes():
    spec = SearchSpec("C2_STATED")
    assert spec.box()[2] == (1.1, 1.1)
    assert SearchSpec("P1").members() == tuple(range(2, 9))
    assert SearchSpec("P4").box()[0][0] > 0
    assert not math.isnan(search(SearchSpec("P4", budget=100, rounds=1)).best_margin)


def test_claim_names_normalize():
    report = run_suite(["t3-derived", BoundId.C1], [Case("x^2", 0, 1)])
    assert [v.claim for v in report.verdicts] == ["T3_DERIVED", "C1"]
