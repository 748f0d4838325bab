import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from family import CONVEX_FAMILY, random_intervals
from ineqaudit.bounds import (BoundId, Case, HypothesisError, MonotonicityError, SOUND_BOUNDS,
                              chebyshev_check, first_failure, hh_check, kernel_eval,
                              kernel_moment, kernel_moment_closed, lemma_identity_residual,
                              lhs_gap, proof_chain_audit, rhs, t3_constant_ratio, verdict,
                              young_check)
from ineqaudit.expr import DomainError

SQUARE = Case("x^2", 0.0, 1.0, 2.0)


# -- cases ------------------------------------------------------------------

def test_case_q_is_conjugate():
    for p in (1.1, 1.5, 2.0, 3.0, 10.0):
        c = Case("x^2", 0, 1, p)
        assert abs(1 / c.p + 1 / c.q - 1) < 1e-15


@pytest.mark.parametrize("args", [("x^2", 1, 1, 2), ("x^2", 2, 1, 2), ("x^2", 0, 1, 1.0),
                                  ("x^2", 0, 1, 0.5)])
def test_case_rejects_bad_parameters(args):
    with pytest.raises(ValueError):
        Case(*args)


def test_case_rejects_nonconvex():
    with pytest.raises(HypothesisError):
        Case("sin(x)", 0, 3)


def test_case_rejects_derivative_undefined_at_endpoint():
    with pytest.raises(DomainError):
        Case("x*ln(x)", 0, 1)


# -- trapezoid gap and lemma identity ----------------------------------------

def test_gap_examples():
    assert lhs_gap(SQUARE) == pytest.approx(1 / 6, abs=1e-12)
    assert lhs_gap(Case("3*x+1", 0, 2)) == pytest.approx(0, abs=1e-12)
    assert lhs_gap(Case("1/x", 1, 2)) == pytest.approx(0.75 - math.log(2), abs=1e-12)
    assert 0.75 - math.log(2) == pytest.approx(0.0568528, abs=1e-7)


def test_lemma_identity_examples():
    assert lemma_identity_residual(SQUARE) < 1e-9
    assert lemma_identity_residual(SQUARE.with_p(7.0)) < 1e-9
    exp_case = Case("exp(x)", 0, 1)
    assert lhs_gap(exp_case) == pytest.approx((1 + math.e) / 2 - (math.e - 1), abs=1e-12)
    assert lemma_identity_residual(exp_case) < 1e-9
    assert lemma_identity_residual(Case("3*x+1", -1, 2)) < 1e-12


def test_lemma_identity_on_family():
    rng = random.Random(2)
    for source, a, b in random_intervals(rng, 15):
        assert lemma_identity_residual(Case(source, a, b)) < 1e-8, (source, a, b)


# -- Hermite-Hadamard, Young, kernel -----------------------------------------

def test_hermite_hadamard_examples():
    r = hh_check("x^2", 0, 1)
    assert (r.left, r.mid, r.right) == pytest.approx((0.25, 1 / 3, 0.5), abs=1e-10)
    r = hh_check("2*x-5", 0, 3)
    assert r.holds and r.left == pytest.approx(r.mid, abs=1e-12) == r.right
    r = hh_check("exp(x)", 0, 1)
    assert (r.left, r.mid, r.right) == pytest.approx(
        (math.exp(0.5), math.e - 1, (1 + math.e) / 2), abs=1e-10)


def test_hermite_hadamard_on_family():
    rng = random.Random(3)
    assert all(hh_check(s, a, b).holds for s, a, b in random_intervals(rng, 10))


def test_young_examples():
    r = young_check(1, 1, 2)
    assert r.lhs == r.rhs == 1 and r.holds and r.equality
    r = young_check(2, 3, 2)
    assert (r.lhs, r.rhs) == (6, 6.5) and r.holds and not r.equality


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 10), st.floats(0.01, 10), st.floats(1.01, 10))
def test_young_holds(a, b, p):
    assert young_check(a, b, p).holds


def test_young_equality_case():
    p = 3.0
    a = 1.7
    b = a ** (p - 1)  # a^p = b^q
    r = young_check(a, b, p)
    assert r.equality and r.lhs == pytest.approx(r.rhs, rel=1e-14)


def test_kernel_examples():
    assert kernel_eval(2, 0.25) == pytest.approx(1.25, abs=1e-15)
    assert kernel_eval(2, 0.01) == pytest.approx(5.05, abs=1e-13)
    for p in (1.1, 2.0, 7.0):
        assert kernel_eval(p, 1.0) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(DomainError):
        kernel_eval(2, 0.0)


def test_kernel_at_least_one():
    rng = random.Random(4)
    for _ in range(10_000):
        p, t = rng.uniform(1.0001, 20), rng.uniform(1e-12, 1)
        assert kernel_eval(p, t) >= 1 - 1e-15


@pytest.mark.parametrize("p", [1.1, 1.5, 2.0, 3.0, 5.0, 10.0])
def test_kernel_moments(p):
    assert abs(kernel_moment(p) - 2 * p / (p + 1)) < 1e-9
    w = kernel_moment(p, "one-minus-2t")
    assert abs(w - 2 * p * (p - 1) / ((p + 1) * (2 * p + 1))) < 1e-9
    assert kernel_moment_closed(p, "one-minus-2t") == pytest.approx(w, abs=1e-9)


def test_kernel_moment_values():
    assert kernel_moment(2) == pytest.approx(4 / 3, abs=1e-9)
    assert kernel_moment(2, "one-minus-2t") == pytest.approx(4 / 15, abs=1e-9)
    assert kernel_moment(1.1, "one-minus-2t") == pytest.approx(11 / 336, abs=1e-9)


# -- Chebyshev ---------------------------------------------------------------

def test_chebyshev_examples():
    r = chebyshev_check("x", "x")
    assert (r.lhs, r.rhs) == pytest.approx((1 / 3, 1 / 4), abs=1e-12)
    assert r.holds and r.orientation == "comonotone" and r.form == "unit-interval"
    r = chebyshev_check("x", "1-2*x")
    assert (r.lhs, r.rhs) == pytest.approx((-1 / 6, 0), abs=1e-12)
    assert r.holds and r.orientation == "anti-monotone"
    r = chebyshev_check("3", "exp(x)")
    assert r.holds and r.orientation == "constant" and r.lhs == pytest.approx(r.rhs, abs=1e-12)


def test_chebyshev_refuses_non_monotone():
    with pytest.raises(MonotonicityError):
        chebyshev_check("sin(6*x)", "x")


def test_chebyshev_random_pairs():
    pool = ["x", "x^2", "exp(x)", "-x", "1-2*x"]
    weights = [None, "x^2", "exp(-x)"]
    rng = random.Random(5)
    for _ in range(100):
        f, g = rng.choice(pool), rng.choice(pool)
        w = rng.choice(weights)
        a = rng.uniform(0, 2)
        b = a + rng.uniform(0.1, 2)
        r = chebyshev_check(f, g, w, a, b)
        assert r.holds, (f, g, w, a, b)
        assert r.form == ("weighted" if w else ("unweighted" if (a, b) != (0, 1) else "unit-interval"))


# -- right-hand sides --------------------------------------------------------

def test_rhs_examples():
    assert rhs(BoundId.T1, SQUARE) == pytest.approx(4 / 9, abs=1e-9)
    assert rhs(BoundId.T2, SQUARE) == pytest.approx(2 / 15, abs=1e-15)
    assert rhs(BoundId.T3_DERIVED, SQUARE) == pytest.approx(1 / math.sqrt(6), abs=1e-9)
    assert rhs(BoundId.DA1, SQUARE) == pytest.approx(0.25, abs=1e-15)


def test_corollaries_fix_p():
    for p in (1.5, 4.0):
        c = SQUARE.with_p(p)
        assert rhs("C1", c) == pytest.approx(rhs("T1", SQUARE), rel=1e-12)
        assert rhs("C3_DERIVED", c) == pytest.approx(rhs("T3_DERIVED", SQUARE), rel=1e-12)
        assert rhs("C2_DERIVED", c) == pytest.approx(11 / 672, rel=1e-12)
        assert rhs("C2_STATED", c) == pytest.approx(11 / 483, rel=1e-12)


def test_c2_derived_is_t2_at_p_one_point_one():
    assert rhs("C2_DERIVED", SQUARE) == pytest.approx(rhs("T2", SQUARE.with_p(1.1)), rel=1e-14)


def test_c3_stated_uses_unit_interval_limits():
    # the printed corollary integrates over [0, 1] whatever [a, b] is; only the
    # midpoint enters, so these two intervals agree: 2^(3/2)/3 * (3/8)^(1/2)
    a = rhs("C3_STATED", Case("x^2", 0.0, 1.0))
    b = rhs("C3_STATED", Case("x^2", 0.25, 0.75))
    assert a == pytest.approx(b, rel=1e-12)
    assert a == pytest.approx(1 / math.sqrt(3), abs=1e-9)
    with pytest.raises(DomainError):
        rhs("C3_STATED", Case("x*ln(x)", 0.5, 2))


def test_verdict_examples():
    v = verdict("T1", SQUARE)
    assert v.holds and v.lhs == pytest.approx(1 / 6, abs=1e-10)
    v = verdict("T2", SQUARE)
    assert not v.holds and v.margin == pytest.approx(1 / 30, abs=1e-9)
    assert v.slack == pytest.approx(v.quad_error + 1e-9, abs=0)
    for bound in BoundId:
        v = verdict(bound, Case("3*x+1", 0.5, 2))
        assert v.lhs == pytest.approx(0, abs=1e-12)
        if v.rhs >= 0:
            assert v.holds


def test_baseline_hypotheses_are_screened():
    # |f'| = |1 - 1/x^2| ... use a case where |f'| is visibly non convex
    with pytest.raises(HypothesisError):
        verdict("DA1", Case("exp(-x) + x^4/12", -2, 2))
    assert verdict("DA1", SQUARE).holds


@pytest.mark.parametrize("source, lo, span", CONVEX_FAMILY)
def test_sound_bounds_hold_on_family(source, lo, span):
    rng = random.Random(source)
    for _ in range(5):
        a = rng.uniform(lo, lo + span / 2)
        b = a + rng.uniform(0.05, span / 2)
        for p in (1.1, 1.5, 2.0, 3.0, 10.0):
            case = Case(source, a, b, p)
            for bound in (BoundId.T1, BoundId.T3_DERIVED):
                assert verdict(bound, case).holds, (bound, source, a, b, p)


def test_sound_set():
    assert {b.value for b in SOUND_BOUNDS} == {"T1", "C1", "T3_DERIVED", "C3_DERIVED", "DA1", "DA2"}


# -- proof chains ------------------------------------------------------------

def test_t1_chain_holds():
    links = proof_chain_audit("T1", SQUARE)
    assert first_failure(links) is None
    assert [l.step for l in links][:3] == ["lemma", "kernel_integral", "multiply"]


def test_t2_chain_fails_at_chebyshev():
    links = proof_chain_audit("T2", SQUARE)
    bad = first_failure(links)
    assert bad is not None and bad.step == "chebyshev_first"
    # the weighted integral of (1-2t) f'(ta+(1-t)b) is 1/3 for x^2 on [0,1]
    assert bad.lhs == pytest.approx(0.5 * (4 / 3) * (1 / 3), abs=1e-9)


def test_t3_chain_fails_at_constant():
    links = proof_chain_audit("T3_STATED", SQUARE)
    steps = {l.step: l for l in links}
    assert steps["power_mean"].holds
    bad = first_failure(links)
    assert bad.step == "power_mean_constant"
    assert bad.ratio == pytest.approx(2 / SQUARE.length, rel=1e-9)


def test_t3_ratio_closed_form_matches_evaluation():
    rng = random.Random(6)
    for source, a, b in random_intervals(rng, 3):
        for p in (1.5, 2.0, 5.0):
            case = Case(source, a, b, p)
            ratio = rhs("T3_STATED", case) / rhs("T3_DERIVED", case)
            assert ratio == pytest.approx(t3_constant_ratio(case), rel=1e-9)
    assert t3_constant_ratio(SQUARE) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_chain_rejects_other_theorems():
    with pytest.raises(ValueError):
        proof_chain_audit("C1", SQUARE)
