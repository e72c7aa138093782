import json
import math

import numpy as np
import pytest

from oneclean import decider
from oneclean.circuit import BqpCircuit, Circuit, Gate
from oneclean.decider import (DeciderReport, MedianEstimator,
                              PromiseViolationError, amplify_majority,
                              amplify_median, binomial_sigma, bounds_first,
                              bounds_second, decide_first, decide_second,
                              end_to_end_decide, first_accept_prob,
                              first_accept_raw, majority_error_bound,
                              median_failure_bound, promise_case,
                              run_first_trials, run_second_trials,
                              second_accept_prob)
from oneclean.estimators import FprasEstimator, OneSidedEstimate, exact_bias
from oneclean.reduction import reduce_bqp_to_dqc1
from oneclean.simulate import dqc1_exact
from oneclean.workloads import (HARD_NO_Q, HARD_YES_Q, no_promise,
                                yes_promise)


class _FixedRng:
    def __init__(self, u):
        self.u = u

    def random(self):
        return self.u


def test_first_accept_worked_values():
    assert first_accept_prob(0.5625, 3) == 0.75
    assert first_accept_prob(0.5 + 2.0 ** -3, 3) == 1.0
    assert first_accept_prob(0.5 - 2.0 ** -3, 3) == 0.0
    assert first_accept_prob(0.0, 3) == 0.0   # clamped from -3/2
    assert first_accept_raw(0.0, 3) == -1.5


def test_second_accept_worked_values():
    for n in (1, 3, 5):
        assert second_accept_prob(2.0 ** -n, n) == 1.0
        assert second_accept_prob(-(2.0 ** -n), n) == 0.0
    assert second_accept_prob(3.0 / 32.0, 3) == 7.0 / 8.0


def test_accept_prob_monotone():
    ps = np.linspace(0.30, 0.70, 41)
    first = first_accept_prob(ps, 3)
    assert np.all(np.diff(first) >= 0)
    qs = np.linspace(-0.2, 0.2, 41)
    second = second_accept_prob(qs, 3)
    assert np.all(np.diff(second) >= 0)


def test_accept_prob_recovers_q_exactly():
    # with the exact P' and Q' both deciders accept with probability q
    for builder, q_ref in ((yes_promise, HARD_YES_Q), (no_promise, HARD_NO_Q)):
        art = reduce_bqp_to_dqc1(builder(hard=True))
        assert abs(art.accept_prob - q_ref) <= 1e-12
        n = art.instance.mixed_width
        p0 = dqc1_exact(art.instance).prob(0)
        assert abs(first_accept_raw(p0, n) - art.accept_prob) <= 1e-12
        q_bias = exact_bias(art.instance)
        assert abs(decider.second_accept_raw(q_bias, n) - art.accept_prob) <= 1e-12


def test_decide_with_stub_rng():
    est = OneSidedEstimate(0.5625, 11)   # accept prob 0.75 at n=3
    assert decide_first(est, 3, _FixedRng(0.74)) == 0
    assert decide_first(est, 3, _FixedRng(0.76)) == 1
    assert decide_first(0.5625, 3, _FixedRng(0.74)) == 0
    assert decide_second(3.0 / 32.0, 3, _FixedRng(0.874)) == 0
    assert decide_second(3.0 / 32.0, 3, _FixedRng(0.876)) == 1


def test_bounds_first_worked_values():
    b = bounds_first(0.125, 3, 11)
    assert b["yes_lower"] == 0.875 - 2.0 ** -9
    assert b["no_upper"] == 0.125
    assert bounds_first(0.125, 3, 11, epsilon=0.0)["yes_lower"] == 0.875
    # shortfall is scaled by 2^(n-1)
    assert bounds_first(0.125, 4, 12, epsilon=2.0 ** -12)["yes_lower"] \
        == 0.875 - 2.0 ** -9


def test_bounds_first_vacuous_r_raises():
    with pytest.raises(ValueError):
        bounds_first(0.125, 3, 2)
    bounds_first(0.125, 3, 3)  # smallest useful r


def test_bounds_second_worked_values():
    b = bounds_second(0.125, 0.25)
    assert b["case1"] == 0.875
    assert b["case2"] == 0.75 * 0.875
    assert b["case3"] == 0.125
    assert b["case4"] == 1.25 * 0.125
    tight = bounds_second(0.125, 1e-12)
    assert abs(tight["case1"] - tight["case2"]) <= 1e-12
    assert abs(tight["case3"] - tight["case4"]) <= 1e-12


def test_majority_error_bound_value():
    b = majority_error_bound(2.0 / 3.0, 101)
    assert math.isclose(b, math.exp(-202.0 / 36.0), rel_tol=1e-12)
    assert b < 0.004


def test_median_failure_bound_values():
    assert abs(median_failure_bound(0.25, 15) - math.exp(-1.875)) == 0.0
    assert abs(median_failure_bound(0.25, 55) - math.exp(-6.875)) == 0.0
    assert median_failure_bound(0.25, 55) < 0.0011


def test_amplify_majority():
    assert amplify_majority(lambda: 0, 5) == 0
    assert amplify_majority(lambda: 1, 5) == 1
    seq = iter([0, 1, 0])
    assert amplify_majority(lambda: next(seq), 3) == 0
    with pytest.raises(ValueError):
        amplify_majority(lambda: 0, 4)
    with pytest.raises(ValueError):
        amplify_majority(lambda: 0, 0)


def test_median_estimator_reps_one_is_base():
    base = FprasEstimator(0.1, 0.25, 0.25, seed=19)
    med = MedianEstimator(base, 1)
    assert np.array_equal(med.draw_batch(0, 64), base.draw_batch(0, 64))
    assert med.draw(7) == base.draw(7)


def test_median_estimator_validation():
    base = FprasEstimator(0.1, 0.25, 0.25, seed=0)
    with pytest.raises(ValueError):
        MedianEstimator(base, 2)
    with pytest.raises(ValueError):
        MedianEstimator(FprasEstimator(0.1, 0.25, 0.3, seed=0), 3)


def test_median_amplification_beats_bound():
    base = FprasEstimator(0.125, 0.25, 0.25, seed=23)
    med = amplify_median(base, 15)
    draws = med.draw_batch(0, 5000)
    out_rate = float(np.count_nonzero(~med.in_band(draws))) / draws.size
    assert out_rate <= med.failure_bound()
    # amplification actually helps: the base stream fails ~25% of the time
    base_out = float(np.count_nonzero(~base.in_band(base.draw_batch(0, 5000)))) / 5000
    assert out_rate < base_out / 5


def test_promise_case():
    assert promise_case(0.9, 0.125) == "yes"
    assert promise_case(0.875, 0.125) == "yes"
    assert promise_case(0.1, 0.125) == "no"
    assert promise_case(0.125, 0.125) == "no"
    with pytest.raises(PromiseViolationError) as exc:
        promise_case(0.5, 0.125)
    assert exc.value.q == 0.5 and exc.value.delta == 0.125


def test_first_trials_smoke():
    for builder, expect_side in ((yes_promise, "yes"), (no_promise, "no")):
        art = reduce_bqp_to_dqc1(builder(hard=True))
        rep = run_first_trials(art, trials=20_000, seed=1)
        assert rep.trials == 20_000
        assert rep.case_label == f"First-{expect_side}"
        slack = 3 * binomial_sigma(rep.analytic_bound, rep.trials)
        assert rep.bound_holds(slack)
        assert rep.clamp_activations == 0


def test_second_trials_smoke():
    art = reduce_bqp_to_dqc1(yes_promise(hard=True))
    res = run_second_trials(art, trials=20_000, seed=2)
    assert res.side == "yes"
    assert set(res.case_reports) == {"case1", "case2"}
    for rep in res.case_reports.values():
        slack = 3 * binomial_sigma(max(rep.analytic_bound, 1e-3), rep.trials)
        assert rep.bound_holds(slack)
    # clamping is expected here: q near 1 pushes the raw accept above 1
    assert res.clamp_activations > 0
    assert res.out_of_band_trials <= 10
    assert res.median_failure_bound == median_failure_bound(0.25, 55)


def test_second_trials_no_side():
    art = reduce_bqp_to_dqc1(no_promise(hard=True))
    res = run_second_trials(art, trials=20_000, seed=3)
    assert res.side == "no"
    assert set(res.case_reports) == {"case3", "case4"}
    for rep in res.case_reports.values():
        slack = 3 * binomial_sigma(rep.analytic_bound, max(rep.trials, 1))
        assert rep.bound_holds(slack)
    assert res.overall_accept_rate <= bounds_second(0.125, 0.25)["case4"] \
        + res.median_failure_bound + 0.01


def test_end_to_end_all_estimators():
    for est in ("exact-rounded", "mock-fpras", "mc"):
        for builder, want in ((yes_promise, 0), (no_promise, 1)):
            out = end_to_end_decide(builder(hard=True), estimator=est, seed=4)
            assert out.decision == want, (est, want)
            assert out.report.trials == 101


def test_end_to_end_gap_raises():
    with pytest.raises(PromiseViolationError):
        end_to_end_decide(BqpCircuit(Circuit(3, (Gate.h(0),))))


def test_end_to_end_unknown_estimator():
    with pytest.raises(ValueError):
        end_to_end_decide(yes_promise(), estimator="oracle")
    with pytest.raises(ValueError):
        end_to_end_decide(yes_promise(), majority_k=10)


def test_clamp_counted_for_extreme_yes():
    # q = 1 exactly: half the in-band draws overshoot Q and push the raw
    # accept probability above 1
    art = reduce_bqp_to_dqc1(BqpCircuit(Circuit(3, ())))
    assert art.accept_prob == 1.0
    res = run_second_trials(art, trials=5_000, seed=5)
    assert res.clamp_activations > 0
    assert res.overall_accept_rate >= 0.9


def test_report_json_shape():
    art = reduce_bqp_to_dqc1(yes_promise(hard=True))
    rep = run_first_trials(art, trials=1000, seed=6)
    d = rep.to_json_dict()
    assert set(d) == {"trials", "empiricalAcceptRate", "analyticBound",
                      "boundKind", "caseLabel", "clampActivations",
                      "parameters"}
    json.dumps(d)  # strictly serializable

    res = run_second_trials(art, trials=1000, seed=6)
    d2 = res.to_json_dict()
    assert {"side", "q", "bias", "trials", "overallAcceptRate", "cases",
            "outOfBandTrials", "outOfBandAcceptRate", "clampActivations",
            "medianFailureBound", "parameters"} == set(d2)
    text = json.dumps(d2)
    json.loads(text)  # NaN-free


def test_bound_holds_direction():
    lower = DeciderReport(10, 0.9, 0.8, "lower", "x")
    assert lower.bound_holds() and not DeciderReport(10, 0.7, 0.8, "lower", "x").bound_holds()
    upper = DeciderReport(10, 0.1, 0.2, "upper", "x")
    assert upper.bound_holds() and not DeciderReport(10, 0.3, 0.2, "upper", "x").bound_holds()
    assert DeciderReport(10, 0.7, 0.8, "lower", "x").bound_holds(slack=0.15)
