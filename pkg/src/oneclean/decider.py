"""Probabilistic deciders built on the estimators, with analytic bounds.

Both deciders turn an estimate into a single biased coin:

* the one-sided route accepts with probability 2^(n-1) (P' - 1/2 + 2^-n),
* the relative-error route accepts with probability 2^(n-1) (Q' + 2^-n).

With exact estimates both coins land heads with probability q, so every
bound below is an affine perturbation of q by the estimator's error
model.  Accept probabilities are clamped to [0, 1]; the clamp can fire
under honest relative noise when q is near 1 (the raw value overshoots
by at most epsilon/2), so activations are counted and reported rather
than treated as errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _seeding
from .estimators import FprasEstimator, OneSidedEstimate, exact_bias, exact_rounded
from .reduction import ReductionArtifact

_TRIAL_CHUNK = 1 << 13


def _json_rate(x: float):
    # empty buckets have no rate; emit null rather than bare NaN
    return x if math.isfinite(x) else None


class PromiseViolationError(RuntimeError):
    """The source circuit's acceptance lies inside the promise gap."""

    def __init__(self, q: float, delta: float):
        super().__init__(
            f"acceptance probability {q:.6g} lies in the promise gap "
            f"({delta:.6g}, {1 - delta:.6g})")
        self.q = q
        self.delta = delta


def promise_case(q: float, delta: float) -> str:
    """'yes' or 'no' side of the promise; raises inside the gap."""
    if q >= 1.0 - delta:
        return "yes"
    if q <= delta:
        return "no"
    raise PromiseViolationError(q, delta)


def binomial_sigma(p: float, trials: int) -> float:
    return math.sqrt(p * (1.0 - p) / trials)


# ---------------------------------------------------------------------------
# single-shot accept probabilities (array-friendly)

def first_accept_raw(p_prime, n: int):
    return 2.0 ** (n - 1) * (p_prime - 0.5 + 2.0 ** -n)


def first_accept_prob(p_prime, n: int):
    return np.clip(first_accept_raw(p_prime, n), 0.0, 1.0)


def second_accept_raw(q_prime, n: int):
    return 2.0 ** (n - 1) * (q_prime + 2.0 ** -n)


def second_accept_prob(q_prime, n: int):
    return np.clip(second_accept_raw(q_prime, n), 0.0, 1.0)


def decide_first(p_prime, n: int, rng: np.random.Generator) -> int:
    """One output bit; o=0 fires with the first decider's accept probability."""
    value = p_prime.value if isinstance(p_prime, OneSidedEstimate) else float(p_prime)
    return 0 if rng.random() < first_accept_prob(value, n) else 1


def decide_second(q_prime: float, n: int, rng: np.random.Generator) -> int:
    return 0 if rng.random() < second_accept_prob(float(q_prime), n) else 1


# ---------------------------------------------------------------------------
# analytic bounds

def bounds_first(delta: float, n: int, r: int, epsilon: float | None = None) -> dict:
    """Accept-rate bounds for the one-sided decider.

    `epsilon` is the estimator's worst-case shortfall and defaults to the
    truncation error 2^-r, giving the yes bound (1-delta) - 2^-(r-(n-1)).
    Requires r > n-1; below that the yes bound says nothing.
    """
    if r <= n - 1:
        raise ValueError(f"r={r} must exceed n-1={n - 1}; the bound is vacuous")
    if epsilon is None:
        epsilon = 2.0 ** -r
    return {
        "yes_lower": (1.0 - delta) - epsilon * 2.0 ** (n - 1),
        "no_upper": delta,
    }


def bounds_second(delta: float, epsilon: float) -> dict:
    """Accept-rate bounds for the relative-error decider, split by the
    estimate's side of the true bias: cases 1-2 bound yes-instances from
    below, cases 3-4 bound no-instances from above."""
    return {
        "case1": 1.0 - delta,
        "case2": (1.0 - epsilon) * (1.0 - delta),
        "case3": delta,
        "case4": (1.0 + epsilon) * delta,
    }


# ---------------------------------------------------------------------------
# amplification

def majority_error_bound(p: float, k: int) -> float:
    """Hoeffding tail for a k-vote majority with per-vote success p > 1/2."""
    return math.exp(-2.0 * k * (p - 0.5) ** 2)


def median_failure_bound(eta: float, repetitions: int) -> float:
    return math.exp(-2.0 * repetitions * (0.5 - eta) ** 2)


def amplify_majority(sampler, k: int) -> int:
    """Majority value of k calls to sampler() (each returning 0 or 1)."""
    if k < 1 or k % 2 == 0:
        raise ValueError("k must be odd and positive")
    zeros = sum(1 for _ in range(k) if sampler() == 0)
    return 0 if 2 * zeros > k else 1


@dataclass(frozen=True)
class MedianEstimator:
    """Median of `repetitions` base draws per index; same band, smaller
    failure probability (Hoeffding over the in-band indicator)."""

    base: FprasEstimator
    repetitions: int

    def __post_init__(self):
        if self.repetitions < 1 or self.repetitions % 2 == 0:
            raise ValueError("repetitions must be odd and positive")
        if self.base.eta > 0.25:
            raise ValueError("median amplification needs eta <= 1/4")

    def draw_batch(self, start: int, count: int) -> np.ndarray:
        reps = self.repetitions
        flat = self.base.draw_batch(start * reps, count * reps)
        return np.median(flat.reshape(count, reps), axis=1)

    def draw(self, index: int = 0) -> float:
        return float(self.draw_batch(index, 1)[0])

    def in_band(self, value):
        return self.base.in_band(value)

    def failure_bound(self) -> float:
        return median_failure_bound(self.base.eta, self.repetitions)


def amplify_median(fpras: FprasEstimator, repetitions: int) -> MedianEstimator:
    return MedianEstimator(fpras, repetitions)


# ---------------------------------------------------------------------------
# trial harnesses

@dataclass(frozen=True)
class DeciderReport:
    trials: int
    empirical_accept_rate: float
    analytic_bound: float
    bound_kind: str
    case_label: str
    parameters: dict = field(default_factory=dict)
    clamp_activations: int = 0

    def bound_holds(self, slack: float = 0.0) -> bool:
        if self.bound_kind == "lower":
            return self.empirical_accept_rate >= self.analytic_bound - slack
        return self.empirical_accept_rate <= self.analytic_bound + slack

    def to_json_dict(self) -> dict:
        return {
            "trials": self.trials,
            "empiricalAcceptRate": _json_rate(self.empirical_accept_rate),
            "analyticBound": self.analytic_bound,
            "boundKind": self.bound_kind,
            "caseLabel": self.case_label,
            "clampActivations": self.clamp_activations,
            "parameters": dict(self.parameters),
        }


def run_first_trials(artifact: ReductionArtifact, *, trials: int, seed: int,
                     delta: float = 0.125, r: int | None = None) -> DeciderReport:
    """Single-shot accept rate of the one-sided decider over many trials.

    The estimate is deterministic, so each trial is one biased coin flip;
    trial i draws from counter block i.
    """
    n = artifact.instance.mixed_width
    if r is None:
        r = n + 8
    side = promise_case(artifact.accept_prob, delta)
    est = exact_rounded(artifact.instance, 0, r)
    raw = first_accept_raw(est.value, n)
    p_accept = float(np.clip(raw, 0.0, 1.0))
    activations = trials if (raw < 0.0 or raw > 1.0) else 0
    accepted = 0
    for start in range(0, trials, _TRIAL_CHUNK):
        size = min(_TRIAL_CHUNK, trials - start)
        us = _seeding.block_uniforms(seed, "first-trials", start, size)[:, 0]
        accepted += int(np.count_nonzero(us < p_accept))
    bounds = bounds_first(delta, n, r)
    bound, kind = ((bounds["yes_lower"], "lower") if side == "yes"
                   else (bounds["no_upper"], "upper"))
    return DeciderReport(
        trials=trials,
        empirical_accept_rate=accepted / trials,
        analytic_bound=bound,
        bound_kind=kind,
        case_label=f"First-{side}",
        parameters={"n": n, "delta": delta, "r": r, "seed": seed,
                    "q": artifact.accept_prob, "pPrime": est.value,
                    "acceptProb": p_accept},
        clamp_activations=activations,
    )


@dataclass(frozen=True)
class SecondTrialsResult:
    side: str
    q: float
    bias: float
    trials: int
    overall_accept_rate: float
    case_reports: dict
    out_of_band_trials: int
    out_of_band_accept_rate: float
    clamp_activations: int
    median_failure_bound: float
    parameters: dict

    def to_json_dict(self) -> dict:
        return {
            "side": self.side,
            "q": self.q,
            "bias": self.bias,
            "trials": self.trials,
            "overallAcceptRate": self.overall_accept_rate,
            "cases": {k: v.to_json_dict() for k, v in sorted(self.case_reports.items())},
            "outOfBandTrials": self.out_of_band_trials,
            "outOfBandAcceptRate": _json_rate(self.out_of_band_accept_rate),
            "clampActivations": self.clamp_activations,
            "medianFailureBound": self.median_failure_bound,
            "parameters": dict(self.parameters),
        }


def run_second_trials(artifact: ReductionArtifact, *, trials: int, seed: int,
                      delta: float = 0.125, epsilon: float = 0.25,
                      eta: float = 0.25,
                      median_reps: int = 55) -> SecondTrialsResult:
    """Accept rates of the relative-error decider, split by estimate case.

    Each trial takes the median of `median_reps` fresh estimator draws and
    flips one coin.  Trials whose median lands outside the relative band
    (the amplifier's residual failures) are tallied separately; in-band
    trials are bucketed by the sign of Q' - Q, matching the four analytic
    cases.
    """
    n = artifact.instance.mixed_width
    q = artifact.accept_prob
    side = promise_case(q, delta)
    bias = exact_bias(artifact.instance, 0)
    med = MedianEstimator(FprasEstimator(bias, epsilon, eta, seed), median_reps)
    bounds = bounds_second(delta, epsilon)
    case_pair = ("case1", "case2") if side == "yes" else ("case3", "case4")

    accepted_total = 0
    case_n = {c: 0 for c in case_pair}
    case_acc = {c: 0 for c in case_pair}
    out_n = 0
    out_acc = 0
    activations = 0
    for start in range(0, trials, _TRIAL_CHUNK):
        size = min(_TRIAL_CHUNK, trials - start)
        qprime = med.draw_batch(start, size)
        raw = second_accept_raw(qprime, n)
        activations += int(np.count_nonzero((raw < 0.0) | (raw > 1.0)))
        us = _seeding.block_uniforms(seed, "second-accept", start, size)[:, 0]
        o0 = us < np.clip(raw, 0.0, 1.0)
        accepted_total += int(np.count_nonzero(o0))
        in_b = med.in_band(qprime)
        if side == "yes":
            masks = {"case1": in_b & (qprime >= bias), "case2": in_b & (qprime < bias)}
        else:
            masks = {"case3": in_b & (qprime <= bias), "case4": in_b & (qprime > bias)}
        for c, mask in masks.items():
            case_n[c] += int(np.count_nonzero(mask))
            case_acc[c] += int(np.count_nonzero(o0 & mask))
        out_n += int(np.count_nonzero(~in_b))
        out_acc += int(np.count_nonzero(o0 & ~in_b))

    params = {"n": n, "delta": delta, "epsilon": epsilon, "eta": eta,
              "medianReps": median_reps, "seed": seed}
    reports = {}
    for c in case_pair:
        kind = "lower" if c in ("case1", "case2") else "upper"
        rate = case_acc[c] / case_n[c] if case_n[c] else float("nan")
        reports[c] = DeciderReport(
            trials=case_n[c],
            empirical_accept_rate=rate,
            analytic_bound=bounds[c],
            bound_kind=kind,
            case_label=f"Second-{c}",
            parameters=params,
        )
    return SecondTrialsResult(
        side=side,
        q=q,
        bias=bias,
        trials=trials,
        overall_accept_rate=accepted_total / trials,
        case_reports=reports,
        out_of_band_trials=out_n,
        out_of_band_accept_rate=out_acc / out_n if out_n else float("nan"),
        clamp_activations=activations,
        median_failure_bound=med.failure_bound(),
        parameters=params,
    )


# ---------------------------------------------------------------------------
# full pipeline

@dataclass(frozen=True)
class EndToEndResult:
    decision: int
    report: DeciderReport


def end_to_end_decide(bqp, *, estimator: str = "exact-rounded",
                      r: int | None = None, epsilon: float = 0.25,
                      eta: float = 0.25, shots: int = 10_000,
                      majority_k: int = 101, median_reps: int = 55,
                      seed: int = 0) -> EndToEndResult:
    """Reduce, estimate, decide, amplify; the promise gap is checked
    against the exact q before any estimation."""
    from .estimators import additive_mc
    from .reduction import reduce_bqp_to_dqc1

    if majority_k < 1 or majority_k % 2 == 0:
        raise ValueError("majority_k must be odd and positive")
    art = reduce_bqp_to_dqc1(bqp)
    n = art.instance.mixed_width
    delta = bqp.delta
    side = promise_case(art.accept_prob, delta)
    if r is None:
        r = n + 8

    params = {"estimator": estimator, "n": n, "delta": delta, "seed": seed,
              "majorityK": majority_k, "q": art.accept_prob}
    if estimator == "exact-rounded":
        est = exact_rounded(art.instance, 0, r)
        raw = np.full(majority_k, first_accept_raw(est.value, n))
        b = bounds_first(delta, n, r)
        params.update({"r": r, "estimate": est.value})
    elif estimator == "mock-fpras":
        bias = exact_bias(art.instance, 0)
        med = MedianEstimator(FprasEstimator(bias, epsilon, eta, seed),
                              median_reps)
        qprime = med.draw_batch(0, majority_k)
        raw = second_accept_raw(qprime, n)
        b = bounds_second(delta, epsilon)
        b = {"yes_lower": b["case2"], "no_upper": b["case4"]}
        params.update({"epsilon": epsilon, "eta": eta,
                       "medianReps": median_reps, "bias": bias})
    elif estimator == "mc":
        p_hat = additive_mc(art.instance, 0, shots, seed)
        raw = np.full(majority_k, first_accept_raw(p_hat, n))
        # no one-sidedness: report the exact-estimate bound for reference
        b = bounds_first(delta, n, max(r, n)) if r > n - 1 else None
        params.update({"shots": shots, "estimate": p_hat})
    else:
        raise ValueError(f"unknown estimator {estimator!r}")

    us = _seeding.block_uniforms(seed, "e2e-votes", 0, majority_k)[:, 0]
    votes0 = int(np.count_nonzero(us < np.clip(raw, 0.0, 1.0)))
    decision = 0 if 2 * votes0 > majority_k else 1
    bound, kind = ((b["yes_lower"], "lower") if side == "yes"
                   else (b["no_upper"], "upper")) if b else (float("nan"), "lower")
    report = DeciderReport(
        trials=majority_k,
        empirical_accept_rate=votes0 / majority_k,
        analytic_bound=bound,
        bound_kind=kind,
        case_label=f"{'First' if estimator != 'mock-fpras' else 'Second'}-{side}",
        parameters=params,
        clamp_activations=int(np.count_nonzero((raw < 0.0) | (raw > 1.0))),
    )
    return EndToEndResult(decision, report)
