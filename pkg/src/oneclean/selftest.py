"""Reduced-scale run of the full acceptance checklist.

Every operation is resolved through its module namespace at call time,
so a deliberately injected fault (say, flipping the truncation direction
in the estimator module) is caught here instead of being masked by a
stale reference bound at import.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _seeding, decider, density, estimators, reduction, simulate, workloads
from .circuit import BqpCircuit, Dqc1Instance


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _random_sources(seed, count, label):
    rng = _seeding.stream(seed, label)
    for _ in range(count):
        n = int(rng.integers(1, 6))
        kinds = ("h", "t", "cx") if n >= 2 else ("h", "t")
        circ = workloads.random_circuit(rng, n, int(rng.integers(0, 25)), kinds)
        yield BqpCircuit(circ, 0.125, 0)


def _check_identity(seed, scale):
    count = max(8, 25 * scale // 100)
    worst = 0.0
    for bqp in _random_sources(seed, count, "selftest-identity"):
        worst = max(worst, reduction.verify_identity(bqp)["residual"])
    return worst <= 1e-10, f"max residual {worst:.3e} over {count} circuits"


def _random_instances(seed, count):
    rng = _seeding.stream(seed, "selftest-instances")
    for _ in range(count):
        wires = int(rng.integers(2, 7))
        m = int(rng.integers(1, min(3, wires) + 1))
        circ = workloads.random_circuit(rng, wires, int(rng.integers(0, 20)))
        yield Dqc1Instance(circ, wires - 1, m)


def _check_backends(seed, scale):
    count = max(5, 12 * scale // 100)
    worst = 0.0
    for inst in _random_instances(seed, count):
        a = simulate.dqc1_exact(inst).probabilities
        b = density.dqc1_density(inst).probabilities
        worst = max(worst, float(np.abs(a - b).max()))
    return worst <= 1e-10, f"max backend deviation {worst:.3e} over {count} instances"


def _check_one_sided(seed, scale):
    count = max(5, 12 * scale // 100)
    for inst in _random_instances(seed + 1, count):
        p = simulate.dqc1_exact(inst).prob(0)
        for r in (4, 10, 20):
            est = estimators.exact_rounded(inst, 0, r)
            gap = p - est.value
            if not 0.0 <= gap <= 2.0 ** -r:
                return False, (f"gap {gap:.3e} outside [0, 2^-{r}] "
                               f"(P={p!r}, P'={est.value!r})")
    return True, f"0 <= P-P' <= 2^-r exact for {count} instances, r in (4,10,20)"


def _check_first_decider(seed, scale):
    trials = max(2000, 100_000 * scale // 100)
    msgs = []
    ok = True
    for name, bqp, s in (("yes", workloads.yes_promise(hard=True), seed),
                         ("no", workloads.no_promise(hard=True), seed + 1)):
        rep = decider.run_first_trials(reduction.reduce_bqp_to_dqc1(bqp),
                                       trials=trials, seed=s, r=11)
        sig = decider.binomial_sigma(min(max(rep.analytic_bound, 1e-3), 1 - 1e-3),
                                     trials)
        ok &= rep.bound_holds(3 * sig)
        msgs.append(f"{name} {rep.empirical_accept_rate:.4f} vs "
                    f"{rep.bound_kind} {rep.analytic_bound:.4f}")
    return ok, "; ".join(msgs) + f" ({trials} trials)"


def _check_second_decider(seed, scale):
    trials = max(1500, 100_000 * scale // 100)
    ok = True
    msgs = []
    for name, bqp, s in (("yes", workloads.yes_promise(hard=True), seed),
                         ("no", workloads.no_promise(hard=True), seed + 1)):
        res = decider.run_second_trials(reduction.reduce_bqp_to_dqc1(bqp),
                                        trials=trials, seed=s)
        for c, rep in sorted(res.case_reports.items()):
            if rep.trials == 0:
                continue
            sig = decider.binomial_sigma(
                min(max(rep.analytic_bound, 1e-3), 1 - 1e-3), rep.trials)
            ok &= rep.bound_holds(3 * sig)
        sigma = decider.binomial_sigma(0.5, trials)
        if name == "yes":
            bound = 0.99 * decider.bounds_second(0.125, 0.25)["case2"]
            ok &= res.overall_accept_rate >= bound - 3 * sigma
        else:
            bound = (decider.bounds_second(0.125, 0.25)["case4"]
                     + res.median_failure_bound)
            ok &= res.overall_accept_rate <= bound + 3 * sigma
        msgs.append(f"{name} overall {res.overall_accept_rate:.4f}")
    return ok, "; ".join(msgs) + f" ({trials} trials, all case bounds)"


def _check_majority(seed, scale):
    runs = max(300, 10_000 * scale // 100)
    k = 101
    us = _seeding.stream(seed, "selftest-majority").random((runs, k))
    wins = (us < 2.0 / 3.0).sum(axis=1)
    err = float(np.mean(2 * wins < k))
    scalar_rng = _seeding.stream(seed, "selftest-majority-one")
    one = decider.amplify_majority(
        lambda: 0 if scalar_rng.random() < 2.0 / 3.0 else 1, k)
    bound = decider.majority_error_bound(2.0 / 3.0, k)
    return err <= 0.01 and one in (0, 1), (
        f"error {err:.4f} <= 0.01 (Hoeffding {bound:.4f}) over {runs} runs")


def _check_sampling(seed, scale):
    shots = max(20_000, 1_000_000 * scale // 100)
    art = reduction.reduce_bqp_to_dqc1(workloads.yes_promise(hard=True))
    p = simulate.dqc1_exact(art.instance).prob(0)
    hat = simulate.dqc1_sample(art.instance, shots, seed).prob(0)
    tol = 4.0 * decider.binomial_sigma(p, shots)
    return abs(hat - p) <= tol, (
        f"|{hat:.5f} - {p:.5f}| = {abs(hat - p):.2e} <= {tol:.2e} ({shots} shots)")


def _check_degeneracy(seed, scale):
    art = reduction.reduce_bqp_to_dqc1(workloads.yes_promise(hard=True))
    a = simulate.dqc1_exact(art.instance, mixed_clean=True).prob(0)
    b = density.dqc1_density(art.instance, mixed_clean=True).prob(0)
    dev = max(abs(a - 0.5), abs(b - 0.5))
    return dev <= 1e-12, f"fully mixed input: |P(0) - 1/2| = {dev:.2e} on both backends"


_CHECKS = (
    ("identity", _check_identity),
    ("backends", _check_backends),
    ("one-sided", _check_one_sided),
    ("first-decider", _check_first_decider),
    ("second-decider", _check_second_decider),
    ("majority", _check_majority),
    ("sampling", _check_sampling),
    ("degeneracy", _check_degeneracy),
)


def run_selftest(*, quick: bool = False, seed: int = 0) -> list[CheckResult]:
    scale = 10 if quick else 100
    results = []
    for name, fn in _CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = fn(seed, scale)
        except Exception as exc:  # a crash is a failed check, not a crash of ours
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name, ok, detail, time.perf_counter() - t0))
    return results
