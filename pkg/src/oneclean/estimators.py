"""Classical estimators with explicitly modeled error.

Three error models feed the deciders:

* one-sided r-bit truncation of the exact probability (never overshoots),
* a relative-error estimator that succeeds with probability 1 - eta and
  otherwise returns a far out-of-band value,
* plain Monte Carlo frequency, whose additive error is the reference
  point showing why relative error at bias scale 2^-n is a strong ask.

All randomness is drawn from counter blocks, so draw i is the same value
whether requested alone or inside a batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _seeding
from .circuit import Dqc1Instance
from .simulate import DEFAULT_ENUMERATION_CAP, dqc1_exact, dqc1_sample

# factor pushing failure draws far outside the band, so in-band checks
# are unambiguous even with float rounding at the band edge
ADVERSARIAL_FACTOR = 10.0
_BAND_SLACK = 1.0 + 1e-9


@dataclass(frozen=True)
class OneSidedEstimate:
    """Truncated probability with 0 <= true - value <= 2**-r."""

    value: float
    r: int


def one_sided_round(p: float, r: int) -> float:
    """floor(p * 2^r) / 2^r; exact in double precision for r <= 52."""
    if r < 1:
        raise ValueError("r must be >= 1")
    scale = 2.0 ** r
    return math.floor(p * scale) / scale


def exact_rounded(instance: Dqc1Instance, a, r: int, *,
                  cap: int = DEFAULT_ENUMERATION_CAP) -> OneSidedEstimate:
    p = dqc1_exact(instance, cap=cap).prob(a)
    return OneSidedEstimate(one_sided_round(p, r), r)


def exact_bias(instance: Dqc1Instance, a=0, *,
               cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Q(a) = P(a) - 1/2 from the enumeration backend."""
    return dqc1_exact(instance, cap=cap).prob(a) - 0.5


@dataclass(frozen=True)
class FprasEstimator:
    """Noisy source around a known true value.

    Each draw lands within relative error epsilon of `true_value` with
    probability 1 - eta, and otherwise at relative offset
    ADVERSARIAL_FACTOR * epsilon with a random sign.  The band is
    epsilon * |true_value|, which keeps it meaningful for negative
    values.
    """

    true_value: float
    epsilon: float
    eta: float
    seed: int
    label: str = "fpras"

    def __post_init__(self):
        if not 0 < self.epsilon < 0.5:
            raise ValueError("epsilon must be in (0, 1/2)")
        if not 0 <= self.eta < 0.5:
            raise ValueError("eta must be in [0, 1/2)")

    def draw_batch(self, start: int, count: int) -> np.ndarray:
        blocks = _seeding.block_uniforms(self.seed, self.label, start, count)
        in_band = (2.0 * blocks[:, 1] - 1.0) * self.epsilon
        sign = np.where(blocks[:, 2] < 0.5, 1.0, -1.0)
        offset = np.where(blocks[:, 0] >= self.eta, in_band,
                          sign * ADVERSARIAL_FACTOR * self.epsilon)
        return self.true_value * (1.0 + offset)

    def draw(self, index: int = 0) -> float:
        return float(self.draw_batch(index, 1)[0])

    def band(self) -> float:
        return self.epsilon * abs(self.true_value)

    def in_band(self, value) -> np.ndarray | bool:
        return np.abs(value - self.true_value) <= self.band() * _BAND_SLACK


def mock_fpras(instance: Dqc1Instance, a, epsilon: float, eta: float,
               seed: int, *, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """One draw of a relative-error estimate of Q(a) for this instance."""
    est = FprasEstimator(exact_bias(instance, a, cap=cap), epsilon, eta, seed)
    return est.draw(0)


def fpras_for_instance(instance: Dqc1Instance, a, epsilon: float, eta: float,
                       seed: int, *,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> FprasEstimator:
    return FprasEstimator(exact_bias(instance, a, cap=cap), epsilon, eta, seed)


def additive_mc(instance: Dqc1Instance, a, shots: int, seed: int) -> float:
    """Monte Carlo frequency estimate of P(a); additive error O(1/sqrt(shots))."""
    return dqc1_sample(instance, shots, seed).prob(a)
