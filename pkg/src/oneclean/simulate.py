"""Exact and sampled evaluation of DQC1_m output distributions.

The enumeration backend sweeps every basis state of the mixed register,
evolves a batch of statevectors through the circuit, and folds the measured
prefix's probability mass with compensated summation in a fixed (ascending)
order, so results do not depend on how the sweep is chunked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _seeding
from .circuit import BqpCircuit, Circuit, Dqc1Instance, GateKind
from .kernels import ops as _default_ops

DEFAULT_ENUMERATION_CAP = 20   # mixed-register width for dqc1_exact
DEFAULT_STATEVECTOR_CAP = 24   # total wires for any dense statevector
_CHUNK_AMPS = 1 << 21          # target amplitudes per evaluation chunk
_SAMPLE_CHUNK = 1 << 16        # shots per sampling chunk; fixed for determinism


class CapExceededError(RuntimeError):
    """A feasibility cap would be exceeded by this operation."""


def outcome_index(outcome, m: int) -> int:
    """Normalize an outcome given as int or bitstring (wire 0 leftmost)."""
    if isinstance(outcome, str):
        if len(outcome) != m or any(c not in "01" for c in outcome):
            raise ValueError(f"outcome {outcome!r} is not a {m}-bit string")
        idx = int(outcome, 2) if outcome else 0
    else:
        idx = int(outcome)
    if not 0 <= idx < (1 << m):
        raise ValueError(f"outcome {outcome!r} out of range for {m} measured wires")
    return idx


def outcome_label(index: int, m: int) -> str:
    return format(index, f"0{m}b")


@dataclass(frozen=True)
class OutputDistribution:
    """Distribution over the measured prefix; exact or empirical.

    `probabilities[i]` is the probability of the outcome whose bits (wire 0
    leftmost) read as the integer i.  Empirical distributions also carry the
    raw counts so probabilities stay exact rationals count/shots.
    """

    measured_width: int
    probabilities: np.ndarray
    kind: str
    shots: int | None = None
    seed: int | None = None
    counts: np.ndarray | None = None

    def prob(self, outcome) -> float:
        return float(self.probabilities[outcome_index(outcome, self.measured_width)])

    def as_dict(self) -> dict[str, float]:
        m = self.measured_width
        return {outcome_label(i, m): float(p) for i, p in enumerate(self.probabilities)}

    def to_json_dict(self) -> dict:
        record = {"m": self.measured_width, "kind": self.kind, "p": self.as_dict()}
        if self.kind == "empirical":
            record["shots"] = self.shots
            record["seed"] = self.seed
        return record


# ---------------------------------------------------------------------------
# Gate lowering: each gate becomes one kernel call with precomputed masks.
# Wire q sits at bit position (wires-1-q).

_SQ2 = 1.0 / math.sqrt(2.0)
_MATRICES = {
    GateKind.H: (_SQ2, _SQ2, _SQ2, -_SQ2),
    GateKind.Y: (0.0, -1.0j, 1.0j, 0.0),
}
_PHASES = {
    GateKind.Z: -1.0,
    GateKind.S: 1.0j,
    GateKind.SDG: -1.0j,
    GateKind.T: complex(_SQ2, _SQ2),
    GateKind.TDG: complex(_SQ2, -_SQ2),
}


def _lower(circuit: Circuit) -> tuple:
    wires = circuit.wires
    lowered = []
    for g in circuit.gates:
        pos = [wires - 1 - q for q in g.wires]
        kind = g.kind
        if kind in _MATRICES:
            lowered.append(("1q", pos[0], *_MATRICES[kind]))
        elif kind in _PHASES:
            bit = 1 << pos[0]
            lowered.append(("cphase", bit, bit, _PHASES[kind]))
        elif kind is GateKind.CZ:
            mask = (1 << pos[0]) | (1 << pos[1])
            lowered.append(("cphase", mask, mask, -1.0))
        elif kind is GateKind.SWAP:
            lowered.append(("swap", pos[0], pos[1]))
        else:  # X family: X, CX, CCX, MCX fire on all-ones, MCX0 on all-zeros
            cmask = 0
            for p in pos[:-1]:
                cmask |= 1 << p
            pattern = 0 if kind is GateKind.MCX0 else cmask
            lowered.append(("cx", cmask, pattern, pos[-1]))
    return tuple(lowered)


def _execute(lowered: tuple, amps: np.ndarray, impl) -> None:
    for op in lowered:
        tag = op[0]
        if tag == "1q":
            impl.apply_single(amps, op[1], op[2], op[3], op[4], op[5])
        elif tag == "cphase":
            impl.apply_controlled_phase(amps, op[1], op[2], op[3])
        elif tag == "cx":
            impl.apply_controlled_x(amps, op[1], op[2], op[3])
        else:
            impl.apply_swap(amps, op[1], op[2])


def _basis_index(basis_input, wires: int) -> int:
    if isinstance(basis_input, str):
        if len(basis_input) != wires or any(c not in "01" for c in basis_input):
            raise ValueError(f"basis input {basis_input!r} is not a {wires}-bit string")
        return int(basis_input, 2)
    idx = int(basis_input)
    if not 0 <= idx < (1 << wires):
        raise ValueError(f"basis index {basis_input} out of range for {wires} wires")
    return idx


def run_statevector(circuit: Circuit, basis_input=0, *,
                    cap: int = DEFAULT_STATEVECTOR_CAP, impl=None) -> np.ndarray:
    """Evolve one computational basis state through the circuit.

    `basis_input` is a bitstring (wire 0 leftmost) or a basis index; the
    returned array holds 2**wires amplitudes.
    """
    if circuit.wires > cap:
        raise CapExceededError(
            f"{circuit.wires} wires exceeds the statevector cap of {cap}")
    impl = impl or _default_ops
    idx = _basis_index(basis_input, circuit.wires)
    amps = np.zeros((1, 1 << circuit.wires), dtype=np.complex128)
    amps[0, idx] = 1.0
    _execute(_lower(circuit), amps, impl)
    return amps[0]


def _sweep_probs(circuit: Circuit, inputs: np.ndarray, nblocks: int, impl) -> np.ndarray:
    """Sum measured-prefix probability over the given basis inputs, in order."""
    dim = 1 << circuit.wires
    lowered = _lower(circuit)
    acc = np.zeros(nblocks)
    comp = np.zeros(nblocks)
    rows = max(1, _CHUNK_AMPS // dim)
    for start in range(0, len(inputs), rows):
        chunk = inputs[start:start + rows]
        amps = np.zeros((len(chunk), dim), dtype=np.complex128)
        amps[np.arange(len(chunk)), chunk] = 1.0
        _execute(lowered, amps, impl)
        impl.accumulate_block_probs(amps, nblocks, acc, comp)
    return acc


def dqc1_exact(instance: Dqc1Instance, *, cap: int = DEFAULT_ENUMERATION_CAP,
               mixed_clean: bool = False, impl=None) -> OutputDistribution:
    """Exact output distribution by enumerating the mixed register.

    With `mixed_clean` the clean qubit's pure |0> input is replaced by a
    maximally mixed one (the input becomes fully mixed, so every outcome
    probability collapses to 2**-m).
    """
    n = instance.mixed_width
    if n > cap:
        raise CapExceededError(f"mixed width {n} exceeds the enumeration cap of {cap}")
    impl = impl or _default_ops
    m = instance.measured_width
    # clean wire 0 is the index MSB: inputs [0, 2^n) have it 0
    count = 1 << (n + 1) if mixed_clean else 1 << n
    probs = _sweep_probs(instance.circuit, np.arange(count), 1 << m, impl)
    probs /= count
    return OutputDistribution(m, probs, "exact")


def bqp_accept_prob(bqp: BqpCircuit, *, cap: int = DEFAULT_STATEVECTOR_CAP,
                    impl=None) -> float:
    """Probability that the output wire reads 0 on the all-zeros input."""
    amps = run_statevector(bqp.circuit, 0, cap=cap, impl=impl)
    pos = bqp.circuit.wires - 1 - bqp.output_wire
    idx = np.arange(amps.size)
    mass = amps.real ** 2 + amps.imag ** 2
    return float(mass[(idx & (1 << pos)) == 0].sum())


def dqc1_sample(instance: Dqc1Instance, shots: int, seed: int,
                *, impl=None) -> OutputDistribution:
    """Empirical distribution from per-shot sampling.

    Each shot draws a mixed-register basis state uniformly, evolves the
    statevector, and samples the measured prefix.  Statevector runs are
    cached per basis state.  Shot i consumes counter block i of a stream
    keyed by the seed, so the counts are a pure function of
    (instance, shots, seed) no matter how shots are batched.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    impl = impl or _default_ops
    n = instance.mixed_width
    m = instance.measured_width
    nblocks = 1 << m
    counts = np.zeros(nblocks, dtype=np.int64)
    cumulative: dict[int, np.ndarray] = {}
    for start in range(0, shots, _SAMPLE_CHUNK):
        size = min(_SAMPLE_CHUNK, shots - start)
        blocks = _seeding.block_uniforms(seed, "dqc1-sample", start, size)
        # doubles are multiples of 2^-53, so this floor is exactly uniform
        xs = (blocks[:, 0] * (1 << n)).astype(np.int64)
        us = blocks[:, 1]
        for x in np.unique(xs):
            cum = cumulative.get(int(x))
            if cum is None:
                amps = run_statevector(instance.circuit, int(x), impl=impl)
                block = amps.size // nblocks
                mass = (amps.real ** 2 + amps.imag ** 2).reshape(nblocks, block)
                cum = np.cumsum(mass.sum(axis=1))
                cumulative[int(x)] = cum
            chosen = us[xs == x]
            outcomes = np.searchsorted(cum, chosen, side="right")
            np.minimum(outcomes, nblocks - 1, out=outcomes)
            counts += np.bincount(outcomes, minlength=nblocks)
    probs = counts / shots
    return OutputDistribution(m, probs, "empirical", shots=shots, seed=seed,
                              counts=counts)
