"""Compilation of a promise circuit into a one-clean-qubit instance.

The accept wire's statistics survive the move into the mixed register
because the clean qubit picks them up through three extra gates: a
zero-controlled multi-X that tags the all-zeros branch, a CX copying the
shifted output wire, and a final X.  Conditioning on the mixed register's
basis state x gives acceptance q on x = 0 and 1 - f(x) elsewhere, and
summing the trace of the projector over x yields

    P(a=0) = q/2^(n-1) + 1/2 - 1/2^n.

That identity, not any particular gate layout, is the contract checked
here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import BqpCircuit, Circuit, Dqc1Instance, Gate
from .simulate import (DEFAULT_ENUMERATION_CAP, DEFAULT_STATEVECTOR_CAP,
                       bqp_accept_prob, dqc1_exact)

REDUCTION_OVERHEAD_GATES = 3


def predicted_p0(q: float, n: int) -> float:
    """Clean-qubit zero probability of the compiled instance, given the
    source circuit's acceptance q on n wires."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"acceptance probability {q} outside [0, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    return q / 2.0 ** (n - 1) + 0.5 - 2.0 ** -n


@dataclass(frozen=True)
class ReductionArtifact:
    source: BqpCircuit
    instance: Dqc1Instance
    accept_prob: float
    predicted_p0: float


def _shift_onto_mixed(gate: Gate) -> Gate:
    return Gate(gate.kind,
                tuple(q + 1 for q in gate.controls),
                tuple(q + 1 for q in gate.targets))


def reduce_bqp_to_dqc1(bqp: BqpCircuit, *,
                       cap: int = DEFAULT_STATEVECTOR_CAP) -> ReductionArtifact:
    """Compile the source circuit into a 1+n wire instance with m=1.

    Exactly three gates are added around the source.  A source whose
    output wire is not 0 is first normalized by a trailing SWAP (which
    becomes part of the source for accounting purposes).
    """
    source_gates = list(bqp.circuit.gates)
    if bqp.output_wire != 0:
        source_gates.append(Gate.swap(0, bqp.output_wire))
    n = bqp.circuit.wires
    gates = [Gate.mcx0(tuple(range(1, n + 1)), 0)]
    gates.extend(_shift_onto_mixed(g) for g in source_gates)
    gates.append(Gate.cx(1, 0))
    gates.append(Gate.x(0))
    instance = Dqc1Instance(Circuit(n + 1, tuple(gates)), n, 1)
    normalized = BqpCircuit(Circuit(n, tuple(source_gates)), bqp.delta, 0)
    q = bqp_accept_prob(normalized, cap=cap)
    return ReductionArtifact(normalized, instance, q, predicted_p0(q, n))


def verify_identity(bqp: BqpCircuit, *,
                    cap: int = DEFAULT_ENUMERATION_CAP) -> dict:
    """Check the compiled instance against the closed-form prediction.

    Returns q, the enumerated P(a=0), the predicted value, and their
    absolute difference (zero up to float accumulation for any source).
    """
    art = reduce_bqp_to_dqc1(bqp)
    p0 = dqc1_exact(art.instance, cap=cap).prob(0)
    return {
        "q": art.accept_prob,
        "p0": p0,
        "predicted_p0": art.predicted_p0,
        "residual": abs(p0 - art.predicted_p0),
    }
