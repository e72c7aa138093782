import numpy as np
import pytest

from oneclean.circuit import BqpCircuit, Circuit, Gate, GateKind
from oneclean.reduction import (REDUCTION_OVERHEAD_GATES, predicted_p0,
                                reduce_bqp_to_dqc1, verify_identity)
from oneclean.simulate import dqc1_exact, run_statevector
from oneclean.workloads import random_circuit


def test_predicted_p0_worked_values():
    assert predicted_p0(1.0, 3) == 0.625
    assert predicted_p0(0.0, 3) == 0.375
    assert predicted_p0(0.5, 3) == 0.5
    assert predicted_p0(1.0, 1) == 1.0
    assert predicted_p0(0.0, 1) == 0.0


def test_predicted_p0_monotone_and_bounded():
    for n in range(1, 8):
        vals = [predicted_p0(q, n) for q in np.linspace(0, 1, 11)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert all(0.0 <= v <= 1.0 for v in vals)


def test_predicted_p0_rejects_bad_inputs():
    with pytest.raises(ValueError):
        predicted_p0(1.5, 3)
    with pytest.raises(ValueError):
        predicted_p0(0.5, 0)


def test_reduction_structure():
    src = BqpCircuit(Circuit(3, (Gate.h(1), Gate.cx(1, 0))))
    art = reduce_bqp_to_dqc1(src)
    inst = art.instance
    assert inst.circuit.wires == 4
    assert inst.mixed_width == 3
    assert inst.measured_width == 1
    gates = inst.circuit.gates
    assert len(gates) == len(src.circuit.gates) + REDUCTION_OVERHEAD_GATES

    first = gates[0]
    assert first.kind is GateKind.MCX0
    assert first.controls == (1, 2, 3) and first.targets == (0,)
    assert gates[-2] == Gate.cx(1, 0)
    assert gates[-1] == Gate.x(0)
    # interior gates are the source shifted one wire down
    for shifted, orig in zip(gates[1:-2], src.circuit.gates):
        assert shifted.kind is orig.kind
        assert shifted.controls == tuple(c + 1 for c in orig.controls)
        assert shifted.targets == tuple(t + 1 for t in orig.targets)


def test_reduction_worked_cases():
    # q = 1 on two wires: P(0) = 1/2 + 1/4 = 3/4
    art = reduce_bqp_to_dqc1(BqpCircuit(Circuit(2, ())))
    assert abs(dqc1_exact(art.instance).prob(0) - 0.75) <= 1e-12
    # q = 0 on two wires
    art = reduce_bqp_to_dqc1(BqpCircuit(Circuit(2, (Gate.x(0),))))
    assert abs(dqc1_exact(art.instance).prob(0) - 0.25) <= 1e-12
    # q = 1/2 on one wire: P(0) = 1/2 + 1/2 - 1/2 = 1/2
    art = reduce_bqp_to_dqc1(BqpCircuit(Circuit(1, (Gate.h(0),))))
    assert abs(dqc1_exact(art.instance).prob(0) - 0.5) <= 1e-12
    # entangled source, q = 1/2
    bell = BqpCircuit(Circuit(2, (Gate.h(0), Gate.cx(0, 1))))
    rep = verify_identity(bell)
    assert abs(rep["q"] - 0.5) <= 1e-12 and rep["residual"] <= 1e-12


def test_identity_on_random_sources():
    rng = np.random.default_rng(31)
    for _ in range(25):
        n = int(rng.integers(1, 6))
        bqp = BqpCircuit(random_circuit(rng, n, int(rng.integers(0, 25))))
        rep = verify_identity(bqp)
        assert rep["residual"] <= 1e-10
        assert abs(rep["predicted_p0"] - predicted_p0(rep["q"], n)) == 0.0


def test_output_wire_normalization():
    rng = np.random.default_rng(32)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        ow = int(rng.integers(1, n))
        bqp = BqpCircuit(random_circuit(rng, n, 12), 0.125, ow)
        art = reduce_bqp_to_dqc1(bqp)
        assert art.source.output_wire == 0
        assert art.source.circuit.gates[-1] == Gate.swap(0, ow)
        assert verify_identity(bqp)["residual"] <= 1e-10


def test_affine_link_between_p0_and_q():
    rng = np.random.default_rng(33)
    for _ in range(10):
        n = int(rng.integers(1, 6))
        art = reduce_bqp_to_dqc1(BqpCircuit(random_circuit(rng, n, 15)))
        p0 = dqc1_exact(art.instance).prob(0)
        lhs = p0 - 0.5
        rhs = (2.0 * art.accept_prob - 1.0) / 2.0 ** n
        assert abs(lhs - rhs) <= 1e-12


def test_per_branch_acceptance():
    # Conditioned on mixed input x, the clean wire reads 0 with probability
    # q when x = 0 and 1 - f(x) otherwise, where f(x) is the source's own
    # accept probability on input x.  The f values over all x (q included)
    # sum to 2^(n-1), which is what makes the aggregate identity affine in q.
    rng = np.random.default_rng(34)
    for _ in range(6):
        n = int(rng.integers(1, 5))
        bqp = BqpCircuit(random_circuit(rng, n, 10))
        art = reduce_bqp_to_dqc1(bqp)
        circ = art.instance.circuit
        dim = 1 << n
        f_sum = art.accept_prob
        agg = 0.0
        for x in range(dim):
            amps = run_statevector(circ, x)  # clean wire starts at 0
            p_zero = float(np.sum(np.abs(amps[:dim]) ** 2))
            agg += p_zero
            if x == 0:
                assert abs(p_zero - art.accept_prob) <= 1e-10
            else:
                f_sum += 1.0 - p_zero
        assert abs(f_sum - 2.0 ** (n - 1)) <= 1e-9
        assert abs(agg / dim - art.predicted_p0) <= 1e-10
