"""Dense density-matrix evaluation of DQC1_m instances.

Deliberately independent of the statevector path: gates are expanded to
full 2^w x 2^w unitaries (Kronecker products for local gates, explicit
permutations for the X family) and the mixed input is evolved as a matrix.
Kept to small wire counts; this exists to cross-check the enumeration
backend, not to compete with it.
"""

from __future__ import annotations

import math

import numpy as np

from .circuit import Circuit, Dqc1Instance, Gate, GateKind
from .simulate import CapExceededError, OutputDistribution

DEFAULT_DENSITY_CAP = 8  # total wires

_SQ2 = 1.0 / math.sqrt(2.0)
_LOCAL = {
    GateKind.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=np.complex128),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    GateKind.Z: np.diag([1, -1]).astype(np.complex128),
    GateKind.S: np.diag([1, 1j]).astype(np.complex128),
    GateKind.SDG: np.diag([1, -1j]).astype(np.complex128),
    GateKind.T: np.diag([1, complex(_SQ2, _SQ2)]).astype(np.complex128),
    GateKind.TDG: np.diag([1, complex(_SQ2, -_SQ2)]).astype(np.complex128),
}


def gate_unitary(gate: Gate, wires: int) -> np.ndarray:
    """Full unitary for one gate on a `wires`-wide register (wire 0 is the
    most significant index bit)."""
    dim = 1 << wires
    kind = gate.kind
    if kind in _LOCAL:
        q = gate.targets[0]
        return np.kron(np.eye(1 << q),
                       np.kron(_LOCAL[kind], np.eye(1 << (wires - 1 - q))))
    idx = np.arange(dim)
    if kind is GateKind.CZ:
        a, b = (wires - 1 - q for q in gate.wires)
        both = (1 << a) | (1 << b)
        diag = np.where((idx & both) == both, -1.0, 1.0)
        return np.diag(diag).astype(np.complex128)
    if kind is GateKind.SWAP:
        a, b = (wires - 1 - q for q in gate.targets)
        bits_a = (idx >> a) & 1
        bits_b = (idx >> b) & 1
        dest = idx ^ ((bits_a ^ bits_b) * ((1 << a) | (1 << b)))
    else:  # X family: flip the target where every control matches
        cmask = 0
        for q in gate.controls:
            cmask |= 1 << (wires - 1 - q)
        pattern = 0 if kind is GateKind.MCX0 else cmask
        tbit = 1 << (wires - 1 - gate.targets[0])
        dest = np.where((idx & cmask) == pattern, idx ^ tbit, idx)
    u = np.zeros((dim, dim), dtype=np.complex128)
    u[dest, idx] = 1.0
    return u


def circuit_unitary(circuit: Circuit, *, cap: int = DEFAULT_DENSITY_CAP) -> np.ndarray:
    if circuit.wires > cap:
        raise CapExceededError(
            f"{circuit.wires} wires exceeds the density-matrix cap of {cap}")
    u = np.eye(1 << circuit.wires, dtype=np.complex128)
    for g in circuit.gates:
        u = gate_unitary(g, circuit.wires) @ u
    return u


def dqc1_density(instance: Dqc1Instance, *, cap: int = DEFAULT_DENSITY_CAP,
                 mixed_clean: bool = False) -> OutputDistribution:
    """Exact measured-prefix distribution via rho -> U rho U^dagger."""
    w = instance.circuit.wires
    u = circuit_unitary(instance.circuit, cap=cap)
    dim = 1 << w
    if mixed_clean:
        rho = np.eye(dim, dtype=np.complex128) / dim
    else:
        # |0><0| on the clean wire, identity / 2^n on the rest
        half = dim >> 1
        rho = np.zeros((dim, dim), dtype=np.complex128)
        rho[:half, :half] = np.eye(half) / half
    rho = u @ rho @ u.conj().T
    m = instance.measured_width
    block = dim >> m
    diagonal = np.real(np.diag(rho))
    probs = diagonal.reshape(1 << m, block).sum(axis=1)
    return OutputDistribution(m, probs, "exact")
