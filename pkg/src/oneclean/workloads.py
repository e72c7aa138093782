"""Stock promise circuits for demos, the self-test, and the test suite.

The "hard" variants keep q strictly inside (0, 1) so the decider really
flips coins: two wires are rotated to hold |1> with amplitude
sin^2(pi/8) each, and a Toffoli kicks the output wire when both fire.
That puts q at (5 + 2 sqrt 2)/8 ~ 0.9786 for the yes side and
(3 - 2 sqrt 2)/8 ~ 0.0214 for the no side, inside the delta = 1/8
promise with room for the analytic case bounds.
"""

from __future__ import annotations

import math

from .circuit import BqpCircuit, Circuit, Gate

HARD_NO_Q = (3.0 - 2.0 * math.sqrt(2.0)) / 8.0
HARD_YES_Q = 1.0 - HARD_NO_Q


def _kicker(n: int) -> list[Gate]:
    # each of wires 1, 2 reaches |1> with probability (2 - sqrt 2)/4
    gates = []
    for w in (1, 2):
        gates += [Gate.h(w), Gate.t(w), Gate.h(w)]
    gates.append(Gate.ccx(1, 2, 0))
    return gates


def yes_promise(n: int = 3, *, hard: bool = False,
                delta: float = 0.125) -> BqpCircuit:
    """Promise circuit with q >= 1 - delta (q = 1 unless `hard`)."""
    if hard:
        if n < 3:
            raise ValueError("hard variants need n >= 3")
        gates = _kicker(n)
    else:
        # touch only non-output wires; the output stays |0> exactly
        gates = [Gate.h(w) for w in range(1, n)]
    return BqpCircuit(Circuit(n, tuple(gates)), delta, 0)


def no_promise(n: int = 3, *, hard: bool = False,
               delta: float = 0.125) -> BqpCircuit:
    """Promise circuit with q <= delta (q = 0 unless `hard`)."""
    gates = [Gate.x(0)]
    if hard:
        if n < 3:
            raise ValueError("hard variants need n >= 3")
        gates += _kicker(n)
    else:
        gates += [Gate.h(w) for w in range(1, n)]
    return BqpCircuit(Circuit(n, tuple(gates)), delta, 0)


def gap_promise(n: int = 3, delta: float = 0.125) -> BqpCircuit:
    """Circuit violating the promise (q = 1/2)."""
    return BqpCircuit(Circuit(n, (Gate.h(0),)), delta, 0)


# ---------------------------------------------------------------------------
# random circuits for cross-backend and property checks

_SINGLE = ("h", "x", "y", "z", "s", "sdg", "t", "tdg")


def _random_gate(rng, wires: int, kind: str) -> Gate:
    if kind in _SINGLE:
        return getattr(Gate, kind)(int(rng.integers(wires)))
    if kind in ("cx", "cz", "swap"):
        a, b = (int(w) for w in rng.choice(wires, size=2, replace=False))
        return getattr(Gate, kind)(a, b)
    if kind == "ccx":
        c1, c2, t = (int(w) for w in rng.choice(wires, size=3, replace=False))
        return Gate.ccx(c1, c2, t)
    # mcx / mcx0 with 1..3 controls
    nc = int(rng.integers(1, min(3, wires - 1) + 1))
    picked = [int(w) for w in rng.choice(wires, size=nc + 1, replace=False)]
    return getattr(Gate, kind)(tuple(picked[:-1]), picked[-1])


def random_circuit(rng, wires: int, n_gates: int, kinds=None) -> Circuit:
    """Uniformly random gate list; kinds defaults to everything that fits
    on `wires` wires."""
    if kinds is None:
        kinds = _SINGLE + (("cx", "cz", "swap") if wires >= 2 else ())
        kinds += (("ccx",) if wires >= 3 else ())
        kinds += (("mcx", "mcx0") if wires >= 2 else ())
    kinds = tuple(kinds)
    gates = tuple(_random_gate(rng, wires, kinds[int(rng.integers(len(kinds)))])
                  for _ in range(n_gates))
    return Circuit(wires, gates)

