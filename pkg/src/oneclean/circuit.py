"""Circuit representation: gates, circuits, model instances, and the text format.

Wire 0 is the clean qubit of a DQC1 instance and the leftmost bit of every
bitstring in this package.  All values are frozen after construction and can
be shared freely across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class CircuitError(ValueError):
    """Invalid gate, circuit, or instance."""


class CircuitParseError(CircuitError):
    """Syntax or validation error in circuit text, with source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class GateKind(enum.Enum):
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    CX = "cx"
    CZ = "cz"
    SWAP = "swap"
    CCX = "ccx"
    MCX = "mcx"
    MCX0 = "mcx0"


_SINGLE_KINDS = frozenset(
    {GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S, GateKind.SDG,
     GateKind.T, GateKind.TDG}
)
# (exact control count or None for >=1, target count)
_ARITY = {
    GateKind.CX: (1, 1),
    GateKind.CZ: (1, 1),
    GateKind.SWAP: (0, 2),
    GateKind.CCX: (2, 1),
    GateKind.MCX: (None, 1),
    GateKind.MCX0: (None, 1),
}
_ADJOINT = {GateKind.S: GateKind.SDG, GateKind.SDG: GateKind.S,
            GateKind.T: GateKind.TDG, GateKind.TDG: GateKind.T}


@dataclass(frozen=True)
class Gate:
    """A named elementary operation on explicit control/target wires."""

    kind: GateKind
    controls: tuple[int, ...] = ()
    targets: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(self.controls))
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.kind in _SINGLE_KINDS:
            expected = (0, 1)
        else:
            expected = _ARITY[self.kind]
        n_ctrl, n_tgt = expected
        if n_ctrl is None:
            if len(self.controls) < 1:
                raise CircuitError(f"{self.kind.value} needs at least one control")
        elif len(self.controls) != n_ctrl:
            raise CircuitError(
                f"{self.kind.value} takes {n_ctrl} control(s), got {len(self.controls)}")
        if len(self.targets) != n_tgt:
            raise CircuitError(
                f"{self.kind.value} takes {n_tgt} target(s), got {len(self.targets)}")
        wires = self.controls + self.targets
        if any(w < 0 for w in wires):
            raise CircuitError(f"negative wire index in {self.kind.value}")
        if len(set(wires)) != len(wires):
            raise CircuitError(f"duplicate wire within {self.kind.value} gate")

    @property
    def wires(self) -> tuple[int, ...]:
        return self.controls + self.targets

    def adjoint(self) -> "Gate":
        kind = _ADJOINT.get(self.kind, self.kind)
        return Gate(kind, self.controls, self.targets)

    # mnemonic constructors, mirroring the text format
    @classmethod
    def h(cls, q: int) -> "Gate":
        return cls(GateKind.H, (), (q,))

    @classmethod
    def x(cls, q: int) -> "Gate":
        return cls(GateKind.X, (), (q,))

    @classmethod
    def y(cls, q: int) -> "Gate":
        return cls(GateKind.Y, (), (q,))

    @classmethod
    def z(cls, q: int) -> "Gate":
        return cls(GateKind.Z, (), (q,))

    @classmethod
    def s(cls, q: int) -> "Gate":
        return cls(GateKind.S, (), (q,))

    @classmethod
    def sdg(cls, q: int) -> "Gate":
        return cls(GateKind.SDG, (), (q,))

    @classmethod
    def t(cls, q: int) -> "Gate":
        return cls(GateKind.T, (), (q,))

    @classmethod
    def tdg(cls, q: int) -> "Gate":
        return cls(GateKind.TDG, (), (q,))

    @classmethod
    def cx(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CX, (control,), (target,))

    @classmethod
    def cz(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CZ, (control,), (target,))

    @classmethod
    def swap(cls, a: int, b: int) -> "Gate":
        return cls(GateKind.SWAP, (), (a, b))

    @classmethod
    def ccx(cls, c1: int, c2: int, target: int) -> "Gate":
        return cls(GateKind.CCX, (c1, c2), (target,))

    @classmethod
    def mcx(cls, controls, target: int) -> "Gate":
        return cls(GateKind.MCX, tuple(controls), (target,))

    @classmethod
    def mcx0(cls, controls, target: int) -> "Gate":
        return cls(GateKind.MCX0, tuple(controls), (target,))


def build_zero_controlled_toffoli(n_controls: int, target: int, controls) -> Gate:
    """MCX0 gate: flips `target` exactly when every control wire reads 0."""
    controls = tuple(controls)
    if n_controls < 1:
        raise CircuitError("zero-controlled Toffoli needs at least one control")
    if len(controls) != n_controls:
        raise CircuitError(
            f"expected {n_controls} controls, got {len(controls)}")
    return Gate.mcx0(controls, target)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over a declared number of wires."""

    wires: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.wires < 1:
            raise CircuitError("circuit needs at least one wire")
        for g in self.gates:
            bad = [w for w in g.wires if w >= self.wires]
            if bad:
                raise CircuitError(
                    f"wire {bad[0]} out of range for {self.wires}-wire circuit")

    def __len__(self) -> int:
        return len(self.gates)


def invert(circuit: Circuit) -> Circuit:
    """Adjoint circuit: gate order reversed, each gate replaced by its adjoint."""
    return Circuit(circuit.wires, tuple(g.adjoint() for g in reversed(circuit.gates)))


@dataclass(frozen=True)
class Dqc1Instance:
    """A circuit on 1 + n wires: wire 0 clean, wires 1..n maximally mixed.

    The computational-basis measurement covers wires 0..measured_width-1;
    measured_width == 1 is the original one-clean-qubit model.
    """

    circuit: Circuit
    mixed_width: int
    measured_width: int = 1

    def __post_init__(self):
        if self.mixed_width < 1:
            raise CircuitError("mixed register needs at least one wire")
        if self.circuit.wires != 1 + self.mixed_width:
            raise CircuitError(
                f"circuit has {self.circuit.wires} wires, expected "
                f"{1 + self.mixed_width} (1 clean + {self.mixed_width} mixed)")
        if not 1 <= self.measured_width <= self.circuit.wires:
            raise CircuitError(
                f"measured width {self.measured_width} not in 1..{self.circuit.wires}")


@dataclass(frozen=True)
class BqpCircuit:
    """A promise circuit on the all-zeros input with a single decision wire.

    Acceptance means the output wire reads 0; `delta` is the two-sided
    promise tolerance (accept probability >= 1-delta or <= delta).
    """

    circuit: Circuit
    delta: float = 0.125
    output_wire: int = 0

    def __post_init__(self):
        if not 0 <= self.output_wire < self.circuit.wires:
            raise CircuitError(
                f"output wire {self.output_wire} out of range")
        if not 0.0 < self.delta < 0.5:
            raise CircuitError("delta must lie strictly between 0 and 1/2")


# ---------------------------------------------------------------------------
# Text format
#
#   # comment to end of line
#   wires <int>           required first statement
#   mixed <int>           optional, declares a DQC1 instance
#   measure <int>         optional, measured-prefix width (default 1)
#   <mnemonic> <wire>...  one gate per line; for mcx/mcx0 the last wire
#                         is the target, all preceding ones are controls

_GATE_MNEMONICS = {k.value: k for k in GateKind}


def _tokenize(text: str):
    """Yield (line_no, [(column, token), ...]) for non-empty lines."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = []
        col = 0
        for tok in line.split():
            col = line.index(tok, col)
            tokens.append((col + 1, tok))
            col += len(tok)
        if tokens:
            yield line_no, tokens


def _parse_int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok, 10)
    except ValueError:
        raise CircuitParseError(f"expected integer, got {tok!r}", line, col) from None


def _parse_document(text: str):
    wires = None
    mixed = None
    measure = None
    gates: list[Gate] = []
    for line_no, tokens in _tokenize(text):
        col0, head = tokens[0]
        word = head.lower()
        args = tokens[1:]
        if word in ("wires", "mixed", "measure"):
            if word != "wires" and wires is None:
                raise CircuitParseError("'wires' header must come first", line_no, col0)
            if word == "wires" and wires is not None:
                raise CircuitParseError("duplicate 'wires' header", line_no, col0)
            if gates and word != "wires":
                raise CircuitParseError(
                    f"'{word}' header must precede gate lines", line_no, col0)
            if len(args) != 1:
                raise CircuitParseError(
                    f"'{word}' takes one integer argument", line_no, col0)
            value = _parse_int(args[0][1], line_no, args[0][0])
            if value < 1:
                raise CircuitParseError(f"'{word}' must be positive", line_no, args[0][0])
            if word == "wires":
                wires = value
            elif word == "mixed":
                mixed = value
            else:
                measure = value
            continue
        if wires is None:
            raise CircuitParseError("first statement must be 'wires <int>'",
                                    line_no, col0)
        kind = _GATE_MNEMONICS.get(word)
        if kind is None:
            raise CircuitParseError(f"unknown gate {head!r}", line_no, col0)
        operands = [_parse_int(tok, line_no, col) for col, tok in args]
        for (col, _), w in zip(args, operands):
            if not 0 <= w < wires:
                raise CircuitParseError(
                    f"wire {w} out of range for {wires}-wire circuit", line_no, col)
        try:
            gates.append(_gate_from_operands(kind, operands))
        except CircuitError as exc:
            raise CircuitParseError(str(exc), line_no, col0) from None
    if wires is None:
        raise CircuitParseError("missing 'wires' header", 1, 1)
    return Circuit(wires, tuple(gates)), mixed, measure


def _gate_from_operands(kind: GateKind, operands: list[int]) -> Gate:
    if kind in _SINGLE_KINDS:
        n_ctrl = 0
    elif kind in (GateKind.MCX, GateKind.MCX0):
        n_ctrl = len(operands) - 1
        if n_ctrl < 1:
            raise CircuitError(f"{kind.value} needs at least one control and a target")
    else:
        n_ctrl = _ARITY[kind][0]
    n_tgt = 2 if kind is GateKind.SWAP else 1
    if len(operands) != n_ctrl + n_tgt:
        raise CircuitError(
            f"{kind.value} takes {n_ctrl + n_tgt} wire(s), got {len(operands)}")
    return Gate(kind, tuple(operands[:n_ctrl]), tuple(operands[n_ctrl:]))


def parse_circuit(text: str) -> Circuit:
    """Parse circuit text into a validated Circuit.

    Raises CircuitParseError with 1-based line/column on any syntax or
    validation problem.
    """
    circuit, _, _ = _parse_document(text)
    return circuit


def parse_instance(text: str) -> Dqc1Instance:
    """Parse circuit text with optional mixed/measure headers into a Dqc1Instance.

    A missing `mixed` header defaults to wires-1 (everything but the clean
    qubit); a missing `measure` header defaults to 1.
    """
    circuit, mixed, measure = _parse_document(text)
    if mixed is None:
        mixed = circuit.wires - 1
    if measure is None:
        measure = 1
    try:
        return Dqc1Instance(circuit, mixed, measure)
    except CircuitError as exc:
        raise CircuitParseError(str(exc), 1, 1) from None


def format_gate(gate: Gate) -> str:
    return " ".join([gate.kind.value, *map(str, gate.wires)])


def format_circuit(circuit: Circuit) -> str:
    lines = [f"wires {circuit.wires}"]
    lines.extend(format_gate(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def format_instance(instance: Dqc1Instance) -> str:
    lines = [
        f"wires {instance.circuit.wires}",
        f"mixed {instance.mixed_width}",
        f"measure {instance.measured_width}",
    ]
    lines.extend(format_gate(g) for g in instance.circuit.gates)
    return "\n".join(lines) + "\n"
