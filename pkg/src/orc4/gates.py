"""The NOT/CNOT/TOF/TOF4 gate library and circuits over it.

Every gate flips its target wire when all of its control wires are 1.  The
text form lists the controls first and the target last, e.g. ``TOF(c,d,b)``
flips ``b`` when ``c`` and ``d`` are set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .canonical import WALK_PERMS, WirePerm
from .perm import IDENTITY, compose

WIRES = "abcd"
NAMES = {0: "NOT", 1: "CNOT", 2: "TOF", 3: "TOF4"}
ARITY = {name: n + 1 for n, name in NAMES.items()}

FIRST_FLAG = 0x40
NO_GATE = 0xFF


class CircuitSyntaxError(ValueError):
    """Malformed circuit text; ``pos`` is the offending character offset."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class GateError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Gate:
    target: int
    controls: int = 0  # bit mask over wires

    def __post_init__(self):
        if not 0 <= self.target < 4:
            raise GateError(f"target wire {self.target} out of range")
        if not 0 <= self.controls < 16:
            raise GateError(f"control mask {self.controls} out of range")
        if self.controls >> self.target & 1:
            raise GateError("target wire is also a control")

    @property
    def control_wires(self) -> tuple[int, ...]:
        return tuple(w for w in range(4) if self.controls >> w & 1)

    @property
    def name(self) -> str:
        return NAMES[len(self.control_wires)]

    @cached_property
    def perm(self) -> int:
        return gate_to_perm(self)

    def to_byte(self, first: bool = False) -> int:
        return self.controls | (self.target << 4) | (FIRST_FLAG if first else 0)

    @classmethod
    def from_byte(cls, byte: int) -> "Gate":
        return cls(target=(byte >> 4) & 3, controls=byte & 15)

    def __str__(self) -> str:
        wires = [WIRES[w] for w in self.control_wires] + [WIRES[self.target]]
        return f"{self.name}({','.join(wires)})"


def gate_to_perm(g: Gate) -> int:
    word = 0
    for x in range(16):
        y = x ^ (1 << g.target) if x & g.controls == g.controls else x
        word |= y << (4 * x)
    return word


def enumerate_gates() -> list[Gate]:
    """All 32 gates, by control count, then target, then control mask."""
    gates = []
    for n in range(4):
        for target in range(4):
            for mask in range(16):
                if not mask >> target & 1 and bin(mask).count("1") == n:
                    gates.append(Gate(target, mask))
    return gates


GATES: list[Gate] = enumerate_gates()
GATE_INDEX = {g: i for i, g in enumerate(GATES)}
GATE_PERMS = np.array([g.perm for g in GATES], dtype=np.uint64)


def conjugate_gate(g: Gate, sigma: WirePerm) -> Gate:
    """Relabel wire ``w`` as ``sigma[w]``."""
    mask = 0
    for w in g.control_wires:
        mask |= 1 << sigma[w]
    return Gate(sigma[g.target], mask)


def _conj_byte_table() -> np.ndarray:
    """``table[i, j]`` is the byte of gate ``i`` relabeled by walk step ``j``."""
    table = np.empty((32, 24), dtype=np.uint8)
    for i, g in enumerate(GATES):
        for j, sigma in enumerate(WALK_PERMS):
            table[i, j] = conjugate_gate(g, sigma).to_byte()
    return table


GATE_CONJ_BYTES = _conj_byte_table()


@dataclass(frozen=True)
class Circuit:
    """Gate sequence; the leftmost gate acts on the input first."""

    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(self.gates + tuple(other))

    @property
    def size(self) -> int:
        return len(self.gates)

    def reversed(self) -> "Circuit":
        """The inverse circuit (every gate is self-inverse)."""
        return Circuit(self.gates[::-1])

    def relabeled(self, sigma: WirePerm) -> "Circuit":
        return Circuit(conjugate_gate(g, sigma) for g in self.gates)

    def evaluate(self) -> int:
        return eval_circuit(self)

    def __str__(self) -> str:
        return format_circuit(self)


def eval_circuit(c: Circuit | Iterable[Gate]) -> int:
    r = IDENTITY
    for g in c:
        r = compose(r, g.perm)
    return r


_TERM = re.compile(r"\s*([A-Za-z0-9]+)\s*\(([^)]*)\)")


def parse_gate(text: str) -> Gate:
    c = parse_circuit(text)
    if len(c) != 1:
        raise CircuitSyntaxError("expected exactly one gate", 0)
    return c.gates[0]


def parse_circuit(text: str) -> Circuit:
    gates = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TERM.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise CircuitSyntaxError("expected NAME(w,...)", start)
        name = m.group(1).upper()
        if name not in ARITY:
            raise CircuitSyntaxError(f"unknown gate {m.group(1)!r}", m.start(1))
        args = [s.strip() for s in m.group(2).split(",")]
        if len(args) != ARITY[name]:
            raise CircuitSyntaxError(
                f"{name} takes {ARITY[name]} wires, got {len(args)}", m.start(2)
            )
        wires = []
        for s in args:
            if len(s) != 1 or s.lower() not in WIRES:
                raise CircuitSyntaxError(f"bad wire {s!r}", m.start(2))
            wires.append(WIRES.index(s.lower()))
        if len(set(wires)) != len(wires):
            raise GateError(f"repeated wire in {m.group(0).strip()}")
        mask = 0
        for w in wires[:-1]:
            mask |= 1 << w
        gates.append(Gate(wires[-1], mask))
        pos = m.end()
    return Circuit(gates)


def format_circuit(c: Circuit | Sequence[Gate]) -> str:
    return " ".join(str(g) for g in c)
