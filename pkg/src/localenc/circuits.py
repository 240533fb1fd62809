"""Gate circuits: gate matrices, the line-oriented text format, and generators
for the circuit families used in tests and the CLI (GHZ, graph states,
random Clifford sequences).

Text format, one gate per line, qubits 0-based, angles in radians::

    QUBITS 3        # optional; otherwise max index + 1
    H 0
    CNOT 0 1
    PHI 2 3.14159265359
    RX 1 1.0471975512
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

ONE_QUBIT = {"H", "S", "X", "Y", "Z", "PHI", "RX"}
TWO_QUBIT = {"CNOT", "CZ"}
PARAMETRIC = {"PHI", "RX"}
CLIFFORD_NAMES = {"H", "S", "X", "Y", "Z", "CNOT", "CZ"}

_SQRT_HALF = 1 / math.sqrt(2)
_FIXED = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    "S": np.array([[1, 0], [0, 1j]]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
}


def phase_gate(phi: float) -> np.ndarray:
    """Modified phase gate ``diag(1, i e^{-i phi})``; rotates a Bloch vector with
    azimuth ``phi`` onto the y-z plane."""
    return np.array([[1, 0], [0, 1j * np.exp(-1j * phi)]])


def x_rotation(theta: float) -> np.ndarray:
    """``exp(i theta X / 2)``: takes |0> to cos(theta/2)|0> + i sin(theta/2)|1>
    and commutes with X."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, 1j * s], [1j * s, c]])


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    param: float | None = None

    def __post_init__(self):
        if self.name not in ONE_QUBIT | TWO_QUBIT:
            raise CircuitError(f"unknown gate {self.name!r}")
        arity = 1 if self.name in ONE_QUBIT else 2
        if len(self.qubits) != arity:
            raise CircuitError(f"{self.name} takes {arity} qubit(s), got {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise CircuitError(f"{self.name} needs distinct qubits")
        if (self.name in PARAMETRIC) != (self.param is not None):
            raise CircuitError(f"bad parameter for {self.name}")
        if self.param is not None and not math.isfinite(self.param):
            raise CircuitError("angle must be finite")

    def matrix(self) -> np.ndarray:
        if self.name == "PHI":
            return phase_gate(self.param)
        if self.name == "RX":
            return x_rotation(self.param)
        return _FIXED[self.name]

    def to_line(self) -> str:
        parts = [self.name, *map(str, self.qubits)]
        if self.param is not None:
            parts.append(repr(self.param))
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> Gate:
        tok = line.split()
        name = tok[0].upper()
        try:
            if name in PARAMETRIC:
                if len(tok) != 3:
                    raise CircuitError(f"{name} expects: {name} qubit angle")
                return cls(name, (int(tok[1]),), float(tok[2]))
            return cls(name, tuple(int(t) for t in tok[1:]))
        except ValueError as exc:
            if isinstance(exc, CircuitError):
                raise
            raise CircuitError(f"cannot parse gate line {line!r}") from exc


@dataclass(frozen=True)
class GateCircuit:
    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise CircuitError("circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q < 0 or q >= self.n for q in g.qubits):
                raise CircuitError(f"gate {g.to_line()!r} out of range for {self.n} qubits")

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: GateCircuit) -> GateCircuit:
        if other.n != self.n:
            raise CircuitError("qubit count mismatch")
        return GateCircuit(self.n, self.gates + other.gates)

    def to_lines(self) -> list[str]:
        return [g.to_line() for g in self.gates]

    def to_text(self) -> str:
        return "\n".join([f"QUBITS {self.n}", *self.to_lines()]) + "\n"

    @classmethod
    def from_lines(cls, lines: Iterable[str], n: int | None = None) -> GateCircuit:
        gates = []
        for raw in lines:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            if tok[0].upper() == "QUBITS":
                n = int(tok[1])
                continue
            gates.append(Gate.from_line(line))
        if n is None:
            n = max((q for g in gates for q in g.qubits), default=0) + 1
        return cls(n, tuple(gates))

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> GateCircuit:
        return cls.from_lines(text.splitlines(), n)

    @classmethod
    def from_file(cls, path: str | Path) -> GateCircuit:
        return cls.from_text(Path(path).read_text())


def ghz_circuit(n: int) -> GateCircuit:
    gates = [Gate("H", (0,))] + [Gate("CNOT", (k, k + 1)) for k in range(n - 1)]
    return GateCircuit(n, tuple(gates))


def graph_state_circuit(n: int, edges: Sequence[tuple[int, int]]) -> GateCircuit:
    gates = [Gate("H", (k,)) for k in range(n)]
    gates += [Gate("CZ", (a, b)) for a, b in edges]
    return GateCircuit(n, tuple(gates))


def random_graph(n: int, rng: np.random.Generator, p: float = 0.5) -> list[tuple[int, int]]:
    return [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]


def random_clifford_circuit(n: int, depth: int, rng: np.random.Generator) -> GateCircuit:
    """Random gate sequence over {H, S, X, Y, Z, CNOT, CZ}; covers the group, not uniform."""
    singles = ["H", "S", "X", "Y", "Z"]
    gates = []
    for _ in range(depth):
        if n > 1 and rng.random() < 0.4:
            a, b = rng.choice(n, size=2, replace=False)
            gates.append(Gate(str(rng.choice(["CNOT", "CZ"])), (int(a), int(b))))
        else:
            gates.append(Gate(str(rng.choice(singles)), (int(rng.integers(n)),)))
    return GateCircuit(n, tuple(gates))
