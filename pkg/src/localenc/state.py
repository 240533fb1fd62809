"""Dense statevector simulation at desk scale.

Basis index ``b`` has qubit 0 as its most significant bit, the same layout
as the Pauli masks in :mod:`localenc.pauli`, so a Pauli string acts on an
amplitude array by an index XOR and a parity sign.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .circuits import GateCircuit
from .pauli import PAULI_MATRICES, DimensionError, PauliString, commutes

DENSE_STATE_LIMIT = 12
DENSE_MATRIX_LIMIT = 6
NORM_TOL = 1e-10


class NotNormalizedError(ValueError):
    pass


class RegimeError(ValueError):
    """Requested size is outside the dense simulation regime."""


def _parity(v: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(v) & 1).astype(np.int8)


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 1 << self.n:
            raise DimensionError(f"{amps.size} amplitudes for {self.n} qubits")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1) < tol

    def require_normalized(self, tol: float = NORM_TOL) -> None:
        if not self.is_normalized(tol):
            raise NotNormalizedError(f"state norm {self.norm!r} differs from 1")

    def allclose(self, other: StateVector, atol: float = 1e-12) -> bool:
        return self.n == other.n and bool(np.allclose(self.amplitudes, other.amplitudes, atol=atol, rtol=0))

    def to_export(self, cutoff: float = 1e-12) -> list[list]:
        """``[basis string, re, im]`` triples, dropping amplitudes below ``cutoff``."""
        out = []
        for b, a in enumerate(self.amplitudes):
            if abs(a) >= cutoff:
                out.append([format(b, f"0{self.n}b"), float(a.real), float(a.imag)])
        return out

    @classmethod
    def from_export(cls, data) -> StateVector:
        if isinstance(data, dict):
            # a bare export, or any record carrying one under "amplitudes" or "state"
            key = next((k for k in ("amplitudes", "state") if k in data), None)
            if key is None:
                raise ValueError("no amplitudes in state record")
            rows = data[key]
        else:
            rows = data
        if not rows:
            raise ValueError("empty state export")
        n = len(rows[0][0])
        amps = np.zeros(1 << n, dtype=complex)
        for bits, re, im in rows:
            if len(bits) != n or set(bits) - {"0", "1"}:
                raise ValueError(f"bad basis string {bits!r}")
            amps[int(bits, 2)] = complex(re, im)
        return cls(n, amps)


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError("need at least one qubit")
    if n > DENSE_STATE_LIMIT:
        raise RegimeError(f"{n} qubits exceeds the dense limit of {DENSE_STATE_LIMIT}")


def zero_state(n: int) -> StateVector:
    _check_n(n)
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1
    return StateVector(n, amps)


def basis_state(bits: str) -> StateVector:
    n = len(bits)
    _check_n(n)
    amps = np.zeros(1 << n, dtype=complex)
    amps[int(bits, 2)] = 1
    return StateVector(n, amps)


def symmetric_state(n: int, m: int) -> StateVector:
    """Equal superposition of all weight-``m`` strings, amplitude sqrt(m!(n-m)!/n!)."""
    _check_n(n)
    if not 0 <= m <= n:
        raise ValueError(f"weight {m} out of range for {n} qubits")
    idx = np.arange(1 << n)
    amps = np.where(np.bitwise_count(idx) == m, 1 / math.sqrt(math.comb(n, m)), 0).astype(complex)
    return StateVector(n, amps)


def product_state(thetas: Sequence[float], phis: Sequence[float]) -> StateVector:
    """Tensor product of cos(t/2)|0> + e^{i p} sin(t/2)|1>."""
    if len(thetas) != len(phis):
        raise ValueError("need one azimuth per polar angle")
    _check_n(len(thetas))
    qubits = [np.array([math.cos(t / 2), np.exp(1j * p) * math.sin(t / 2)]) for t, p in zip(thetas, phis)]
    return StateVector(len(thetas), reduce(np.kron, qubits))


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    _check_n(n)
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(n, v / np.linalg.norm(v))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>."""
    if a.n != b.n:
        raise DimensionError(f"{a.n}-qubit vs {b.n}-qubit state")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


# operators --------------------------------------------------------------


def pauli_action(p: PauliString, amps: np.ndarray) -> np.ndarray:
    """Raw amplitude array of ``p |amps>``."""
    idx = np.arange(amps.size)
    out = np.empty_like(amps)
    # X^x Z^z |c> = (-1)^{z.c} |c ^ x>
    out[idx ^ p.x] = (1j**p.phase) * (1 - 2 * _parity(idx & p.z)) * amps
    return out


def apply_pauli(p: PauliString, s: StateVector) -> StateVector:
    if p.n != s.n:
        raise DimensionError(f"{p.n}-qubit Pauli on {s.n}-qubit state")
    return StateVector(s.n, pauli_action(p, s.amplitudes))


def expectation(p: PauliString, s: StateVector) -> complex:
    return inner_product(s, apply_pauli(p, s))


def apply_matrix(mat: np.ndarray, qubits: Sequence[int], s: StateVector) -> StateVector:
    """Apply a ``2^k x 2^k`` matrix on the listed qubits (first listed = most significant)."""
    k = len(qubits)
    psi = s.amplitudes.reshape((2,) * s.n)
    op = np.asarray(mat).reshape((2,) * (2 * k))
    psi = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    psi = np.moveaxis(psi, list(range(k)), list(qubits))
    return StateVector(s.n, psi.reshape(-1))


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """Tensor product of single-qubit unitaries, factor 0 on qubit 0."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        facs = []
        for f in self.factors:
            f = np.array(f, dtype=complex)
            if f.shape != (2, 2) or np.max(np.abs(f @ f.conj().T - np.eye(2))) > 1e-12:
                raise ValueError("local factor is not a 2x2 unitary")
            f.flags.writeable = False
            facs.append(f)
        object.__setattr__(self, "factors", tuple(facs))

    @property
    def n(self) -> int:
        return len(self.factors)

    @classmethod
    def identity(cls, n: int) -> LocalUnitary:
        return cls(tuple(np.eye(2) for _ in range(n)))

    @classmethod
    def from_pauli(cls, p: PauliString) -> LocalUnitary:
        facs = [PAULI_MATRICES[ch].copy() for ch in p.letters]
        facs[0] = facs[0] * (1j**p.letter_phase)
        return cls(tuple(facs))

    def compose(self, other: LocalUnitary) -> LocalUnitary:
        """``self . other``."""
        if other.n != self.n:
            raise DimensionError(f"{self.n}-qubit times {other.n}-qubit local unitary")
        return LocalUnitary(tuple(a @ b for a, b in zip(self.factors, other.factors)))

    def dagger(self) -> LocalUnitary:
        return LocalUnitary(tuple(f.conj().T for f in self.factors))

    def to_matrix(self) -> np.ndarray:
        return reduce(np.kron, self.factors)


def as_local(op: PauliString | LocalUnitary) -> LocalUnitary:
    return LocalUnitary.from_pauli(op) if isinstance(op, PauliString) else op


def apply_local(u: LocalUnitary | PauliString, s: StateVector) -> StateVector:
    if isinstance(u, PauliString):
        return apply_pauli(u, s)
    if u.n != s.n:
        raise DimensionError(f"{u.n}-qubit operator on {s.n}-qubit state")
    psi = s.amplitudes.reshape((2,) * s.n)
    for k, f in enumerate(u.factors):
        psi = np.moveaxis(np.tensordot(f, psi, axes=([1], [k])), 0, k)
    return StateVector(s.n, psi.reshape(-1))


def apply_circuit(c: GateCircuit, s: StateVector) -> StateVector:
    if c.n != s.n:
        raise DimensionError(f"{c.n}-qubit circuit on {s.n}-qubit state")
    for g in c.gates:
        s = apply_matrix(g.matrix(), g.qubits, s)
    return s


def circuit_matrix(c: GateCircuit) -> np.ndarray:
    if c.n > DENSE_MATRIX_LIMIT:
        raise RegimeError(f"{c.n} qubits exceeds the dense matrix limit of {DENSE_MATRIX_LIMIT}")
    dim = 1 << c.n
    cols = [apply_circuit(c, StateVector(c.n, np.eye(dim)[j])).amplitudes for j in range(dim)]
    return np.stack(cols, axis=1)


# Pauli sums ------------------------------------------------------------


class NotUnitaryPauliSumError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PauliSumOperator:
    terms: tuple[tuple[complex, PauliString], ...]

    def __post_init__(self):
        terms = tuple((complex(c), p) for c, p in self.terms)
        if not terms:
            raise ValueError("empty Pauli sum")
        if len({p.n for _, p in terms}) != 1:
            raise DimensionError("terms act on different qubit counts")
        object.__setattr__(self, "terms", terms)

    @property
    def n(self) -> int:
        return self.terms[0][1].n

    @property
    def is_hermitian(self) -> bool:
        return all(abs(c.imag) < 1e-12 and p.is_hermitian for c, p in self.terms)

    def anticommutation_defect(self) -> tuple[int, int] | None:
        """First pair of terms that commute, or None if all pairs anticommute."""
        for i, j in itertools.combinations(range(len(self.terms)), 2):
            if commutes(self.terms[i][1], self.terms[j][1]):
                return i, j
        return None

    @property
    def is_unitary(self) -> bool:
        """Sufficient certificate: Hermitian terms, real unit-norm coefficients, pairwise anticommuting."""
        if not self.is_hermitian:
            return False
        if abs(sum(c.real**2 for c, _ in self.terms) - 1) > 1e-12:
            return False
        return len(self.terms) == 1 or self.anticommutation_defect() is None

    def check_unitary(self) -> None:
        if self.is_unitary:
            return
        if self.n <= DENSE_MATRIX_LIMIT:
            m = self.to_dense()
            err = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
            if err < 1e-10:
                return
            raise NotUnitaryPauliSumError(f"Pauli sum is not unitary: defect {err:.3e}")
        pair = self.anticommutation_defect()
        norm = sum(abs(c) ** 2 for c, _ in self.terms)
        raise NotUnitaryPauliSumError(
            f"cannot certify unitarity: commuting pair {pair}, coefficient norm {norm:.12g}"
        )

    def to_sparse(self) -> sp.csr_matrix:
        dim = 1 << self.n
        idx = np.arange(dim)
        rows, cols, data = [], [], []
        for c, p in self.terms:
            rows.append(idx ^ p.x)
            cols.append(idx)
            data.append(c * (1j**p.phase) * (1 - 2 * _parity(idx & p.z)))
        return sp.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
        )

    def to_dense(self) -> np.ndarray:
        if self.n > DENSE_MATRIX_LIMIT:
            raise RegimeError(f"{self.n} qubits exceeds the dense matrix limit of {DENSE_MATRIX_LIMIT}")
        return self.to_sparse().toarray()


def apply_pauli_sum(u: PauliSumOperator, s: StateVector) -> StateVector:
    if u.n != s.n:
        raise DimensionError(f"{u.n}-qubit operator on {s.n}-qubit state")
    u.check_unitary()
    out = np.zeros_like(s.amplitudes)
    for c, p in u.terms:
        out = out + c * pauli_action(p, s.amplitudes)
    return StateVector(s.n, out)


def exp_hermitian_pauli_sum(h: PauliSumOperator, s: StateVector) -> StateVector:
    """``exp(i h) |s>`` through a sparse Taylor action (no dense exponential)."""
    if h.n != s.n:
        raise DimensionError(f"{h.n}-qubit operator on {s.n}-qubit state")
    if not h.is_hermitian:
        raise ValueError("exponent must be a real combination of Hermitian Paulis")
    _check_n(h.n)
    out = expm_multiply(1j * h.to_sparse(), s.amplitudes)
    defect = abs(np.linalg.norm(out) - np.linalg.norm(s.amplitudes))
    if defect > 1e-9:
        raise ArithmeticError(f"exponential lost unitarity: norm defect {defect:.3e}")
    return StateVector(s.n, out)


def w_term(n: int, i: int) -> PauliString:
    """``I^(i-1) X Z^(n-i)`` for 1-based ``i``."""
    return PauliString.from_label("I" * (i - 1) + "X" + "Z" * (n - i))


def xi_unitary(weights: Sequence[float]) -> PauliSumOperator:
    n = len(weights)
    return PauliSumOperator(tuple((float(a), w_term(n, i + 1)) for i, a in enumerate(weights)))


def w_unitary(n: int) -> PauliSumOperator:
    """Pauli-sum unitary taking |0...0> to the n-qubit W state."""
    return xi_unitary([1 / math.sqrt(n)] * n)


def hermitian_sum(coeffs: Iterable[float], ops: Iterable[PauliString]) -> PauliSumOperator:
    return PauliSumOperator(tuple((float(c), p) for c, p in zip(coeffs, ops, strict=True)))
