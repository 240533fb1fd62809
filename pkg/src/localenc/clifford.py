"""Clifford unitaries as conjugation tableaux.

A tableau stores the images ``U X_k U^dagger`` and ``U Z_k U^dagger`` with
exact phases.  Gate tableaux are read off the gate's dense matrix, so the
gate set in :mod:`localenc.circuits` needs no hand-written update rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gf2
from .circuits import Gate, GateCircuit
from .pauli import DimensionError, PauliString, commutes, multiply

UNITARY_TOL = 1e-10
PAULI_TOL = 1e-8


class NonCliffordError(ValueError):
    def __init__(self, index: int, gate: Gate):
        self.index = index
        self.gate = gate
        super().__init__(f"gate {index} ({gate.to_line()}) is not Clifford")


class NotUnitaryError(ValueError):
    pass


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> None:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitaryError("matrix is not square")
    err = np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))
    if err > tol:
        raise NotUnitaryError(f"unitarity defect {err:.3e} exceeds {tol:g}")


def dense_to_pauli(m: np.ndarray, tol: float = PAULI_TOL) -> PauliString | None:
    """The Pauli string equal to ``m`` (phase included), or None.

    ``m`` must be ``lambda * P`` with ``lambda`` in {1, i, -1, -i}.
    """
    m = np.asarray(m)
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim != 1 << n or n < 1:
        raise ValueError("matrix dimension is not a power of two")
    x = int(np.argmax(np.abs(m[0])))
    cols = np.arange(dim)
    d = m[cols ^ x, cols]
    lam = d[0]
    z = 0
    for k in range(n):
        if abs(d[1 << (n - 1 - k)] + lam) < abs(d[1 << (n - 1 - k)] - lam):
            z |= 1 << (n - 1 - k)
    signs = 1 - 2 * (np.bitwise_count(cols & z).astype(np.int64) & 1)
    expect = np.zeros_like(m)
    expect[cols ^ x, cols] = lam * signs
    if np.max(np.abs(m - expect)) > tol:
        return None
    q = int(np.round(np.angle(lam) / (np.pi / 2))) % 4
    if abs(lam - 1j**q) > tol:
        return None
    return PauliString(n, x, z, q)


@lru_cache(maxsize=None)
def _local_images(name: str, param: float | None) -> tuple[PauliString, ...] | None:
    gate_u = Gate(name, (0,) if name not in ("CNOT", "CZ") else (0, 1), param).matrix()
    k = 1 if gate_u.shape[0] == 2 else 2
    out = []
    for q in range(k):
        for letter in "XZ":
            sigma = PauliString.single(k, q, letter).to_matrix()
            img = dense_to_pauli(gate_u @ sigma @ gate_u.conj().T)
            if img is None:
                return None
            out.append(img)
    return tuple(out)


def _embed(p: PauliString, qubits: tuple[int, ...], n: int) -> PauliString:
    k = len(qubits)
    x = z = 0
    for j, q in enumerate(qubits):
        bit = k - 1 - j
        x |= ((p.x >> bit) & 1) << (n - 1 - q)
        z |= ((p.z >> bit) & 1) << (n - 1 - q)
    return PauliString(n, x, z, p.phase)


def _conjugate_partial(p: PauliString, touched: dict[int, tuple[PauliString, PauliString]]) -> PauliString:
    """Conjugate by a unitary acting only on the qubits in ``touched``."""
    n = p.n
    mask = 0
    for q in touched:
        mask |= 1 << (n - 1 - q)
    # X_out Z_out X_in Z_in ordering is legal: disjoint supports commute
    out = PauliString(n, p.x & ~mask, p.z & ~mask, p.phase)
    for q, (ix, _) in sorted(touched.items()):
        if (p.x >> (n - 1 - q)) & 1:
            out = multiply(out, ix)
    for q, (_, iz) in sorted(touched.items()):
        if (p.z >> (n - 1 - q)) & 1:
            out = multiply(out, iz)
    return out


@dataclass(frozen=True)
class CliffordTableau:
    n: int
    x_images: tuple[PauliString, ...]
    z_images: tuple[PauliString, ...]

    @classmethod
    def identity(cls, n: int) -> CliffordTableau:
        return cls(
            n,
            tuple(PauliString.single(n, k, "X") for k in range(n)),
            tuple(PauliString.single(n, k, "Z") for k in range(n)),
        )

    @classmethod
    def from_circuit(cls, circuit: GateCircuit) -> CliffordTableau:
        tab = cls.identity(circuit.n)
        for idx, gate in enumerate(circuit.gates):
            local = _local_images(gate.name, gate.param)
            if local is None:
                raise NonCliffordError(idx, gate)
            touched = {
                q: (_embed(local[2 * j], gate.qubits, circuit.n), _embed(local[2 * j + 1], gate.qubits, circuit.n))
                for j, q in enumerate(gate.qubits)
            }
            tab = CliffordTableau(
                tab.n,
                tuple(_conjugate_partial(p, touched) for p in tab.x_images),
                tuple(_conjugate_partial(p, touched) for p in tab.z_images),
            )
        return tab

    def conjugate(self, p: PauliString) -> PauliString:
        """``U p U^dagger`` with exact phase."""
        if p.n != self.n:
            raise DimensionError(f"{p.n}-qubit Pauli through {self.n}-qubit tableau")
        n = self.n
        out = PauliString(n, 0, 0, p.phase)
        for k in range(n):
            if (p.x >> (n - 1 - k)) & 1:
                out = multiply(out, self.x_images[k])
        for k in range(n):
            if (p.z >> (n - 1 - k)) & 1:
                out = multiply(out, self.z_images[k])
        return out

    def then(self, other: CliffordTableau) -> CliffordTableau:
        """Tableau of ``other . self`` (apply self first)."""
        return CliffordTableau(
            self.n,
            tuple(other.conjugate(p) for p in self.x_images),
            tuple(other.conjugate(p) for p in self.z_images),
        )

    def inverse(self) -> CliffordTableau:
        images = [*self.x_images, *self.z_images]
        keys = [p.key for p in images]
        xs, zs = [], []
        for k in range(self.n):
            for letter, dest in (("X", xs), ("Z", zs)):
                target = PauliString.single(self.n, k, letter)
                mask = gf2.solve(keys, target.key)
                if mask is None:
                    raise ValueError("tableau images are not independent")
                # preimage = product of the basis Paulis whose images multiply to target
                pre = PauliString.identity(self.n)
                for j in range(2 * self.n):
                    if (mask >> j) & 1:
                        q = j if j < self.n else j - self.n
                        pre = multiply(pre, PauliString.single(self.n, q, "X" if j < self.n else "Z"))
                got = self.conjugate(pre)
                dest.append(pre.with_phase(target.phase - got.phase))
        return CliffordTableau(self.n, tuple(xs), tuple(zs))

    def is_valid(self) -> bool:
        """Images satisfy the canonical commutation relations."""
        for a in range(self.n):
            if not (self.x_images[a].is_hermitian and self.z_images[a].is_hermitian):
                return False
            for b in range(self.n):
                if commutes(self.x_images[a], self.z_images[b]) != (a != b):
                    return False
                if b > a and not (
                    commutes(self.x_images[a], self.x_images[b])
                    and commutes(self.z_images[a], self.z_images[b])
                ):
                    return False
        return True


def tableau_from_circuit(circuit: GateCircuit) -> CliffordTableau:
    return CliffordTableau.from_circuit(circuit)


def conjugate(tab: CliffordTableau, p: PauliString) -> PauliString:
    return tab.conjugate(p)


@dataclass
class CliffordWitness:
    is_clifford: bool
    images: list[PauliString]
    failure: str | None = None


def is_clifford_dense(u: np.ndarray, tol: float = PAULI_TOL) -> CliffordWitness:
    """Check that ``u`` maps every X_k and Z_k to a Pauli string under conjugation."""
    u = np.asarray(u, dtype=complex)
    check_unitary(u)
    n = u.shape[0].bit_length() - 1
    images = []
    for k in range(n):
        for letter in "XZ":
            sigma = PauliString.single(n, k, letter)
            img = dense_to_pauli(u @ sigma.to_matrix() @ u.conj().T, tol)
            if img is None:
                return CliffordWitness(False, images, f"{letter}_{k} image is not a Pauli string")
            images.append(img)
    return CliffordWitness(True, images)
