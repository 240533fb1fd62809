"""Shared fixtures and dense-matrix oracles written independently of the package."""

from __future__ import annotations

from functools import reduce

import numpy as np
import pytest

_ONE = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_PHASES = {"": 1, "+": 1, "-": -1, "+i": 1j, "i": 1j, "-i": -1j}


def dense_label(label: str) -> np.ndarray:
    """Dense matrix of a label such as '-iXYZ' (qubit 0 leftmost)."""
    k = len(label) - len(label.lstrip("+-i"))
    return _PHASES[label[:k]] * reduce(np.kron, [_ONE[c] for c in label[k:]])


def dense_of(p) -> np.ndarray:
    return dense_label(str(p))


def dense_apply(p, vecs: np.ndarray) -> np.ndarray:
    """Apply a Pauli label to the columns of ``vecs`` one 2x2 factor at a time (qubit 0 leftmost)."""
    label = str(p)
    k = len(label) - len(label.lstrip("+-i"))
    letters = label[k:]
    n = len(letters)
    t = np.asarray(vecs, dtype=complex).reshape((2,) * n + (-1,))
    for q, c in enumerate(letters):
        if c != "I":
            t = np.moveaxis(np.tensordot(_ONE[c], t, axes=([1], [q])), 0, q)
    return _PHASES[label[:k]] * t.reshape(vecs.shape)


def proportional_phase(a: np.ndarray, b: np.ndarray) -> complex | None:
    """c with a = c b and |c| = 1, if any."""
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    c = a[idx] / b[idx]
    if abs(abs(c) - 1) > 1e-9 or not np.allclose(a, c * b, atol=1e-9):
        return None
    return c


def dense_gram(psi: np.ndarray, mats: list[np.ndarray]) -> np.ndarray:
    phi = np.stack([m @ psi for m in mats], axis=1)
    return np.abs(phi.conj().T @ phi)


def dense_symmetric(n: int, m: int) -> np.ndarray:
    """|n,m> from explicit bit strings."""
    v = np.zeros(2**n, dtype=complex)
    for b in range(2**n):
        if bin(b).count("1") == m:
            v[b] = 1
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def dense_gate(mat: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Embed a 1- or 2-qubit matrix by acting on each computational basis column."""
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    k = len(qubits)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        local_in = sum(bits[q] << (k - 1 - j) for j, q in enumerate(qubits))
        for local_out in range(2**k):
            amp = mat[local_out, local_in]
            if amp == 0:
                continue
            new = list(bits)
            for j, q in enumerate(qubits):
                new[q] = (local_out >> (k - 1 - j)) & 1
            row = sum(b << (n - 1 - q) for q, b in enumerate(new))
            out[row, col] += amp
    return out


def dense_circuit(circuit) -> np.ndarray:
    u = np.eye(2**circuit.n, dtype=complex)
    for g in circuit.gates:
        u = dense_gate(g.matrix(), g.qubits, circuit.n) @ u
    return u


# acceptance summary --------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> str:
    """One pass/fail line per criterion, echoed now and repeated in the terminal summary."""
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
