"""Pauli encoder groups: commutants of a generator set, exponentials built
from them, and the encodable states ``C exp(i sum c_k p_k) |0...0>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuits import GateCircuit
from .clifford import CliffordTableau, check_unitary, dense_to_pauli, tableau_from_circuit
from .encoders import EncoderSet, GramReport, subgroup_encoder, verify_encoder
from .pauli import PauliString, PauliSubgroup, centralizer_hermitian, commutes, enumerate_subgroup
from .state import (
    DENSE_MATRIX_LIMIT,
    PauliSumOperator,
    RegimeError,
    StateVector,
    apply_circuit,
    exp_hermitian_pauli_sum,
    w_term,
    zero_state,
)

SAMPLE_TOL = 1e-9
SAMPLE_QUBIT_LIMIT = 10


def build_commutative_set(gens: Sequence[PauliString]) -> list[PauliString]:
    """Hermitian Paulis commuting with every generator (projective, sorted by key)."""
    if not gens:
        raise ValueError("need at least one generator")
    if not all(g.is_hermitian for g in gens):
        raise ValueError("generators must be Hermitian")
    PauliSubgroup(gens[0].n, tuple(gens))  # raises on dependent generators
    return centralizer_hermitian(gens)


def x_generators(n: int) -> list[PauliString]:
    return [PauliString.single(n, k, "X") for k in range(n)]


def q_operators(n: int) -> list[PauliString]:
    """``q_0 = I^n`` followed by ``q_i = I^(i-1) X Z^(n-i)``, i = 1..n."""
    return [PauliString.identity(n)] + [w_term(n, i) for i in range(1, n + 1)]


@dataclass(eq=False)
class PseudoCliffordSample:
    generators: list[PauliString]
    circuit: GateCircuit
    tableau: CliffordTableau
    operators: list[PauliString]
    coeffs: list[float]
    state: StateVector
    encoder: EncoderSet
    gram: GramReport

    def to_json(self) -> dict:
        return {
            "generators": [str(g) for g in self.generators],
            "clifford_circuit": self.circuit.to_lines(),
            "operators": [str(p) for p in self.operators],
            "coeffs": [float(c) for c in self.coeffs],
            "state": self.state.to_export(),
            "encoder": [str(p) for p in self.encoder.elements],
            "gram": self.gram.to_json(),
        }


def _encodes_zero(gens: Sequence[PauliString]) -> bool:
    return all(p.x != 0 for p in enumerate_subgroup(PauliSubgroup(gens[0].n, tuple(gens)))[1:])


def sample_pseudo_clifford(
    gens: Sequence[PauliString],
    operators: Sequence[PauliString],
    coeffs: Sequence[float],
    circuit: GateCircuit | None = None,
) -> PseudoCliffordSample:
    """State ``C exp(i sum_k c_k p_k)|0...0>`` with encoder ``<C g_i C^dagger>``.

    ``operators`` must come from the commutative set of ``gens``; every
    generator must encode |0...0> (no pure-Z element in the group).  The
    sample is rejected unless its own Gram check passes.
    """
    n = gens[0].n
    if n > SAMPLE_QUBIT_LIMIT:
        raise RegimeError(f"sampling is limited to {SAMPLE_QUBIT_LIMIT} qubits")
    if len(operators) != len(coeffs):
        raise ValueError(f"{len(operators)} operators but {len(coeffs)} coefficients")
    if len(gens) != n or not _encodes_zero(gens):
        raise ValueError("generators must span an encoder of |0...0>")
    for p in operators:
        for g in gens:
            if not commutes(p, g):
                raise ValueError(f"{p} does not commute with generator {g}")
    circuit = GateCircuit(n) if circuit is None else circuit
    tab = tableau_from_circuit(circuit)
    hsum = PauliSumOperator(tuple((float(c), p.hermitian()) for c, p in zip(coeffs, operators)))
    state = apply_circuit(circuit, exp_hermitian_pauli_sum(hsum, zero_state(n)))
    encoder = subgroup_encoder([tab.conjugate(g) for g in gens], "encoder_group")
    gram = verify_encoder(state, encoder, SAMPLE_TOL)
    if not gram.passed:
        raise RuntimeError(f"pseudo-Clifford sample failed its Gram check: {gram.max_offdiag:.3e}")
    return PseudoCliffordSample(list(gens), circuit, tab, list(operators), list(coeffs), state, encoder, gram)


@dataclass
class IsomorphismResult:
    is_pauli_image: bool
    images: list[PauliString | None]

    @property
    def image_group(self) -> PauliSubgroup | None:
        if not self.is_pauli_image:
            return None
        return PauliSubgroup(self.images[0].n, tuple(self.images))


def isomorphism_check(p1: PauliSubgroup, u: np.ndarray, tol: float = 1e-8) -> IsomorphismResult:
    """Conjugate the generators of ``p1`` by ``u`` and test that each lands in the Pauli group."""
    u = np.asarray(u, dtype=complex)
    check_unitary(u)
    if p1.n > DENSE_MATRIX_LIMIT:
        raise RegimeError(f"dense conjugation is limited to {DENSE_MATRIX_LIMIT} qubits")
    images = [dense_to_pauli(u @ g.to_matrix() @ u.conj().T, tol) for g in p1.generators]
    ok = all(img is not None for img in images)
    result = IsomorphismResult(ok, images)
    if ok:
        # images of independent generators stay independent: |P2| = |P1|
        assert len(result.image_group) == len(p1)
    return result


def random_coefficients(count: int, rng: np.random.Generator) -> list[float]:
    return list(rng.uniform(-np.pi, np.pi, size=count))
