"""Local encoding of classical information onto multiqubit states.

An n-qubit state is locally encodable when 2**n tensor-product unitaries
map it to 2**n mutually orthogonal states.  The package provides the
Pauli algebra, Clifford tableaux, a statevector engine, the known encoder
constructions, a Gram-matrix oracle, searches for new encoder sets and a
command-line front end.
"""

from .clifford import CliffordTableau, tableau_from_circuit
from .encoders import (
    EncoderSet,
    GramReport,
    constructive_w_encoder,
    four_two_encoder,
    inductive_extend,
    product_encoder,
    two_qubit_encoder,
    verify_encoder,
    w3_encoder,
    zero_encoder,
)
from .pauli import PauliString, PauliSubgroup, commutes, multiply
from .state import StateVector, symmetric_state, zero_state

__all__ = [
    "CliffordTableau",
    "EncoderSet",
    "GramReport",
    "PauliString",
    "PauliSubgroup",
    "StateVector",
    "commutes",
    "constructive_w_encoder",
    "four_two_encoder",
    "inductive_extend",
    "multiply",
    "product_encoder",
    "symmetric_state",
    "tableau_from_circuit",
    "two_qubit_encoder",
    "verify_encoder",
    "w3_encoder",
    "zero_encoder",
    "zero_state",
]
