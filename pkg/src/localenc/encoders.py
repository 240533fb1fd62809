"""Local encoder sets, their constructions, and the Gram-matrix oracle.

An encoder set for an n-qubit state is a list of 2**n local unitaries whose
images of the state are orthonormal.  Elements are kept as
:class:`~localenc.pauli.PauliString` whenever a construction allows it, and
as :class:`~localenc.state.LocalUnitary` once a non-Pauli correction has
been composed in.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .circuits import Gate, GateCircuit, phase_gate
from .clifford import CliffordTableau, check_unitary, tableau_from_circuit
from .pauli import DimensionError, PauliString, PauliSubgroup, all_paulis, enumerate_subgroup, multiply
from .state import (
    DENSE_STATE_LIMIT,
    LocalUnitary,
    RegimeError,
    StateVector,
    apply_local,
    apply_pauli_sum,
    as_local,
    pauli_action,
    xi_unitary,
    zero_state,
)

Element = Union[PauliString, LocalUnitary]
DEFAULT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class EncoderSet:
    n: int
    elements: tuple[Element, ...]
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(self.elements) != 1 << self.n:
            raise ValueError(f"{len(self.elements)} elements, expected {1 << self.n}")
        for e in self.elements:
            if e.n != self.n:
                raise DimensionError(f"element on {e.n} qubits in a {self.n}-qubit set")

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> Element:
        return self.elements[i]

    @property
    def is_pauli(self) -> bool:
        return all(isinstance(e, PauliString) for e in self.elements)

    def paulis(self) -> list[PauliString]:
        if not self.is_pauli:
            raise TypeError(f"encoder set '{self.provenance}' has non-Pauli elements")
        return list(self.elements)

    def to_json(self) -> dict:
        if self.is_pauli:
            elems = [str(p) for p in self.elements]
        else:
            elems = [
                [[[float(v.real), float(v.imag)] for v in f.reshape(-1)] for f in as_local(e).factors]
                for e in self.elements
            ]
        return {"n": self.n, "provenance": self.provenance, "elements": elems}

    @classmethod
    def from_json(cls, data: dict) -> EncoderSet:
        elems: list[Element] = []
        for e in data["elements"]:
            if isinstance(e, str):
                elems.append(PauliString.from_label(e))
            else:
                facs = [np.array([complex(re, im) for re, im in f]).reshape(2, 2) for f in e]
                elems.append(LocalUnitary(tuple(facs)))
        return cls(int(data["n"]), tuple(elems), data.get("provenance", ""))


@dataclass
class GramReport:
    n: int
    tol: float
    passed: bool
    max_offdiag: float
    min_diag: float
    offenders: list[tuple[int, int, float]] = field(default_factory=list)
    provenance: str = ""

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "tol": self.tol,
            "pass": self.passed,
            "max_offdiag": self.max_offdiag,
            "min_diag": self.min_diag,
            "offenders": [{"i": i, "j": j, "overlap": o} for i, j, o in self.offenders],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> GramReport:
        return cls(
            n=data["n"],
            tol=data["tol"],
            passed=data["pass"],
            max_offdiag=data["max_offdiag"],
            min_diag=data["min_diag"],
            offenders=[(o["i"], o["j"], o["overlap"]) for o in data["offenders"]],
            provenance=data.get("provenance", ""),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


# oracle ------------------------------------------------------------------


def encoded_states(s: StateVector, e: EncoderSet) -> np.ndarray:
    """Matrix whose column i is ``v_i |s>``."""
    cols = []
    for v in e.elements:
        if isinstance(v, PauliString):
            cols.append(pauli_action(v, s.amplitudes))
        else:
            cols.append(apply_local(v, s).amplitudes)
    return np.stack(cols, axis=1)


def gram_magnitudes(s: StateVector, e: EncoderSet) -> np.ndarray:
    """Full ``|<s| v_i^dagger v_j |s>|`` matrix (small n only)."""
    phi = encoded_states(s, e)
    return np.abs(phi.conj().T @ phi)


def _report_from_gram(gram: np.ndarray, n: int, tol: float, provenance: str) -> GramReport:
    diag = np.diag(gram).copy()
    off = gram.copy()
    np.fill_diagonal(off, 0.0)
    ii, jj = np.nonzero(np.tril(off >= tol, k=-1))
    offenders = [(int(i), int(j), float(off[i, j])) for i, j in zip(ii, jj)]
    max_off = float(off.max()) if off.size > 1 else 0.0
    min_diag = float(diag.min())
    passed = max_off < tol and abs(min_diag - 1) < tol and float(np.max(np.abs(diag - 1))) < tol
    return GramReport(n, tol, passed, max_off, min_diag, offenders, provenance)


def verify_encoder(s: StateVector, e: EncoderSet, tol: float = DEFAULT_TOL, block: int = 512) -> GramReport:
    """Compare the Gram matrix of the encoded states with the identity.

    Offenders are reported as ``(i, j, |overlap|)`` with ``i > j`` in
    row-major order.
    """
    if s.n != e.n:
        raise DimensionError(f"{e.n}-qubit encoder on {s.n}-qubit state")
    if s.n > DENSE_STATE_LIMIT:
        raise RegimeError("Gram oracle is dense-only")
    s.require_normalized()
    phi = encoded_states(s, e)
    dim = phi.shape[1]
    diag = np.empty(dim)
    max_off = 0.0
    offenders: list[tuple[int, int, float]] = []
    for start in range(0, dim, block):
        stop = min(start + block, dim)
        g = np.abs(phi[:, start:stop].conj().T @ phi)  # rows start..stop
        rows = np.arange(start, stop)
        diag[start:stop] = g[rows - start, rows]
        g[rows - start, rows] = 0.0
        if g.size:
            max_off = max(max_off, float(g.max()))
        low = np.tril(np.ones((stop - start, dim), dtype=bool), k=start - 1)
        ii, jj = np.nonzero((g >= tol) & low)
        offenders.extend((int(i) + start, int(j), float(g[i, j])) for i, j in zip(ii, jj))
    min_diag = float(diag.min())
    passed = max_off < tol and float(np.max(np.abs(diag - 1))) < tol
    return GramReport(s.n, tol, passed, max_off, min_diag, offenders, e.provenance)


# constructions -----------------------------------------------------------


def zero_encoder(n: int, flip: str = "X", idle: str = "I") -> EncoderSet:
    """Element i applies ``flip`` where the binary digits of i are 1 (qubit 0 = top bit).

    ``flip`` may be X or Y and ``idle`` I or Z; every combination encodes |0...0>.
    """
    if flip not in "XY" or idle not in "IZ":
        raise ValueError("flip must be X or Y, idle I or Z")
    elems = []
    for i in range(1 << n):
        bits = format(i, f"0{n}b")
        elems.append(PauliString.from_label("".join(flip if b == "1" else idle for b in bits)))
    return EncoderSet(n, tuple(elems), "zero")


def product_encoder(phis: Sequence[float]) -> EncoderSet:
    """Encoder for any product state whose qubit k has azimuth ``phis[k]``."""
    n = len(phis)
    correction = LocalUnitary(tuple(phase_gate(p) for p in phis))
    elems = [as_local(w).compose(correction) for w in zero_encoder(n).elements]
    return EncoderSet(n, tuple(elems), "product")


def clifford_encoder(tab: CliffordTableau, base: EncoderSet | None = None) -> EncoderSet:
    base = zero_encoder(tab.n) if base is None else base
    if base.n != tab.n:
        raise DimensionError("tableau and encoder sizes differ")
    return EncoderSet(tab.n, tuple(tab.conjugate(p) for p in base.paulis()), "clifford")


def circuit_encoder(circuit: GateCircuit, base: EncoderSet | None = None) -> EncoderSet:
    return clifford_encoder(tableau_from_circuit(circuit), base)


def compose_local_correction(e: EncoderSet, v_local: LocalUnitary) -> EncoderSet:
    """Right-compose every element with ``v_local^dagger``: encodes ``v_local |psi>``."""
    if v_local.n != e.n:
        raise DimensionError("correction size differs from encoder size")
    vd = v_local.dagger()
    return EncoderSet(e.n, tuple(as_local(v).compose(vd) for v in e.elements), e.provenance)


def schmidt_decomposition(s: StateVector) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(coeffs, u1, u2)`` with ``s = sum_k coeffs[k] u1[:,k] (x) u2[:,k]``, coeffs descending."""
    if s.n != 2:
        raise DimensionError("Schmidt decomposition here is for two qubits")
    m = s.amplitudes.reshape(2, 2)
    u, sv, vh = np.linalg.svd(m)
    return sv, u, vh.T


def two_qubit_encoder(s: StateVector) -> EncoderSet:
    """Encoder for an arbitrary two-qubit state.

    The state is ``(u1 (x) u2) CNOT (s(pi) r(theta) (x) I) |00>``; r(theta)
    commutes with X-strings, so conjugating the zero encoder through the
    Clifford part and correcting by ``u1 (x) u2`` suffices.
    """
    if s.n != 2:
        raise DimensionError("two_qubit_encoder needs a two-qubit state")
    s.require_normalized()
    _, u1, u2 = schmidt_decomposition(s)
    clifford = GateCircuit(2, (Gate("PHI", (0,), math.pi), Gate("CNOT", (0, 1))))
    enc = compose_local_correction(circuit_encoder(clifford), LocalUnitary((u1, u2)))
    return EncoderSet(2, enc.elements, "two_qubit")


def w_generators(n: int) -> list[PauliString]:
    """``g_i = Z^(i-1) X I^(n-i)``, i = 1..n."""
    return [PauliString.from_label("Z" * i + "X" + "I" * (n - i - 1)) for i in range(n)]


def constructive_w_encoder(n: int) -> EncoderSet:
    group = PauliSubgroup(n, tuple(w_generators(n)))
    return EncoderSet(n, tuple(enumerate_subgroup(group)), "constructive")


def w3_encoder() -> EncoderSet:
    """The three-qubit set v_0..v_7 in its customary printed order."""
    v1, v2, v3 = (PauliString.from_label(s) for s in ("XII", "ZXI", "ZZX"))
    elems = [
        PauliString.identity(3), v1, v2, v3,
        multiply(v1, v2), multiply(v2, v3), multiply(v3, v1), multiply(multiply(v1, v2), v3),
    ]
    return EncoderSet(3, tuple(p.hermitian() for p in elems), "w3")


def xi_state(weights: Sequence[float]) -> StateVector:
    """``sum_i a_i |e_i>`` over the weight-one basis states, built as a Pauli-sum unitary on |0...0>."""
    w = np.asarray(weights, dtype=float)
    if abs(float(w @ w) - 1) > 1e-10:
        raise ValueError(f"weights must have unit 2-norm, got {float(w @ w)!r}")
    return apply_pauli_sum(xi_unitary(list(w)), zero_state(len(w)))


def inductive_extend(e: EncoderSet) -> EncoderSet:
    """``{I (x) v_i} + {Z (x) v_i}`` on one more leading qubit."""
    one_i, one_z = PauliString.from_label("I"), PauliString.from_label("Z")
    base = e.paulis()
    elems = [one_i.tensor(v) for v in base] + [one_z.tensor(v) for v in base]
    return EncoderSet(e.n + 1, tuple(elems), f"inductive({e.provenance})")


def four_two_encoder() -> EncoderSet:
    """The explicit 16-element four-qubit set, in printed order, over w3_encoder()."""
    v = w3_encoder().elements
    ii, xx, zz = (PauliString.from_label(c) for c in "IXZ")
    xz = multiply(xx, zz)
    plan = [
        (ii, 0), (ii, 1), (zz, 2), (ii, 3), (zz, 4), (zz, 5), (ii, 6), (zz, 7),
        None, (xz, 1), (xx, 2), (xz, 3), (xx, 4), (xx, 5), (xz, 6), (xx, 7),
    ]
    elems = []
    for item in plan:
        if item is None:
            elems.append(PauliString.from_label("XZZZ"))
        else:
            head, k = item
            elems.append(head.tensor(v[k]))
    return EncoderSet(4, tuple(elems), "explicit_42")


def subgroup_encoder(gens: Sequence[PauliString], provenance: str = "group") -> EncoderSet:
    group = PauliSubgroup(gens[0].n, tuple(gens))
    if len(gens) != group.n:
        raise ValueError(f"{len(gens)} generators cannot give 2^{group.n} elements")
    return EncoderSet(group.n, tuple(enumerate_subgroup(group)), provenance)


# dense coding ------------------------------------------------------------


def dense_coding_check(
    u: np.ndarray, encoders: Sequence[PauliString] | None = None, tol: float = DEFAULT_TOL
) -> GramReport:
    """Sender-side Pauli encoding on ``(U (x) I) sum_i |i>|i> / sqrt(2^n)``.

    The Gram matrix of the encoded 2n-qubit states is compared with the
    trace condition ``Tr[p_i^dagger p_j] = 2^n delta_ij``; the two must agree.
    """
    u = np.asarray(u, dtype=complex)
    check_unitary(u)
    dim = u.shape[0]
    n = dim.bit_length() - 1
    if dim != 1 << n or not 1 <= n <= 4:
        raise ValueError("sender unitary must act on 1..4 qubits")
    paulis = list(all_paulis(n)) if encoders is None else list(encoders)
    # amplitude of |s>|r> is U[s, r] / sqrt(dim)
    psi = StateVector(2 * n, (u / math.sqrt(dim)).reshape(-1))
    ident = PauliString.identity(n)
    phi = np.stack([pauli_action(p.tensor(ident), psi.amplitudes) for p in paulis], axis=1)
    gram = np.abs(phi.conj().T @ phi)
    mats = np.stack([p.to_matrix().reshape(-1) for p in paulis])
    traces = np.abs(mats.conj() @ mats.T) / dim
    if np.max(np.abs(gram - traces)) > tol:
        raise AssertionError("Gram check and trace check disagree")
    report = _report_from_gram(gram, n, tol, "densecode")
    trace_pass = _report_from_gram(traces, n, tol, "densecode").passed
    if trace_pass != report.passed:
        raise AssertionError("Gram verdict and trace verdict disagree")
    return report
