"""Bit-level n-qubit Pauli group algebra.

A Pauli string is stored as ``i**phase * X^x * Z^z`` where ``X^x`` is the
product of X on every qubit whose bit is set in ``x`` (likewise for Z).
Qubit 0 is the leftmost letter and the most significant bit of each mask,
matching the computational-basis ordering used for statevectors.

With this convention ``X Z = -i Y`` on one qubit, i.e. ``Y = i X Z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from . import gf2

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTERS.items()}
_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PARSE = {"": 0, "+": 0, "+i": 1, "-": 2, "-i": 3, "i": 1}

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


class DependentGeneratorsError(ValueError):
    """Generators are linearly dependent over GF(2).

    ``relation`` holds the indices of a subset whose product is the
    identity up to phase.
    """

    def __init__(self, relation: list[int]):
        self.relation = relation
        super().__init__(f"generators {relation} multiply to the identity (mod phase)")


def _popcount(v: int) -> int:
    return v.bit_count()


@dataclass(frozen=True, order=True)
class PauliString:
    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one qubit")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise ValueError("mask exceeds qubit count")
        object.__setattr__(self, "phase", self.phase % 4)

    # construction -------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse ``"+XYZ"``, ``"-iZZI"`` etc.  Lowercase ``i`` is the phase, ``I`` the identity."""
        label = label.strip()
        body = label.lstrip("+-i")
        prefix = label[: len(label) - len(body)]
        if prefix not in _PREFIX_PARSE or not body:
            raise ValueError(f"malformed Pauli label {label!r}")
        n = len(body)
        x = z = 0
        for k, ch in enumerate(body):
            try:
                bx, bz = _BITS[ch]
            except KeyError:
                raise ValueError(f"bad Pauli letter {ch!r} in {label!r}") from None
            x |= bx << (n - 1 - k)
            z |= bz << (n - 1 - k)
        # letters are Hermitian; convert to the X^x Z^z form (Y = i X Z)
        return cls(n, x, z, _PREFIX_PARSE[prefix] + _popcount(x & z))

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliString:
        return cls.from_label("I" * qubit + letter + "I" * (n - qubit - 1))

    @classmethod
    def from_key(cls, n: int, key: int) -> PauliString:
        """Hermitian (+) representative of the packed vector ``x << n | z``."""
        x, z = key >> n, key & ((1 << n) - 1)
        return cls(n, x, z, _popcount(x & z))

    # views --------------------------------------------------------------

    @property
    def key(self) -> int:
        """Phase-free 2n-bit vector ``x << n | z``."""
        return (self.x << self.n) | self.z

    @property
    def letter_phase(self) -> int:
        """Scalar ``i**k`` in front of the Hermitian letter form."""
        return (self.phase - _popcount(self.x & self.z)) % 4

    @property
    def letters(self) -> str:
        n = self.n
        return "".join(
            _LETTERS[((self.x >> (n - 1 - k)) & 1, (self.z >> (n - 1 - k)) & 1)]
            for k in range(n)
        )

    @property
    def is_hermitian(self) -> bool:
        return self.letter_phase % 2 == 0

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def __str__(self) -> str:
        return _PREFIX[self.letter_phase] + self.letters

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def hermitian(self) -> PauliString:
        """The + representative with the same letters (global phase dropped)."""
        return PauliString(self.n, self.x, self.z, _popcount(self.x & self.z))

    def with_phase(self, k: int) -> PauliString:
        return PauliString(self.n, self.x, self.z, self.phase + k)

    def dagger(self) -> PauliString:
        # (X^x Z^z)^dagger = Z^z X^x = (-1)^{|x&z|} X^x Z^z
        return PauliString(self.n, self.x, self.z, -self.phase + 2 * _popcount(self.x & self.z))

    def tensor(self, other: PauliString) -> PauliString:
        """``self ⊗ other`` with ``self`` on the leading qubits."""
        return PauliString(
            self.n + other.n,
            (self.x << other.n) | other.x,
            (self.z << other.n) | other.z,
            self.phase + other.phase,
        )

    def to_matrix(self) -> np.ndarray:
        mat = reduce(np.kron, (PAULI_MATRICES[ch] for ch in self.letters))
        return (1j ** self.letter_phase) * mat

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact product ``a @ b`` with phase tracking."""
    if a.n != b.n:
        raise DimensionError(f"{a.n}-qubit times {b.n}-qubit Pauli")
    # X^x1 Z^z1 X^x2 Z^z2 = (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}
    return PauliString(
        a.n, a.x ^ b.x, a.z ^ b.z, a.phase + b.phase + 2 * _popcount(a.z & b.x)
    )


def commutes(a: PauliString, b: PauliString) -> bool:
    if a.n != b.n:
        raise DimensionError(f"{a.n}-qubit vs {b.n}-qubit Pauli")
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) % 2 == 0


def symplectic_key_product(n: int, a: int, b: int) -> int:
    """Symplectic form of two packed keys (0 = commute)."""
    m = (1 << n) - 1
    return (_popcount((a >> n) & b & m) + _popcount(a & m & (b >> n))) & 1


def all_paulis(n: int) -> list[PauliString]:
    """All 4**n Hermitian representatives, ordered by packed key."""
    return [PauliString.from_key(n, k) for k in range(1 << (2 * n))]


@dataclass(frozen=True)
class PauliSubgroup:
    """Projective subgroup given by GF(2)-independent generators."""

    n: int
    generators: tuple[PauliString, ...]
    _elements: tuple[PauliString, ...] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(g.hermitian() for g in self.generators)
        for g in gens:
            if g.n != self.n:
                raise DimensionError(f"generator {g} is not on {self.n} qubits")
        dep = gf2.find_dependency([g.key for g in gens])
        if dep is not None:
            raise DependentGeneratorsError(dep)
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> PauliSubgroup:
        gens = [PauliString.from_label(s) for s in labels]
        return cls(gens[0].n, tuple(gens))

    def __len__(self) -> int:
        return 1 << len(self.generators)

    @property
    def canonical_key(self) -> tuple[int, ...]:
        return tuple(gf2.rref([g.key for g in self.generators])[0])

    def elements(self) -> list[PauliString]:
        if self._elements is None:
            object.__setattr__(self, "_elements", tuple(enumerate_subgroup(self)))
        return list(self._elements)


def enumerate_subgroup(group: PauliSubgroup) -> list[PauliString]:
    """Every element as a Hermitian representative.

    Element ``i`` is the product of the generators selected by the bits of
    ``i``, generator 0 being the most significant bit.
    """
    keys = gf2.span([g.key for g in group.generators])
    return [PauliString.from_key(group.n, k) for k in keys]


def centralizer_generators(gens: Sequence[PauliString], n: int | None = None) -> list[PauliString]:
    """Basis of the projective centralizer of ``gens``."""
    if n is None:
        if not gens:
            raise ValueError("qubit count needed when no generators are given")
        n = gens[0].n
    for g in gens:
        if g.n != n:
            raise DimensionError(f"generator {g} is not on {n} qubits")
    # p commutes with g  <=>  <p.x, g.z> + <p.z, g.x> = 0, i.e. p.key is
    # orthogonal to the swapped vector g.z << n | g.x
    rows = [(g.z << n) | g.x for g in gens]
    basis = gf2.nullspace(rows, 2 * n)
    basis = gf2.rref(basis)[0]
    return [PauliString.from_key(n, k) for k in basis]


def centralizer_hermitian(gens: Sequence[PauliString], n: int | None = None) -> list[PauliString]:
    """All Hermitian Paulis (projective) commuting with every generator, sorted by key."""
    basis = centralizer_generators(gens, n)
    n = basis[0].n if basis else gens[0].n
    out = sorted(
        (PauliString.from_key(n, k) for k in gf2.span([b.key for b in basis])),
        key=lambda p: p.key,
    )
    for p in out:
        for g in gens:
            if not commutes(p, g):
                raise AssertionError(f"centralizer element {p} fails to commute with {g}")
    return out


def subgroup_keys(gens: Sequence[PauliString]) -> set[int]:
    return set(gf2.span([g.key for g in gens]))


def pauli_tensor(*parts: PauliString) -> PauliString:
    return reduce(PauliString.tensor, parts)


def product(items: Iterable[PauliString], n: int) -> PauliString:
    return reduce(multiply, items, PauliString.identity(n))
