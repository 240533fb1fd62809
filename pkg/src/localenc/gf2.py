"""Linear algebra over GF(2) on bit-packed rows.

Rows are Python ints; bit ``j`` of a row is column ``j``.  Widths here
never exceed a few dozen bits, so plain ints beat numpy arrays.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Sequence


def rref(rows: Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduced row echelon form with the highest bit as the leading column.

    Returns ``(basis, pivots)`` with zero rows dropped, sorted by decreasing
    pivot.  The result is unique per row span, so it doubles as a canonical
    key for subgroups.
    """
    work = [r for r in rows if r]
    basis: list[int] = []
    pivots: list[int] = []
    width = max((r.bit_length() for r in work), default=0)
    for col in range(width - 1, -1, -1):
        hit = next((i for i, r in enumerate(work) if (r >> col) & 1), None)
        if hit is None:
            continue
        piv = work.pop(hit)
        work = [r ^ piv if (r >> col) & 1 else r for r in work]
        basis = [b ^ piv if (b >> col) & 1 else b for b in basis]
        basis.append(piv)
        pivots.append(col)
    return basis, pivots


def rank(rows: Sequence[int]) -> int:
    return len(rref(rows)[0])


def find_dependency(rows: Sequence[int]) -> list[int] | None:
    """Indices of a subset of ``rows`` that XORs to zero, or None if independent."""
    basis: list[tuple[int, int, int]] = []  # (row, pivot, combination mask)
    for idx, r in enumerate(rows):
        combo = 1 << idx
        for b, p, c in basis:
            if (r >> p) & 1:
                r ^= b
                combo ^= c
        if r == 0:
            return [i for i in range(len(rows)) if (combo >> i) & 1]
        basis.append((r, r.bit_length() - 1, combo))
    return None


def nullspace(rows: Sequence[int], width: int) -> list[int]:
    """Basis of ``{v : popcount(v & r) even for every r in rows}``."""
    basis, pivots = rref(rows)
    pivot_set = set(pivots)
    out = []
    for free in range(width):
        if free in pivot_set:
            continue
        v = 1 << free
        for b, p in zip(basis, pivots):
            if (b >> free) & 1:
                v |= 1 << p
        out.append(v)
    return out


def span(generators: Sequence[int]) -> list[int]:
    """All XOR combinations, ordered by binary counting with generator 0 as the top bit."""
    k = len(generators)
    elems = [0] * (1 << k)
    for i in range(1, 1 << k):
        low = i & -i
        j = low.bit_length() - 1
        elems[i] = elems[i ^ low] ^ generators[k - 1 - j]
    return elems


def solve(rows: Sequence[int], target: int) -> int | None:
    """Mask ``m`` over ``rows`` with XOR of selected rows equal to ``target``."""
    basis: list[tuple[int, int, int]] = []
    for idx, r in enumerate(rows):
        combo = 1 << idx
        for b, p, c in basis:
            if (r >> p) & 1:
                r ^= b
                combo ^= c
        if r:
            basis.append((r, r.bit_length() - 1, combo))
    combo = 0
    for b, p, c in basis:
        if (target >> p) & 1:
            target ^= b
            combo ^= c
    return combo if target == 0 else None


def iter_subspaces(width: int, dim: int) -> Iterator[list[int]]:
    """Every ``dim``-dimensional subspace of GF(2)^width, once each, as an RREF basis."""
    for pivots in combinations(range(width - 1, -1, -1), dim):
        slots = [[c for c in range(p) if c not in pivots] for p in pivots]
        total = sum(len(s) for s in slots)
        for fill in range(1 << total):
            rows = []
            for p, cols in zip(pivots, slots):
                row = 1 << p
                for c in cols:
                    if fill & 1:
                        row |= 1 << c
                    fill >>= 1
                rows.append(row)
            yield rows
