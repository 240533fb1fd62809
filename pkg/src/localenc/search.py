"""Search for Pauli encoder sets of a given state.

Both searches work on packed Pauli keys (``x << n | z``).  For a set of
Pauli elements the Gram entry ``<psi|a^dagger b|psi>`` has the magnitude of
the expectation of the projective product ``a ^ b``, so everything reduces
to the table of Pauli expectations of the state.

``subgroup_search`` has two exhaustive strategies.  ``structured`` (the
default) writes every subgroup G uniquely as its pure-Z part K, an RREF
basis of its X-projection, and z-parts reduced modulo K, then extends the
X basis one generator at a time in vectorized batches.  ``cosets``
branches include/exclude on cosets of the current subgroup, picking the
least constraining candidate first.  Both visit each subgroup once.
``clique_search`` looks for 2**n mutually compatible Paulis without
requiring closure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .encoders import EncoderSet, GramReport, verify_encoder
from .pauli import PauliString
from .state import RegimeError, StateVector

EXPECTATION_LIMIT = 8
SUBGROUP_LIMIT = 6
CLIQUE_LIMIT = 5
ZERO_TOL = 1e-9
FINAL_TOL = 1e-10
STRATEGIES = ("structured", "cosets")
_BATCH = 1 << 22


def _fwht(a: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard transform along the last axis (Sylvester order, unnormalized)."""
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        a = a.reshape(*lead, size // (2 * h), 2, h)
        a = np.stack((a[..., 0, :] + a[..., 1, :], a[..., 0, :] - a[..., 1, :]), axis=-2)
        h *= 2
    return a.reshape(*lead, size)


@dataclass(frozen=True, eq=False)
class ExpectationTable:
    """``<s|p|s>`` for every Hermitian Pauli, indexed by packed key."""

    n: int
    values: np.ndarray

    def __getitem__(self, p: PauliString) -> float:
        sign = 1 - 2 * ((p.letter_phase // 2) & 1)
        return sign * float(self.values[p.key])

    def zero_keys(self, tol: float = ZERO_TOL) -> np.ndarray:
        keys = np.nonzero(np.abs(self.values) < tol)[0]
        return keys[keys != 0]


def expectation_table(s: StateVector) -> ExpectationTable:
    if s.n > EXPECTATION_LIMIT:
        raise RegimeError(f"expectation table is limited to {EXPECTATION_LIMIT} qubits")
    dim = 1 << s.n
    psi = s.amplitudes
    idx = np.arange(dim)
    xs = idx[:, None]
    # row x: conj(psi[c ^ x]) psi[c]; its Walsh transform over c gives <X^x Z^z>
    rows = np.conj(psi[xs ^ idx[None, :]]) * psi[None, :]
    raw = _fwht(rows)
    # Hermitian letters = i^{|x & z|} X^x Z^z
    yc = np.bitwise_count(xs & idx[None, :]).astype(np.int64) % 4
    vals = (1j**yc) * raw
    return ExpectationTable(s.n, np.ascontiguousarray(vals.real).reshape(-1))


@dataclass
class SearchProblem:
    state: StateVector
    mode: str = "subgroup"
    max_nodes: int = 1_000_000
    max_seconds: float = 600.0
    max_solutions: int = 16
    seed: int = 0
    strategy: str = "structured"

    def __post_init__(self):
        if self.mode not in ("subgroup", "clique"):
            raise ValueError(f"unknown search mode {self.mode!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown subgroup strategy {self.strategy!r}")
        if self.max_nodes <= 0 or self.max_seconds <= 0 or self.max_solutions <= 0:
            raise ValueError("search budgets must be positive")
        self.state.require_normalized()


@dataclass
class Solution:
    encoder: EncoderSet
    gram: GramReport
    generators: list[PauliString] | None = None

    def to_json(self) -> dict:
        out: dict = {}
        if self.generators is not None:
            out["generators"] = [str(g) for g in self.generators]
        out["elements"] = [str(p) for p in self.encoder.elements]
        out["gram"] = self.gram.to_json()
        return out


@dataclass
class SearchResult:
    mode: str
    solutions: list[Solution] = field(default_factory=list)
    nodes: int = 0
    exhausted: bool = False
    best_size: int = 0
    budgets: dict = field(default_factory=dict)
    seed: int = 0
    strategy: str | None = None

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "strategy": self.strategy,
            "budgets": self.budgets,
            "seed": self.seed,
            "exhausted": self.exhausted,
            "nodes": self.nodes,
            "best_size": self.best_size,
            "solutions": [s.to_json() for s in self.solutions],
        }


class _Budget:
    def __init__(self, problem: SearchProblem):
        self.nodes = 0
        self.max_nodes = problem.max_nodes
        self.deadline = time.monotonic() + problem.max_seconds
        self.hit = False

    def tick(self) -> bool:
        self.nodes += 1
        if self.nodes > self.max_nodes or (self.nodes % 256 == 0 and time.monotonic() > self.deadline):
            self.hit = True
        return not self.hit

    def take(self, count: int) -> int:
        """Admit up to ``count`` nodes at once; fewer means the budget ran out."""
        allowed = min(count, self.max_nodes - self.nodes)
        self.nodes += allowed
        if allowed < count or time.monotonic() > self.deadline:
            self.hit = True
        return allowed


def _validated(s: StateVector, keys: list[int], provenance: str) -> tuple[EncoderSet, GramReport]:
    elems = tuple(PauliString.from_key(s.n, k) for k in keys)
    enc = EncoderSet(s.n, elems, provenance)
    return enc, verify_encoder(s, enc, FINAL_TOL)


# subgroup search ---------------------------------------------------------


def _pick(cand: np.ndarray, in_cand: np.ndarray) -> int:
    """Candidate losing the fewest other candidates when included; ties to the smallest key."""
    pool = cand if cand.size <= 1024 else cand[:256]
    keep = in_cand[pool[:, None] ^ cand[None, :]].sum(axis=1)
    return int(pool[np.argmax(keep)])


def subgroup_search(problem: SearchProblem) -> SearchResult:
    """Pauli subgroups of order 2**n whose nontrivial elements all have zero expectation."""
    s = problem.state
    if s.n > SUBGROUP_LIMIT:
        raise RegimeError(f"subgroup search is limited to {SUBGROUP_LIMIT} qubits")
    allowed = np.abs(expectation_table(s).values) < ZERO_TOL
    allowed[0] = False
    budget = _Budget(problem)
    result = SearchResult(
        "subgroup",
        budgets={"nodes": problem.max_nodes, "seconds": problem.max_seconds, "solutions": problem.max_solutions},
        seed=problem.seed,
        strategy=problem.strategy,
    )
    run = _structured_search if problem.strategy == "structured" else _coset_search
    finished = run(problem, allowed, budget, result)
    result.nodes = budget.nodes
    result.exhausted = finished and not budget.hit
    result.best_size = (1 << s.n) if result.solutions else 0
    return result


def _emit(problem: SearchProblem, result: SearchResult, gens: list[int], seen: set) -> bool:
    """Record a subgroup by its canonical RREF key; False once the solution cap is reached."""
    s = problem.state
    key = tuple(gf2.rref(gens)[0])
    if key not in seen:
        seen.add(key)
        enc, gram = _validated(s, [int(k) for k in gf2.span(list(key))], "search")
        if not gram.passed:
            raise AssertionError("subgroup search emitted a set that fails the Gram oracle")
        result.solutions.append(Solution(enc, gram, [PauliString.from_key(s.n, k) for k in key]))
    return len(result.solutions) < problem.max_solutions


def _structured_search(problem: SearchProblem, allowed: np.ndarray, budget: _Budget, result: SearchResult) -> bool:
    n = problem.state.n
    full = 1 << n
    seen: set[tuple[int, ...]] = set()
    for d in range(n + 1):
        for kbasis in gf2.iter_subspaces(n, d):
            kel = np.array(gf2.span(kbasis), dtype=np.int64)
            if not allowed[kel[1:]].all():
                continue
            if d == n:
                if not _emit(problem, result, list(kbasis), seen):
                    return False
                continue
            kpiv = sum(1 << (r.bit_length() - 1) for r in kbasis)
            # z-parts reduced modulo K: zero on the pivot columns of K
            zc = np.array([z for z in range(full) if not z & kpiv], dtype=np.int64)
            for xbasis in gf2.iter_subspaces(n, n - d):
                if not _extend_basis(problem, result, allowed, budget, xbasis, kbasis, kel, zc, seen):
                    return False
    return True


def _extend_basis(problem, result, allowed, budget, xbasis, kbasis, kel, zc, seen) -> bool:
    """Assign z-parts to the X basis level by level; rows of ``zs`` hold the z of each span element."""
    n = problem.state.n
    xspans = [np.zeros(1, dtype=np.int64)]
    for b in xbasis:
        xspans.append(np.concatenate([xspans[-1], xspans[-1] ^ b]))

    def descend(zs: np.ndarray, level: int) -> bool:
        if level == len(xbasis):
            for row in zs:
                gens = [(b << n) | int(row[1 << j]) for j, b in enumerate(xbasis)]
                if not _emit(problem, result, gens + list(kbasis), seen):
                    return False
            return True
        width = 1 << level
        newx = (xspans[level] ^ xbasis[level]) << n
        step = max(1, _BATCH // (zc.size * width * kel.size))
        for start in range(0, zs.shape[0], step):
            part = zs[start : start + step]
            newz = part[:, None, :] ^ zc[None, :, None]
            keys = newx[None, None, :] | newz
            ok = allowed[keys[..., None] ^ kel].all(axis=(2, 3))
            rows, cols = np.nonzero(ok)
            if rows.size == 0:
                continue
            keep = budget.take(rows.size)
            rows, cols = rows[:keep], cols[:keep]
            ext = np.concatenate([part[rows], newz[rows, cols]], axis=1)
            if not descend(ext, level + 1) or budget.hit:
                return False
        return True

    return descend(np.zeros((1, 1), dtype=np.int64), 0)


def _coset_search(problem: SearchProblem, allowed: np.ndarray, budget: _Budget, result: SearchResult) -> bool:
    s = problem.state
    n = s.n
    size = 1 << (2 * n)
    target = 1 << n
    seen: set[tuple[int, ...]] = set()

    def recurse(gens: list[int], group: np.ndarray, cand: np.ndarray) -> bool:
        """Returns False once the search must stop."""
        if not budget.tick():
            return False
        if group.size == target:
            return _emit(problem, result, gens, seen)
        while cand.size and group.size + cand.size >= target:
            in_cand = np.zeros(size, dtype=bool)
            in_cand[cand] = True
            p = _pick(cand, in_cand)
            coset = group ^ p
            # include p: survivors c need c ^ p to be a candidate too
            in_coset = np.zeros(size, dtype=bool)
            in_coset[coset] = True
            keep = in_cand[cand ^ p] & ~in_coset[cand]
            if not recurse(gens + [p], np.concatenate([group, coset]), cand[keep]):
                return False
            # exclude p and its whole coset
            cand = cand[~in_coset[cand]]
            if not budget.tick():
                return False
        return True

    start = np.nonzero(allowed)[0]
    return recurse([], np.zeros(1, dtype=np.int64), start.astype(np.int64))


# clique search -----------------------------------------------------------


def clique_search(problem: SearchProblem) -> SearchResult:
    """Randomized greedy cliques with one-swap improvement in the zero-overlap graph.

    The graph is a Cayley graph (``a ~ b`` iff ``a ^ b`` has zero expectation),
    so every clique can be translated to contain the identity; cliques are
    grown from the identity.
    """
    s = problem.state
    n = s.n
    if n > CLIQUE_LIMIT:
        raise RegimeError(f"clique search is limited to {CLIQUE_LIMIT} qubits")
    table = expectation_table(s)
    zero = np.abs(table.values) < ZERO_TOL
    zero[0] = False
    base = np.nonzero(zero)[0].astype(np.int64)
    target = 1 << n
    rng = np.random.default_rng(problem.seed)
    budget = _Budget(problem)
    result = SearchResult(
        "clique",
        budgets={"nodes": problem.max_nodes, "seconds": problem.max_seconds, "solutions": problem.max_solutions},
        seed=problem.seed,
    )
    seen: set[tuple[int, ...]] = set()

    def common(clique: list[int]) -> np.ndarray:
        cand = base
        for v in clique[1:]:
            cand = cand[zero[cand ^ v]]
        return cand[~np.isin(cand, clique)]

    def grow(clique: list[int], cand: np.ndarray) -> list[int]:
        clique = list(clique)
        while cand.size and len(clique) < target and budget.tick():
            deg = zero[cand[:, None] ^ cand[None, :]].sum(axis=1)
            best = np.nonzero(deg == deg.max())[0]
            v = int(cand[best[rng.integers(best.size)]])
            clique.append(v)
            cand = cand[zero[cand ^ v]]
        return clique

    def improve(clique: list[int]) -> list[int]:
        improved = True
        while improved and len(clique) < target and not budget.hit:
            improved = False
            for drop in range(1, len(clique)):
                rest = clique[:drop] + clique[drop + 1 :]
                cand = common(rest)
                cand = cand[cand != clique[drop]]
                if cand.size < 2:
                    continue
                trial = grow(rest, cand)
                if len(trial) > len(clique):
                    clique = trial
                    improved = True
                    break
        return clique

    while len(result.solutions) < problem.max_solutions and not budget.hit:
        clique = improve(grow([0], base.copy()))
        result.best_size = max(result.best_size, len(clique))
        if len(clique) >= target:
            key = tuple(sorted(clique[:target]))
            if key not in seen:
                seen.add(key)
                enc, gram = _validated(s, list(key), "search")
                if not gram.passed:
                    raise AssertionError("clique search emitted a set that fails the Gram oracle")
                result.solutions.append(Solution(enc, gram))
        if target > base.size + 1:
            break
    result.nodes = budget.nodes
    result.exhausted = False
    return result


def run_search(problem: SearchProblem) -> SearchResult:
    if problem.mode == "subgroup":
        return subgroup_search(problem)
    return clique_search(problem)
