"""Acceptance criteria 1-11, each at its stated tolerance and runtime.

Every criterion records one pass/fail line; the lines are repeated in the
terminal summary under "acceptance criteria".
"""

import itertools
import json
import time

import numpy as np
import pytest

from localenc import gf2
from localenc.audit import reproduction_report
from localenc.circuits import ghz_circuit, graph_state_circuit, random_clifford_circuit, random_graph
from localenc.cli import main as cli_main
from localenc.encoders import (
    EncoderSet,
    circuit_encoder,
    constructive_w_encoder,
    dense_coding_check,
    four_two_encoder,
    inductive_extend,
    product_encoder,
    two_qubit_encoder,
    verify_encoder,
    w3_encoder,
    w_generators,
    xi_state,
    zero_encoder,
)
from localenc.group import (
    build_commutative_set,
    q_operators,
    random_coefficients,
    sample_pseudo_clifford,
    x_generators,
)
from localenc.pauli import PauliString, all_paulis, commutes, multiply
from localenc.search import SearchProblem, clique_search, subgroup_search
from localenc.state import (
    apply_circuit,
    apply_pauli_sum,
    product_state,
    random_state,
    symmetric_state,
    w_unitary,
    zero_state,
)

from conftest import dense_apply, dense_of, record_criterion
from search_oracle import brute_force_subgroups

GRAM_TOL = 1e-10


def _canonical(result):
    return {tuple(gf2.rref([g.key for g in s.generators])[0]) for s in result.solutions}


def _random_pauli(n, rng):
    return PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)), int(rng.integers(4)))


class TestCriterion01Algebra:
    def test_multiply_and_commute_match_dense(self):
        start = time.perf_counter()
        mismatches = 0
        cases = 0
        for n in (1, 2):
            everything = [PauliString(n, x, z, ph) for x in range(1 << n) for z in range(1 << n) for ph in range(4)]
            mats = {p: dense_of(p) for p in everything}
            for a, b in itertools.product(everything, repeat=2):
                prod = mats[a] @ mats[b]
                mismatches += not np.array_equal(dense_of(multiply(a, b)), prod)
                mismatches += commutes(a, b) != np.array_equal(prod, mats[b] @ mats[a])
                cases += 1
        rng = np.random.default_rng(1)
        for k in range(10**4):
            n = 1 + k % 8
            a, b = _random_pauli(n, rng), _random_pauli(n, rng)
            # Paulis are monomial matrices: two probe vectors pin down the product exactly
            probe = rng.standard_normal((1 << n, 2)) + 1j * rng.standard_normal((1 << n, 2))
            ab, ba = dense_apply(a, dense_apply(b, probe)), dense_apply(b, dense_apply(a, probe))
            mismatches += not np.allclose(dense_apply(multiply(a, b), probe), ab, atol=1e-12)
            mismatches += commutes(a, b) != np.allclose(ab, ba, atol=1e-12)
            cases += 1
        elapsed = time.perf_counter() - start
        ok = mismatches == 0 and elapsed < 10
        record_criterion(1, ok, f"{cases} product/commutation cases, {mismatches} mismatches, {elapsed:.1f} s")
        assert ok


class TestCriterion02ZeroAndProduct:
    def test_identity_gram(self):
        start = time.perf_counter()
        worst = 0.0
        for n in range(1, 11):
            rep = verify_encoder(zero_state(n), zero_encoder(n), GRAM_TOL)
            assert rep.passed, n
            worst = max(worst, rep.max_offdiag)
        rng = np.random.default_rng(2)
        for _ in range(200):
            n = int(rng.integers(1, 7))
            thetas, phis = rng.uniform(0, np.pi, n), rng.uniform(-np.pi, np.pi, n)
            rep = verify_encoder(product_state(thetas, phis), product_encoder(phis), GRAM_TOL)
            assert rep.passed
            worst = max(worst, rep.max_offdiag)
        elapsed = time.perf_counter() - start
        ok = elapsed < 30
        record_criterion(2, ok, f"zero n=1..10 and 200 product states pass, worst offdiag {worst:.1e}, {elapsed:.1f} s")
        assert ok


class TestCriterion03Stabilizer:
    def test_conjugated_encoders(self):
        start = time.perf_counter()
        rng = np.random.default_rng(3)
        count = 0
        for n in range(2, 9):
            circuits = [random_clifford_circuit(n, 4 * n, rng) for _ in range(100)]
            circuits.append(ghz_circuit(n))
            circuits += [graph_state_circuit(n, random_graph(n, rng)) for _ in range(20)]
            for c in circuits:
                rep = verify_encoder(apply_circuit(c, zero_state(n)), circuit_encoder(c), GRAM_TOL)
                assert rep.passed, c.to_lines()
                count += 1
        elapsed = time.perf_counter() - start
        ok = elapsed < 120
        record_criterion(3, ok, f"{count} stabilizer states (random Clifford, GHZ, graph) n=2..8 pass, {elapsed:.1f} s")
        assert ok


class TestCriterion04TwoQubit:
    def test_random_two_qubit_states(self):
        start = time.perf_counter()
        rng = np.random.default_rng(4)
        for _ in range(500):
            s = random_state(2, rng)
            assert verify_encoder(s, two_qubit_encoder(s), GRAM_TOL).passed
        elapsed = time.perf_counter() - start
        ok = elapsed < 10
        record_criterion(4, ok, f"500 random two-qubit states pass, {elapsed:.1f} s")
        assert ok


class TestCriterion05WFamily:
    def test_w_family(self):
        start = time.perf_counter()
        for n in range(3, 9):
            e = constructive_w_encoder(n)
            for m in (1, n - 1):
                assert verify_encoder(symmetric_state(n, m), e, GRAM_TOL).passed, (n, m)
            u_state = apply_pauli_sum(w_unitary(n), zero_state(n))
            assert np.max(np.abs(u_state.amplitudes - symmetric_state(n, 1).amplitudes)) < 1e-12
        for n in range(2, 13):
            terms = [p for _, p in w_unitary(n).terms]
            for a, b in itertools.combinations(terms, 2):
                # symplectic form computed directly from the masks
                form = (bin(a.x & b.z).count("1") + bin(a.z & b.x).count("1")) % 2
                assert form == 1
        elapsed = time.perf_counter() - start
        ok = elapsed < 60
        record_criterion(5, ok, f"|n,1>,|n,n-1> pass n=3..8, U|0> = |n,1> to 1e-12, terms anticommute n<=12, {elapsed:.1f} s")
        assert ok


class TestCriterion06Xi:
    def test_random_weights(self):
        start = time.perf_counter()
        rng = np.random.default_rng(6)
        for n in range(3, 7):
            e = constructive_w_encoder(n)
            for _ in range(100):
                w = rng.standard_normal(n)
                w /= np.linalg.norm(w)
                assert verify_encoder(xi_state(w), e, GRAM_TOL).passed
        elapsed = time.perf_counter() - start
        record_criterion(6, True, f"400 random weight vectors n=3..6 pass, {elapsed:.1f} s")


def _five_qubit_bases():
    """Same-set bases for |6,3>: Pauli subgroups encoding both |5,3> and |5,2>, plus the w3 chain."""
    found = []
    for m in (3, 2):
        result = subgroup_search(SearchProblem(symmetric_state(5, m), max_solutions=10**6, max_nodes=10**8))
        assert result.exhausted
        found.append({tuple(str(p) for p in s.encoder.elements) for s in result.solutions})
    common = [EncoderSet(5, tuple(PauliString.from_label(x) for x in labels), "search") for labels in found[0] & found[1]]
    return common + [inductive_extend(inductive_extend(w3_encoder()))]


class TestCriterion07Inductive:
    def test_inductive_audit(self):
        start = time.perf_counter()
        x1 = EncoderSet(1, (PauliString.from_label("I"), PauliString.from_label("X")), "x1")
        two_one = verify_encoder(symmetric_state(2, 1), inductive_extend(x1), GRAM_TOL)
        ext4 = inductive_extend(w3_encoder())
        four_two = verify_encoder(symmetric_state(4, 2), ext4, GRAM_TOL)
        four_one = verify_encoder(symmetric_state(4, 1), ext4, GRAM_TOL)
        overlap = max(o for _, _, o in four_one.offenders)
        report = reproduction_report()
        flagged = {(r.n, r.m) for r in report.rows if r.flag == "DISAGREE"}
        bases = _five_qubit_bases()
        six_three = any(verify_encoder(symmetric_state(6, 3), inductive_extend(b), GRAM_TOL).passed for b in bases)
        elapsed = time.perf_counter() - start

        assert two_one.passed and four_two.passed
        assert not four_one.passed and abs(overlap - 0.5) <= 1e-10
        assert (4, 1) in flagged and "DISAGREE" in report.to_table()
        assert elapsed < 60
        record_criterion(
            7,
            six_three,
            f"|2,1> pass, |4,2> pass, |4,1> fails with overlap {overlap:.12f}, audit flags {len(flagged)} claims; "
            f"|6,3> from a valid same-set base: {'pass' if six_three else 'no valid base exists (strict xfail below)'}",
        )

    @pytest.mark.xfail(strict=True, reason="no Pauli set encodes |5,2>, so |6,3> has no valid same-set base")
    def test_six_three_from_valid_base(self):
        bases = _five_qubit_bases()
        assert any(verify_encoder(symmetric_state(6, 3), inductive_extend(b), GRAM_TOL).passed for b in bases)


class TestCriterion08Explicit:
    def test_verdict_recorded_and_reproducible(self):
        first, second = reproduction_report(), reproduction_report()
        rows = [r for r in first.rows if r.construction == "explicit_42" and (r.n, r.m) == (4, 2)]
        assert len(rows) == 1
        data = rows[0].to_json()
        assert {"pass", "max_offdiag", "min_diag", "offenders"} <= set(data)
        enc = four_two_encoder()
        assert len(enc.elements) == 16 and enc.elements[8].letters == "XZZZ"
        assert verify_encoder(symmetric_state(4, 2), enc, GRAM_TOL).dumps() == rows[0].report.dumps()
        identical = first.dumps() == second.dumps() and first.to_csv() == second.to_csv()
        record_criterion(
            8,
            identical,
            f"explicit |4,2> verdict {'pass' if data['pass'] else 'FAIL'} (max offdiag {data['max_offdiag']:.1e}), "
            f"audit byte-identical across runs",
        )
        assert identical


class TestCriterion09Group:
    def test_samples_and_centralizers(self):
        start = time.perf_counter()
        rng = np.random.default_rng(9)
        samples = 0
        for n in range(1, 7):
            xgens = x_generators(n)
            xops = build_commutative_set(xgens)
            for _ in range(50):
                s = sample_pseudo_clifford(xgens, xops, random_coefficients(len(xops), rng))
                assert s.gram.passed and verify_encoder(s.state, s.encoder, 1e-9).passed
                c = random_clifford_circuit(n, 4 * n, rng)
                coeffs = [0.0] + random_coefficients(n, rng)
                s = sample_pseudo_clifford(w_generators(n), q_operators(n), coeffs, c)
                assert s.gram.passed and verify_encoder(s.state, s.encoder, 1e-9).passed
                samples += 2
        checked = 0
        for n in range(1, 5):
            everything = all_paulis(n)
            gen_sets = [[p] for p in everything[1:]] + [x_generators(n), w_generators(n)]
            for k in range(2, n + 1):
                for _ in range(20):
                    picks = rng.choice(np.arange(1, len(everything)), size=k, replace=False)
                    gens = [everything[i] for i in picks]
                    if gf2.rank([g.key for g in gens]) == k:
                        gen_sets.append(gens)
            for gens in gen_sets:
                brute = [p for p in everything if all(commutes(p, g) for g in gens)]
                assert sorted(build_commutative_set(gens), key=lambda p: p.key) == sorted(brute, key=lambda p: p.key)
                checked += 1
        elapsed = time.perf_counter() - start
        record_criterion(9, True, f"{samples} pseudo-Clifford samples n=1..6 pass at 1e-9, {checked} centralizers match brute force, {elapsed:.1f} s")


class TestCriterion10DenseCoding:
    def test_random_sender_unitaries(self):
        from scipy.stats import unitary_group

        rng = np.random.default_rng(10)
        for n in (1, 2):
            paulis = all_paulis(n)
            mats = np.stack([p.to_matrix() for p in paulis])
            traces = np.abs(np.einsum("iab,jab->ij", mats.conj(), mats))
            trace_ok = np.allclose(traces, (1 << n) * np.eye(4**n), atol=GRAM_TOL)
            for _ in range(50):
                u = unitary_group.rvs(1 << n, random_state=rng)
                rep = dense_coding_check(u, tol=GRAM_TOL)
                assert rep.passed and rep.passed == trace_ok
                assert rep.n == n
        record_criterion(10, True, "100 Haar sender unitaries n=1,2 give 4^n orthogonal states; trace check agrees")


_BRUTE_STATES = {
    "|2,0>": lambda: zero_state(2),
    "|3,1>": lambda: symmetric_state(3, 1),
    "|4,1>": lambda: symmetric_state(4, 1),
    "|4,2>": lambda: symmetric_state(4, 2),
    "graph4": lambda: apply_circuit(graph_state_circuit(4, [(0, 1), (1, 2), (2, 3), (0, 3)]), zero_state(4)),
}


class TestCriterion11Search:
    def test_soundness_and_campaign(self, tmp_path):
        start = time.perf_counter()
        revalidated = 0
        for s in (symmetric_state(3, 1), symmetric_state(4, 2), random_state(3, np.random.default_rng(11))):
            for result in (
                subgroup_search(SearchProblem(s, max_solutions=50)),
                subgroup_search(SearchProblem(s, max_solutions=50, strategy="cosets")),
                clique_search(SearchProblem(s, mode="clique", max_solutions=5, max_nodes=20000, seed=3)),
            ):
                for sol in result.solutions:
                    assert verify_encoder(s, sol.encoder, GRAM_TOL).passed
                    revalidated += 1
        matched = []
        for name, make in _BRUTE_STATES.items():
            s = make()
            want = brute_force_subgroups(s.amplitudes, s.n)
            for strategy in ("structured", "cosets"):
                result = subgroup_search(SearchProblem(s, max_solutions=10**6, max_nodes=10**8, strategy=strategy))
                assert result.exhausted and _canonical(result) == want, (name, strategy)
            matched.append(f"{name}:{len(want)}")
        out = tmp_path / "search_6_2.json"
        code = cli_main(["search", "--sym", "6", "2", "--nodes", "1e7", "--seconds", "600", "--out", str(out)])
        data = json.loads(out.read_text())
        assert code == 0 and data["budgets"]["nodes"] == 10**7
        elapsed = time.perf_counter() - start
        verdict = "exhausted, no subgroup encoder" if data["exhausted"] and not data["solutions"] else (
            f"{len(data['solutions'])} solutions" if data["solutions"] else "budget reached")
        ok = elapsed < 600
        record_criterion(
            11,
            ok,
            f"{revalidated} solutions revalidate, brute force matched ({', '.join(matched)}), "
            f"|6,2> campaign: {verdict} after {data['nodes']} nodes, {elapsed:.0f} s",
        )
        assert ok
