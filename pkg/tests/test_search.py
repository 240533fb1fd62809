import math

import numpy as np
import pytest

from localenc import gf2
from localenc.circuits import ghz_circuit
from localenc.encoders import verify_encoder, w_generators
from localenc.pauli import PauliString, PauliSubgroup, all_paulis
from localenc.search import SearchProblem, clique_search, expectation_table, run_search, subgroup_search
from localenc.state import RegimeError, StateVector, apply_circuit, random_state, symmetric_state, zero_state

from conftest import dense_of
from search_oracle import brute_force_subgroups


def _all(problem_state, **kw):
    return SearchProblem(problem_state, max_solutions=10**6, max_nodes=10**8, **kw)


class TestExpectationTable:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_against_dense(self, n, rng):
        s = random_state(n, rng)
        table = expectation_table(s)
        for p in all_paulis(n):
            want = (s.amplitudes.conj() @ dense_of(p) @ s.amplitudes).real
            assert table.values[p.key] == pytest.approx(want, abs=1e-12)

    def test_sign_aware_lookup(self):
        table = expectation_table(zero_state(2))
        assert table[PauliString.from_label("ZZ")] == 1
        assert table[PauliString.from_label("-ZI")] == -1

    def test_known_values(self):
        assert expectation_table(symmetric_state(3, 1))[PauliString.from_label("XXI")] == pytest.approx(2 / 3)
        zero = expectation_table(zero_state(3))
        nonzero = {k for k in range(64) if abs(zero.values[k]) > 1e-12}
        assert nonzero == {p.key for p in all_paulis(3) if set(p.letters) <= {"I", "Z"}}

    def test_regime(self):
        with pytest.raises(RegimeError):
            expectation_table(zero_state(9))


class TestProblem:
    def test_validation(self):
        with pytest.raises(ValueError):
            SearchProblem(zero_state(2), mode="sat")
        with pytest.raises(ValueError):
            SearchProblem(zero_state(2), max_nodes=0)
        with pytest.raises(ValueError):
            SearchProblem(StateVector(1, np.array([1.0, 1.0])))


class TestSubgroupSearch:
    def test_zero_state_includes_x_strings(self):
        result = subgroup_search(_all(zero_state(2)))
        key = PauliSubgroup.from_labels(["XI", "IX"]).canonical_key
        assert key in {tuple(gf2.rref([g.key for g in s.generators])[0]) for s in result.solutions}
        assert result.exhausted

    def test_three_one_finds_constructive_set(self):
        result = subgroup_search(_all(symmetric_state(3, 1)))
        keys = {tuple(gf2.rref([g.key for g in s.generators])[0]) for s in result.solutions}
        target = PauliSubgroup(3, tuple(w_generators(3))).canonical_key
        assert target in keys

    @pytest.mark.parametrize(
        "name,state",
        [
            ("zero2", zero_state(2)),
            ("bell", StateVector(2, np.array([1, 0, 0, 1]) / math.sqrt(2))),
            ("sym31", symmetric_state(3, 1)),
            ("ghz3", apply_circuit(ghz_circuit(3), zero_state(3))),
            ("random3", random_state(3, np.random.default_rng(5))),
        ],
    )
    @pytest.mark.parametrize("strategy", ["structured", "cosets"])
    def test_matches_brute_force(self, name, state, strategy):
        result = subgroup_search(_all(state, strategy=strategy))
        got = {tuple(gf2.rref([g.key for g in s.generators])[0]) for s in result.solutions}
        assert result.exhausted
        assert got == brute_force_subgroups(state.amplitudes, state.n)

    def test_every_solution_revalidates(self):
        result = subgroup_search(SearchProblem(symmetric_state(4, 2), max_solutions=20))
        assert len(result.solutions) == 20 and not result.exhausted
        for sol in result.solutions:
            assert verify_encoder(symmetric_state(4, 2), sol.encoder, 1e-10).passed
            assert sol.gram.passed

    @pytest.mark.parametrize("n,m,count", [(4, 1, 2816), (4, 2, 8192)])
    def test_strategies_agree(self, n, m, count):
        keys = []
        for strategy in ("structured", "cosets"):
            result = subgroup_search(_all(symmetric_state(n, m), strategy=strategy))
            assert result.exhausted
            keys.append({tuple(gf2.rref([g.key for g in s.generators])[0]) for s in result.solutions})
        assert keys[0] == keys[1] and len(keys[0]) == count

    def test_zero_state_count(self):
        # every subgroup avoiding pure-Z elements is the graph of a linear map z = Mx
        result = subgroup_search(_all(zero_state(3)))
        assert result.exhausted and len(result.solutions) == 2**9

    def test_five_two_has_no_subgroup(self):
        result = subgroup_search(_all(symmetric_state(5, 2)))
        assert result.exhausted and result.solutions == []

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            SearchProblem(zero_state(2), strategy="greedy")

    @pytest.mark.parametrize("strategy", ["structured", "cosets"])
    def test_budget_stops_search(self, strategy):
        result = subgroup_search(SearchProblem(symmetric_state(4, 2), max_nodes=50, strategy=strategy))
        assert not result.exhausted and result.nodes <= 51

    def test_json_schema(self):
        data = subgroup_search(SearchProblem(symmetric_state(2, 1), max_solutions=2)).to_json()
        assert set(data) == {"mode", "strategy", "budgets", "seed", "exhausted", "nodes", "best_size", "solutions"}
        assert set(data["solutions"][0]) == {"generators", "elements", "gram"}

    def test_regime(self):
        with pytest.raises(RegimeError):
            subgroup_search(SearchProblem(zero_state(7)))


class TestCliqueSearch:
    def test_zero_state(self):
        result = clique_search(SearchProblem(zero_state(3), mode="clique", max_solutions=2))
        assert result.solutions and result.best_size == 8

    def test_bell_state(self):
        bell = StateVector(2, np.array([1, 0, 0, 1]) / math.sqrt(2))
        result = run_search(SearchProblem(bell, mode="clique", max_solutions=1))
        assert result.solutions and verify_encoder(bell, result.solutions[0].encoder).passed

    def test_deterministic_for_seed(self):
        def run():
            r = clique_search(SearchProblem(symmetric_state(4, 2), mode="clique", seed=7, max_solutions=3))
            return r.to_json()

        assert run() == run()

    def test_regime(self):
        with pytest.raises(RegimeError):
            clique_search(SearchProblem(zero_state(6), mode="clique"))


class TestFiveTwoObstruction:
    """Premises of the argument that no 32-element Pauli set encodes |5,2>.

    Every Z-string has nonzero expectation, so a Pauli set holds exactly
    one element per X-part.  On even-weight X-parts the expectation
    vanishes iff the X- and Z-parts overlap in an odd number of qubits;
    the 16 even-weight elements then need a 15x15 matrix A of rank <= 4
    with A + A^T = J + I, which has rank 14.
    """

    def test_zero_expectation_pattern(self):
        n = 5
        vanish = np.abs(expectation_table(symmetric_state(5, 2)).values) < 1e-9
        for key in range(1, 1 << (2 * n)):
            x, z = key >> n, key & 31
            w = bin(x).count("1")
            assert vanish[key] == (w % 2 == 1 or (w > 0 and bin(x & z).count("1") % 2 == 1))

    def test_rank_of_all_ones_plus_identity(self):
        rows = [((1 << 15) - 1) ^ (1 << i) for i in range(15)]
        assert gf2.rank(rows) == 14

    def test_clique_search_stays_below_target(self):
        result = clique_search(SearchProblem(symmetric_state(5, 2), mode="clique", max_seconds=5))
        assert not result.solutions and result.best_size < 32
