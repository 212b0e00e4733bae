import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import commute_dense, dense, dense_sum, minimum_colouring
from strategies import hamiltonians
from unipart import molecules
from unipart.hamiltonian import PauliHamiltonian, parse
from unipart.partition import (
    AnticommutingPartition,
    compatibility_graph,
    find_violation,
    greedy_color,
    split_set,
    validate,
)

# Exact chromatic number of the H2 compatibility graph, frozen from the
# branch-and-bound oracle: ten diagonal terms commute pairwise.
H2_OPTIMUM = 10


def rebuild(h: PauliHamiltonian, p: AnticommutingPartition) -> np.ndarray:
    out = h.identity_offset * np.eye(2**h.n_qubits, dtype=complex)
    for s, gamma, betas in zip(p.sets, p.gammas, p.betas):
        for j, b in zip(s, betas):
            out += gamma * b * dense(h.terms[j][1].word)
    return out


class TestCompatibilityGraph:
    def test_anticommuting_pair_has_no_edge(self):
        adj = compatibility_graph(parse("1 X\n0.5 Z"))
        assert not adj.any()

    def test_triangle(self):
        adj = compatibility_graph(parse("1 XX\n0.9 YY\n0.8 ZZ"))
        assert adj.sum() == 6
        assert not adj.diagonal().any()

    def test_two_edges(self):
        h = parse("1 ZI\n0.9 IZ\n0.8 XX\n0.7 YY")
        adj = compatibility_graph(h)
        edges = {frozenset((h.terms[a][1].word, h.terms[b][1].word)) for a, b in zip(*np.nonzero(adj))}
        assert edges == {frozenset(("ZI", "IZ")), frozenset(("XX", "YY"))}

    @given(hamiltonians(max_qubits=3, max_terms=10))
    @settings(max_examples=60)
    def test_matches_dense_oracle(self, h):
        words = [op.word for _, op in h.terms]
        adj = compatibility_graph(h)
        for a in range(len(words)):
            for b in range(len(words)):
                assert adj[a, b] == (a != b and commute_dense(words[a], words[b]))


class TestGreedyColor:
    def test_all_commuting_gives_singletons(self):
        p = greedy_color(parse("1 ZI\n0.5 IZ\n0.25 ZZ"))
        assert p.sizes == [1, 1, 1]

    def test_all_anticommuting_gives_one_set(self):
        p = greedy_color(parse("1 X\n0.5 Y\n0.25 Z"))
        assert p.sets == ((0, 1, 2),)
        assert p.gammas[0] == pytest.approx(np.sqrt(1 + 0.25 + 0.0625))

    def test_degenerate_inputs(self):
        assert len(greedy_color(PauliHamiltonian.from_terms(2, []))) == 0
        assert len(greedy_color(parse("1 XY"))) == 1

    def test_h2_near_optimum(self):
        h = molecules.load_hamiltonian("h2")
        words = [op.word for _, op in h.terms]
        adj = np.array([[a != b and commute_dense(a, b) for b in words] for a in words])
        assert minimum_colouring(adj) == H2_OPTIMUM
        p = greedy_color(h)
        assert validate(p, h)
        assert len(p) <= H2_OPTIMUM + 2

    def test_deterministic(self):
        h = molecules.load_hamiltonian("h2")
        assert greedy_color(h) == greedy_color(h)
        assert greedy_color(h, order_seed=3, restarts=4) == greedy_color(h, order_seed=3, restarts=4)

    def test_restarts_never_worse_than_first_draw(self):
        h = molecules.load_hamiltonian("lih")
        one = greedy_color(h, order_seed=11, restarts=1)
        many = greedy_color(h, order_seed=11, restarts=5)
        assert len(many) <= len(one)

    def test_max_set_size(self):
        h = parse("1 X\n0.5 Y\n0.25 Z")
        p = greedy_color(h, max_set_size=2)
        assert p.s_max <= 2 and validate(p, h)
        with pytest.raises(ValueError):
            greedy_color(h, max_set_size=0)

    @given(hamiltonians(max_qubits=4, max_terms=14), st.none() | st.integers(0, 50))
    @settings(max_examples=80)
    def test_always_valid(self, h, seed):
        p = greedy_color(h, order_seed=seed)
        assert find_violation(p, h) is None
        assert len(p) <= len(h)

    @given(hamiltonians(max_qubits=3, max_terms=10))
    @settings(max_examples=40)
    def test_rebuild_matches_dense(self, h):
        p = greedy_color(h)
        terms = [(c, op.word) for c, op in h.terms]
        assert np.abs(rebuild(h, p) - dense_sum(terms, h.n_qubits, h.identity_offset)).max() <= 1e-12

    def test_complete_graph_needs_every_colour(self):
        h = parse("1 ZII\n0.9 IZI\n0.8 IIZ\n0.7 ZZI\n0.6 ZIZ")
        assert len(greedy_color(h)) == len(h)


class TestValidate:
    def test_commuting_pair_rejected(self):
        h = parse("1 ZI\n0.5 IZ")
        p = AnticommutingPartition.from_sets(h, [[0, 1]])
        assert not validate(p, h)
        assert "commute" in find_violation(p, h)

    def test_missing_index(self):
        h = parse("1 X\n0.5 Z")
        p = AnticommutingPartition.from_sets(h, [[0]])
        assert "not covered" in find_violation(p, h)

    def test_duplicate_index(self):
        h = parse("1 X\n0.5 Z")
        p = AnticommutingPartition.from_sets(h, [[0, 1], [1]])
        assert "appears in sets" in find_violation(p, h)

    def test_out_of_range(self):
        h = parse("1 X")
        p = AnticommutingPartition(((0, 3),), (1.0,), ((1.0, 0.0),))
        assert "out of range" in find_violation(p, h)

    def test_bad_betas(self):
        h = parse("1 X\n1 Z")
        p = AnticommutingPartition(((0, 1),), (np.sqrt(2),), ((1.0, 1.0),))
        assert "normalized" in find_violation(p, h)

    def test_dict_round_trip(self):
        h = molecules.load_hamiltonian("h2")
        p = greedy_color(h)
        assert AnticommutingPartition.from_dict(p.to_dict(h)) == p


class TestSplitSet:
    H = parse("1 XIII\n0.9 YIII\n0.8 ZXII\n0.7 ZYII")

    def test_four_into_two(self):
        p = AnticommutingPartition.from_sets(self.H, [[0, 1, 2, 3]])
        assert validate(p, self.H)
        q = split_set(p, self.H, 0, 2)
        assert q.sets == ((0, 1), (2, 3))
        assert validate(q, self.H)

    def test_into_singletons(self):
        p = AnticommutingPartition.from_sets(self.H, [[0, 1, 2, 3]])
        q = split_set(p, self.H, 0, 4)
        assert q.sizes == [1, 1, 1, 1]
        assert list(q.gammas) == [abs(c) for c, _ in self.H.terms]

    def test_one_piece_is_identity(self):
        p = AnticommutingPartition.from_sets(self.H, [[0, 1, 2, 3]])
        assert split_set(p, self.H, 0, 1) is p

    @pytest.mark.parametrize("pieces", [0, 5])
    def test_out_of_range(self, pieces):
        p = AnticommutingPartition.from_sets(self.H, [[0, 1, 2, 3]])
        with pytest.raises(ValueError):
            split_set(p, self.H, 0, pieces)

    @given(st.integers(1, 4))
    def test_split_preserves_reconstruction(self, pieces):
        p = AnticommutingPartition.from_sets(self.H, [[0, 1, 2, 3]])
        q = split_set(p, self.H, 0, pieces)
        assert validate(q, self.H)
        assert np.abs(rebuild(self.H, q) - rebuild(self.H, p)).max() <= 1e-12
