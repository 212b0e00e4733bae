import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense, noncontextual_bruteforce, random_state
from unipart import simulator
from unipart.contextuality import (
    ContextualityError,
    decompose,
    find_contextual_triple,
    is_noncontextual,
    reduce_to_commuting,
)
from unipart.generators import random_noncontextual
from unipart.hamiltonian import PauliHamiltonian, parse
from unipart.pauli import PauliString, commutes

# Z_1, Z_2, X_1X_2, Y_1Y_2 with distinct magnitudes so the canonical order is fixed
TWO_CLIQUES = "0.9 ZI\n0.8 IZ\n0.7 XX\n0.6 YY"


def words(h, idx):
    return [h.terms[i][1].word for i in idx]


def expectation_identity_gap(h, reduced, plans, psi) -> float:
    """``<H>`` against the Z-term sum plus the rotated clique representatives."""
    full = np.vdot(psi, simulator.hamiltonian_matrix(h) @ psi).real
    structure = decompose(h)
    total = h.identity_offset
    for i in structure.z_terms:
        c, op = h.terms[i]
        total += c * np.vdot(psi, dense(op.word) @ psi).real
    for plan in plans:
        u = simulator.plan_matrix(plan)
        sink = simulator.pauli_matrix(plan.sink)
        # the reduced coefficient is gamma times the sign of the sink
        signed_gamma = next(c for c, op in reduced.terms if op == plan.sink.unsigned())
        sign = -1.0 if plan.sink.phase_exp == 2 else 1.0
        total += signed_gamma * sign * np.vdot(psi, u.conj().T @ sink @ u @ psi).real
    return abs(full - total)


class TestIsNoncontextual:
    def test_two_cliques(self):
        assert is_noncontextual(parse(TWO_CLIQUES))

    def test_fully_commuting(self):
        assert is_noncontextual(parse("1 ZI\n0.5 IZ\n0.2 ZZ"))

    def test_single_term(self):
        assert is_noncontextual(parse("1 XY"))

    def test_xi_zi_xz(self):
        h = parse("1 XI\n0.9 ZI\n0.8 XZ")
        words3 = [op.word for _, op in h.terms]
        assert is_noncontextual(h) == noncontextual_bruteforce(words3)

    def test_contextual_example(self):
        h = parse("1 XI\n0.9 IZ\n0.8 ZI\n0.7 IX")
        assert not is_noncontextual(h)
        a, b, c = find_contextual_triple(h)
        pa, pb, pc = (h.terms[i][1] for i in (a, b, c))
        assert commutes(pa, pb) and commutes(pb, pc) and not commutes(pa, pc)

    @given(st.lists(st.text("IXYZ", min_size=3, max_size=3), min_size=1, max_size=6))
    @settings(max_examples=150)
    def test_matches_bruteforce(self, raw):
        h = PauliHamiltonian.from_terms(3, [(1.0 + 0.01 * i, PauliString.from_label(w)) for i, w in enumerate(raw)])
        ws = [op.word for _, op in h.terms]
        assert is_noncontextual(h) == noncontextual_bruteforce(ws)


class TestDecompose:
    def test_two_cliques(self):
        h = parse(TWO_CLIQUES)
        s = decompose(h)
        assert s.z_terms == ()
        assert [words(h, c) for c in s.cliques] == [["ZI", "IZ"], ["XX", "YY"]]
        assert [words(h, d) for d in s.hitting_sets] == [["ZI", "XX"], ["IZ", "YY"]]

    def test_fully_commuting(self):
        h = parse("1 ZI\n0.5 IZ\n0.2 ZZ")
        s = decompose(h)
        assert s.z_terms == (0, 1, 2) and s.cliques == () and s.hitting_sets == ()

    def test_anticommuting_pair(self):
        h = parse("1 X\n0.5 Z")
        s = decompose(h)
        assert s.cliques == ((0,), (1,))
        assert s.hitting_sets == ((0, 1),)

    def test_contextual_raises(self):
        with pytest.raises(ContextualityError, match="contextual"):
            decompose(parse("1 XI\n0.9 IZ\n0.8 ZI\n0.7 IX"))

    @given(st.integers(2, 8), st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_invariants(self, n, seed):
        h = random_noncontextual(n, seed=seed)
        s = decompose(h)
        ops = [op for _, op in h.terms]
        covered = list(s.z_terms) + [i for c in s.cliques for i in c]
        assert sorted(covered) == list(range(len(h)))
        for a, ca in enumerate(s.cliques):
            assert len(ca) <= len(s.cliques[0])
            for b, cb in enumerate(s.cliques):
                for i in ca:
                    for j in cb:
                        assert commutes(ops[i], ops[j]) == (a == b)
        flat = [i for d in s.hitting_sets for i in d]
        assert sorted(flat) == sorted(i for c in s.cliques for i in c)
        for j, d in enumerate(s.hitting_sets):
            assert d[0] == s.cliques[0][j]
            assert len(set(d) & set(s.cliques[0])) == 1
        assert s.to_dict()["cliques"] == [list(c) for c in s.cliques]


class TestReduce:
    def test_two_cliques(self):
        h = parse(TWO_CLIQUES)
        reduced, plans = reduce_to_commuting(h)
        got = {op.word: c for c, op in reduced.terms}
        assert set(got) == {"ZI", "IZ"}
        assert abs(got["ZI"]) == pytest.approx(math.hypot(0.9, 0.7))
        assert abs(got["IZ"]) == pytest.approx(math.hypot(0.8, 0.6))
        assert len(plans) == 2

    def test_fully_commuting_unchanged(self):
        h = parse("1 ZI\n0.5 IZ\n0.2 ZZ")
        reduced, plans = reduce_to_commuting(h)
        assert reduced == h and plans == []

    def test_pair(self):
        h = parse("3 X\n4 Z")
        reduced, plans = reduce_to_commuting(h)
        ((c, op),) = reduced.terms
        assert abs(c) == pytest.approx(5.0)
        # Z is the larger term, so it comes first and is C_1
        assert op.word == "Z"

    def test_contextual_raises(self):
        with pytest.raises(ContextualityError):
            reduce_to_commuting(parse("1 XI\n0.9 IZ\n0.8 ZI\n0.7 IX"))

    @given(st.integers(2, 7), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_output_commutes_and_identity_holds(self, n, seed):
        h = random_noncontextual(n, seed=seed)
        reduced, plans = reduce_to_commuting(h)
        ops = [op for _, op in reduced.terms]
        for i, a in enumerate(ops):
            for b in ops[i + 1:]:
                assert commutes(a, b)
        psi = random_state(np.random.default_rng(seed), n)
        assert expectation_identity_gap(h, reduced, plans, psi) <= 1e-10
