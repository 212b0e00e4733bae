"""Noncontextual Hamiltonians and their reduction to a commuting Hamiltonian.

Let Z be the terms that commute with every other term and T the rest. The
term set is noncontextual when commutation restricted to T is an
equivalence relation; its classes are cliques C_1..C_N that pairwise
anticommute as wholes. Picking one element per clique gives anticommuting
sets D_j, each of which a rotation collapses onto its member of C_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hamiltonian import PauliHamiltonian
from .partition import compatibility_graph
from .rotation import RotationPlan, build_sequence_plan

__all__ = [
    "ContextualityError",
    "NoncontextualStructure",
    "find_contextual_triple",
    "is_noncontextual",
    "decompose",
    "reduce_to_commuting",
]


class ContextualityError(ValueError):
    pass


@dataclass(frozen=True)
class NoncontextualStructure:
    z_terms: tuple[int, ...]
    cliques: tuple[tuple[int, ...], ...]
    hitting_sets: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {
            "z_terms": list(self.z_terms),
            "cliques": [list(c) for c in self.cliques],
            "hitting_sets": [list(d) for d in self.hitting_sets],
        }


def _split(h: PauliHamiltonian) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Commutation matrix (diagonal true), Z indices and T indices."""
    commute = compatibility_graph(h)
    np.fill_diagonal(commute, True)
    universal = commute.all(axis=1)
    return commute, np.flatnonzero(universal), np.flatnonzero(~universal)


def find_contextual_triple(h: PauliHamiltonian) -> tuple[int, int, int] | None:
    """Indices ``(a, b, c)`` in T with a~b, b~c but a, c anticommuting; None if none exist."""
    commute, _, t = _split(h)
    sub = commute[np.ix_(t, t)]
    # a~b and b~c for some b, yet a and c anticommute
    reach = (sub.astype(np.int64) @ sub.astype(np.int64)) > 0
    bad = np.argwhere(reach & ~sub)
    if len(bad) == 0:
        return None
    a, c = bad[0]
    b = int(np.flatnonzero(sub[a] & sub[c])[0])
    return int(t[a]), int(t[b]), int(t[c])


def is_noncontextual(h: PauliHamiltonian) -> bool:
    return find_contextual_triple(h) is None


def decompose(h: PauliHamiltonian) -> NoncontextualStructure:
    """Z, the commutation classes of T, and the hitting sets.

    ``C_1`` is a largest clique (ties to the clique holding the lowest
    index) and the other cliques follow in order of their lowest index.
    ``D_j`` takes the j-th element of every clique that still has one.
    """
    triple = find_contextual_triple(h)
    if triple is not None:
        a, b, c = (h.terms[i][1].word for i in triple)
        raise ContextualityError(
            f"contextual: {b} commutes with {a} and {c}, which anticommute"
        )
    commute, z, t = _split(h)
    seen: set[int] = set()
    cliques = []
    for i in t:
        if i in seen:
            continue
        members = tuple(int(j) for j in t if commute[i, j])
        seen.update(members)
        cliques.append(members)
    if cliques:
        first = max(range(len(cliques)), key=lambda c: (len(cliques[c]), -cliques[c][0]))
        cliques.insert(0, cliques.pop(first))
    width = len(cliques[0]) if cliques else 0
    hitting = tuple(
        tuple(c[j] for c in cliques if j < len(c)) for j in range(width)
    )
    return NoncontextualStructure(tuple(int(i) for i in z), tuple(cliques), hitting)


def reduce_to_commuting(
    h: PauliHamiltonian,
) -> tuple[PauliHamiltonian, list[RotationPlan]]:
    """Collapse each ``D_j`` onto ``C_1j``; the result has the terms Z and C_1.

    The coefficient of ``C_1j`` is ``gamma_j`` carrying the sign of the
    plan's sink, so ``<H> = sum_Z alpha <P> + sum_j gamma_j <R_j^dag s_j R_j>``
    with ``s_j`` the signed sink of plan j.
    """
    structure = decompose(h)
    terms = [h.terms[i] for i in structure.z_terms]
    plans = []
    for j, d in enumerate(structure.hitting_sets):
        ops = [h.terms[i][1] for i in d]
        alphas = [h.terms[i][0] for i in d]
        gamma = math.hypot(*alphas)
        betas = [a / gamma for a in alphas]
        # C_1j is the first entry because C_1 leads the clique list
        plan = build_sequence_plan(ops, betas, sink=0, set_index=j)
        sign = -1.0 if plan.sink.phase_exp == 2 else 1.0
        terms.append((sign * gamma, ops[0]))
        plans.append(plan)
    return PauliHamiltonian.from_terms(h.n_qubits, terms, h.identity_offset), plans
