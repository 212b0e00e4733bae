"""Partitioning Hamiltonian terms into completely anticommuting sets.

Two terms are *compatible* when they commute. A completely anticommuting set
is an independent set of the compatibility graph, so colouring that graph
partitions the Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .hamiltonian import PauliHamiltonian
from .pauli import anticommutes

__all__ = [
    "AnticommutingPartition",
    "PartitionError",
    "compatibility_graph",
    "greedy_color",
    "validate",
    "find_violation",
    "split_set",
]

_REL_TOL = 1e-12


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class AnticommutingPartition:
    """Disjoint cover of term indices with per-set norms.

    ``gammas[l]`` is the l2 norm of the coefficients in ``sets[l]`` and
    ``betas[l][j] = alpha / gamma`` for the j-th index of that set, so
    ``gammas[l] * betas[l][j]`` reproduces the original coefficient.
    """

    sets: tuple[tuple[int, ...], ...]
    gammas: tuple[float, ...]
    betas: tuple[tuple[float, ...], ...]

    @classmethod
    def from_sets(cls, h: PauliHamiltonian, sets: Iterable[Iterable[int]]) -> AnticommutingPartition:
        clean = [tuple(sorted(s)) for s in sets]
        clean = [s for s in clean if s]
        gammas = []
        betas = []
        for s in clean:
            alphas = [h.terms[j][0] for j in s]
            gamma = math.hypot(*alphas)
            gammas.append(gamma)
            betas.append(tuple(a / gamma for a in alphas))
        return cls(tuple(clean), tuple(gammas), tuple(betas))

    @classmethod
    def singletons(cls, h: PauliHamiltonian) -> AnticommutingPartition:
        return cls.from_sets(h, ([j] for j in range(len(h))))

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def sizes(self) -> list[int]:
        return [len(s) for s in self.sets]

    @property
    def s_max(self) -> int:
        return max(self.sizes, default=0)

    def to_dict(self, h: PauliHamiltonian) -> dict:
        return {
            "set_count": len(self.sets),
            "sets": [
                {
                    "indices": list(s),
                    "paulis": [h.terms[j][1].word for j in s],
                    "gamma": g,
                    "betas": list(b),
                    "size": len(s),
                }
                for s, g, b in zip(self.sets, self.gammas, self.betas)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> AnticommutingPartition:
        sets = data["sets"]
        return cls(
            tuple(tuple(int(j) for j in s["indices"]) for s in sets),
            tuple(float(s["gamma"]) for s in sets),
            tuple(tuple(float(b) for b in s["betas"]) for s in sets),
        )


def _bit_matrix(h: PauliHamiltonian) -> tuple[np.ndarray, np.ndarray]:
    n = h.n_qubits
    m = len(h)
    xs = np.zeros((m, n), dtype=np.uint8)
    zs = np.zeros((m, n), dtype=np.uint8)
    for j, (_, op) in enumerate(h.terms):
        xb, zb = op.x_bits, op.z_bits
        for q in range(n):
            xs[j, q] = xb >> q & 1
            zs[j, q] = zb >> q & 1
    return xs, zs


def compatibility_graph(h: PauliHamiltonian) -> np.ndarray:
    """Boolean adjacency matrix; ``A[j, k]`` iff terms j != k commute."""
    if len(h) == 0:
        return np.zeros((0, 0), dtype=bool)
    xs, zs = _bit_matrix(h)
    xs = xs.astype(np.int64)
    zs = zs.astype(np.int64)
    sympl = (xs @ zs.T + zs @ xs.T) & 1
    adj = sympl == 0
    np.fill_diagonal(adj, False)
    return adj


def _independent_set(adj: np.ndarray, remaining: np.ndarray, rank: np.ndarray,
                     max_size: int | None) -> list[int]:
    """Greedy maximal independent set inside ``remaining``.

    Repeatedly takes the candidate with the fewest compatible candidates
    (ties by ``rank``) and discards its neighbours.
    """
    cand = remaining.copy()
    chosen: list[int] = []
    sub = adj[np.ix_(cand, cand)]
    degree = sub.sum(axis=1)
    alive = np.ones(len(cand), dtype=bool)
    while alive.any():
        if max_size is not None and len(chosen) >= max_size:
            break
        idx = np.flatnonzero(alive)
        order = np.lexsort((rank[cand[idx]], degree[idx]))
        pick = idx[order[0]]
        chosen.append(int(cand[pick]))
        dropped = alive & sub[pick]
        dropped[pick] = True
        alive &= ~dropped
        degree -= sub[:, dropped].sum(axis=1)
    return chosen


def _color_once(adj: np.ndarray, rank: np.ndarray, max_size: int | None) -> list[list[int]]:
    m = adj.shape[0]
    left = np.ones(m, dtype=bool)
    sets = []
    while left.any():
        chosen = _independent_set(adj, np.flatnonzero(left), rank, max_size)
        sets.append(sorted(chosen))
        left[chosen] = False
    return sets


def greedy_color(
    h: PauliHamiltonian,
    order_seed: int | None = None,
    restarts: int = 1,
    max_set_size: int | None = None,
) -> AnticommutingPartition:
    """Greedy independent-sets colouring of the compatibility graph.

    With no seed, ties are broken by canonical term order and the result is
    deterministic. A seed permutes the tie-breaking order; ``restarts > 1``
    draws that many permutations and keeps the colouring with the fewest sets.
    """
    m = len(h)
    if m == 0:
        return AnticommutingPartition((), (), ())
    if max_set_size is not None and max_set_size < 1:
        raise ValueError("max_set_size must be positive")
    adj = compatibility_graph(h)
    best = None
    if order_seed is None:
        best = _color_once(adj, np.arange(m), max_set_size)
        restarts -= 1
    rng = np.random.default_rng(order_seed)
    for _ in range(max(restarts, 0)):
        sets = _color_once(adj, rng.permutation(m), max_set_size)
        if best is None or len(sets) < len(best):
            best = sets
    return AnticommutingPartition.from_sets(h, best)


def find_violation(partition: AnticommutingPartition, h: PauliHamiltonian) -> str | None:
    """Describe the first broken partition invariant, or ``None`` if valid."""
    m = len(h)
    if not (len(partition.sets) == len(partition.gammas) == len(partition.betas)):
        return "sets, gammas and betas have different lengths"
    seen: dict[int, int] = {}
    for l, s in enumerate(partition.sets):
        for j in s:
            if not 0 <= j < m:
                return f"set {l}: index {j} out of range"
            if j in seen:
                return f"index {j} appears in sets {seen[j]} and {l}"
            seen[j] = l
    missing = sorted(set(range(m)) - set(seen))
    if missing:
        return f"index {missing[0]} is not covered"
    for l, s in enumerate(partition.sets):
        for a in range(len(s)):
            for b in range(a + 1, len(s)):
                pa, pb = h.terms[s[a]][1], h.terms[s[b]][1]
                if not anticommutes(pa, pb):
                    return f"set {l}: terms {s[a]} ({pa.word}) and {s[b]} ({pb.word}) commute"
    for l, (s, gamma, betas) in enumerate(zip(partition.sets, partition.gammas, partition.betas)):
        if len(betas) != len(s):
            return f"set {l}: {len(betas)} betas for {len(s)} terms"
        if gamma < 0:
            return f"set {l}: negative gamma"
        if abs(math.fsum(b * b for b in betas) - 1.0) > 1e-10:
            return f"set {l}: betas are not normalized"
        alphas = [h.terms[j][0] for j in s]
        if abs(gamma * gamma - math.fsum(a * a for a in alphas)) > 1e-10 * max(1.0, gamma * gamma):
            return f"set {l}: gamma^2 differs from the sum of squared coefficients"
        for j, a, b in zip(s, alphas, betas):
            if abs(gamma * b - a) > _REL_TOL * max(1.0, abs(a)):
                return f"set {l}: gamma*beta does not reproduce the coefficient of term {j}"
    return None


def validate(partition: AnticommutingPartition, h: PauliHamiltonian) -> bool:
    return find_violation(partition, h) is None


def _pieces(items: Sequence[int], pieces: int) -> list[list[int]]:
    q, r = divmod(len(items), pieces)
    out, start = [], 0
    for i in range(pieces):
        stop = start + q + (1 if i < r else 0)
        out.append(list(items[start:stop]))
        start = stop
    return out


def split_set(partition: AnticommutingPartition, h: PauliHamiltonian,
              set_index: int, pieces: int) -> AnticommutingPartition:
    """Cut one set into ``pieces`` contiguous runs (earlier runs one longer)."""
    target = partition.sets[set_index]
    if not 1 <= pieces <= len(target):
        raise ValueError(f"pieces must lie in [1, {len(target)}], got {pieces}")
    if pieces == 1:
        return partition
    new_sets = list(partition.sets[:set_index])
    new_sets += _pieces(target, pieces)
    new_sets += partition.sets[set_index + 1:]
    return AnticommutingPartition.from_sets(h, new_sets)
