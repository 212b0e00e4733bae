"""Model Hamiltonians with known partitions, plus random-term statistics."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hamiltonian import PauliHamiltonian
from .partition import AnticommutingPartition, greedy_color
from .pauli import PauliString

__all__ = [
    "GraphSpec",
    "ring",
    "random_regular",
    "tim_hamiltonian",
    "tim_pair_partition",
    "random_klocal",
    "overlap_weights",
    "commute_probability",
    "anticommute_probability",
    "anticommute_probability_2local",
    "anticommute_probability_3local",
    "dual_basis_structure",
    "dual_basis_partition",
    "random_noncontextual",
]


@dataclass(frozen=True)
class GraphSpec:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n_vertices < 0:
            raise ValueError("n_vertices must be non-negative")
        normalized = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u}, {v}) outside {self.n_vertices} vertices")
            normalized.append((min(u, v), max(u, v)))
        if len(set(normalized)) != len(normalized):
            raise ValueError("duplicate edge")
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))

    @property
    def degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


def ring(n: int) -> GraphSpec:
    if n < 3:
        raise ValueError("a ring needs at least 3 vertices")
    return GraphSpec(n, tuple((j, (j + 1) % n) for j in range(n)))


def random_regular(degree: int, n: int, seed: int | None = None) -> GraphSpec:
    import networkx as nx

    g = nx.random_regular_graph(degree, n, seed=seed)
    return GraphSpec(n, tuple(sorted((min(u, v), max(u, v)) for u, v in g.edges())))


def _zz(n: int, u: int, v: int) -> PauliString:
    return PauliString.from_sparse(n, [(u, "Z"), (v, "Z")])


def _x(n: int, v: int) -> PauliString:
    return PauliString.from_sparse(n, [(v, "X")])


def tim_hamiltonian(g: GraphSpec, x: float) -> PauliHamiltonian:
    """``sum_{(u,v) in E} Z_u Z_v + x sum_v X_v``."""
    n = g.n_vertices
    terms = [(1.0, _zz(n, u, v)) for u, v in g.edges]
    terms += [(float(x), _x(n, v)) for v in range(n)]
    return PauliHamiltonian.from_terms(n, terms)


def _match_vertices(g: GraphSpec) -> dict[int, int]:
    """Match each vertex to a distinct incident edge.

    Vertices in index order take their lowest-indexed free incident edge;
    any vertex left over is then matched along an augmenting path, which
    only reassigns earlier choices when the greedy pass got stuck.
    """
    incident: list[list[int]] = [[] for _ in range(g.n_vertices)]
    for e, (u, v) in enumerate(g.edges):
        incident[u].append(e)
        incident[v].append(e)
    edge_owner: dict[int, int] = {}
    vertex_edge: dict[int, int] = {}
    for v in range(g.n_vertices):
        for e in incident[v]:
            if e not in edge_owner:
                edge_owner[e] = v
                vertex_edge[v] = e
                break

    def augment(v: int, seen: set[int]) -> bool:
        for e in incident[v]:
            if e in seen:
                continue
            seen.add(e)
            owner = edge_owner.get(e)
            if owner is None or augment(owner, seen):
                edge_owner[e] = v
                vertex_edge[v] = e
                return True
        return False

    for v in range(g.n_vertices):
        if v not in vertex_edge:
            augment(v, set())
    return vertex_edge


def tim_pair_partition(g: GraphSpec, x: float) -> AnticommutingPartition:
    """Pair each ``X_v`` with one incident ``Z_u Z_v``; everything else is a singleton."""
    h = tim_hamiltonian(g, x)
    n = g.n_vertices
    edge_index = [h.index_of(_zz(n, u, v)) for u, v in g.edges]
    if x == 0:
        return AnticommutingPartition.from_sets(h, [(i,) for i in range(len(h.terms))])
    vertex_index = [h.index_of(_x(n, v)) for v in range(n)]
    matching = _match_vertices(g)
    sets = []
    used_edges = set()
    for v in range(n):
        if v in matching:
            e = matching[v]
            used_edges.add(e)
            sets.append((edge_index[e], vertex_index[v]))
        else:
            sets.append((vertex_index[v],))
    sets += [(edge_index[e],) for e in range(len(g.edges)) if e not in used_edges]
    return AnticommutingPartition.from_sets(h, sets)


# --- random k-local terms --------------------------------------------------


def random_klocal(n: int, m: int, k: int, seed=None) -> PauliHamiltonian:
    """``m`` terms on independent random k-tuples with random non-identity letters."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if m < 0:
        raise ValueError("m must be non-negative")
    rng = np.random.default_rng(seed)
    terms = []
    for _ in range(m):
        qubits = rng.choice(n, size=k, replace=False)
        letters = rng.integers(1, 4, size=k)
        coeff = rng.uniform(-1.0, 1.0)
        factors = [(int(q), "XYZ"[int(l) - 1]) for q, l in zip(qubits, letters)]
        terms.append((float(coeff), PauliString.from_sparse(n, factors)))
    return PauliHamiltonian.from_terms(n, terms)


def _check_nk(n: int, k: int) -> None:
    if not (isinstance(n, int) and isinstance(k, int)) or not 1 <= k <= n:
        raise ValueError(f"need integers 1 <= k <= n, got n={n}, k={k}")


def overlap_weights(n: int, k: int) -> list[Fraction]:
    """Hypergeometric probability that two random k-subsets of n share I elements."""
    _check_nk(n, k)
    total = math.comb(n, k)
    return [Fraction(math.comb(k, i) * math.comb(n - k, k - i), total) for i in range(k + 1)]


def _commute_exact(n: int, k: int) -> Fraction:
    # on each shared qubit two random non-identity letters anticommute with
    # probability 2/3; the pair commutes when that happens an even number of times
    return sum(
        (w * Fraction(1, 2) * (1 + Fraction(-1, 3) ** i) for i, w in enumerate(overlap_weights(n, k))),
        Fraction(0),
    )


def commute_probability(n: int, k: int) -> float:
    """Probability that two random k-local Pauli terms on n qubits commute."""
    return float(_commute_exact(n, k))


def anticommute_probability(n: int, k: int) -> float:
    return float(1 - _commute_exact(n, k))


def anticommute_probability_2local(n: int) -> float:
    """``(8 / 3n) (n - 2) / (n - 1)``, the single-overlap contribution at k = 2.

    It is the probability that two random 2-local terms share exactly one
    qubit and anticommute. Pairs on the same qubit pair add a further
    ``4 / (9 C(n, 2))``; :func:`anticommute_probability` includes them.
    """
    _check_nk(n, 2)
    return 8 * (n - 2) / (3 * n * (n - 1))


def anticommute_probability_3local(n: int) -> float:
    """Closed form of :func:`anticommute_probability` at k = 3."""
    _check_nk(n, 3)
    return 2 * (27 * n * n - 153 * n + 230) / (9 * n * (n - 1) * (n - 2))


# --- plane-wave dual basis ---------------------------------------------------


def _dual_ops(n_modes: int):
    """Pauli patterns on 2N qubits, spin sector s on qubits s*N .. s*N + N - 1."""
    nq = 2 * n_modes
    z_single, hopping, zz = {}, {}, []
    for s in range(2):
        base = s * n_modes
        for p in range(n_modes):
            z_single[(s, p)] = PauliString.from_sparse(nq, [(base + p, "Z")])
        for p, q in itertools.combinations(range(n_modes), 2):
            string = [(base + t, "Z") for t in range(p + 1, q)]
            for letter in "XY":
                hopping[(s, letter, p, q)] = PauliString.from_sparse(
                    nq, [(base + p, letter), *string, (base + q, letter)]
                )
    for a, b in itertools.combinations(range(nq), 2):
        zz.append(PauliString.from_sparse(nq, [(a, "Z"), (b, "Z")]))
    return z_single, hopping, zz


def dual_basis_structure(n_modes: int, seed=None) -> tuple[PauliHamiltonian, AnticommutingPartition]:
    """Term structure of the Jordan-Wigner plane-wave dual Hamiltonian.

    Both spin sectors are laid out spin-major on 2N qubits. Terms are every
    ``Z_p``, every ``Z_a Z_b`` over all 2N spin orbitals, and within each
    sector ``X_p Z..Z X_q`` and ``Y_p Z..Z Y_q``. Coefficients are synthetic,
    uniform in [0.1, 1].

    The sets are ``A_p = {Z_p} + {X_l Z..Z X_p : l < p} + {Y_p Z..Z Y_q : q > p}``
    per sector, N members each; the mutually commuting ZZ terms are coloured
    greedily (which leaves them as singletons).
    """
    if n_modes < 3:
        raise ValueError("dual-basis structure needs N >= 3")
    rng = np.random.default_rng(seed)
    z_single, hopping, zz = _dual_ops(n_modes)
    ops = list(z_single.values()) + list(hopping.values()) + zz
    coeffs = rng.uniform(0.1, 1.0, size=len(ops))
    h = PauliHamiltonian.from_terms(2 * n_modes, list(zip(coeffs.tolist(), ops)))
    return h, dual_basis_partition(h, n_modes)


def dual_basis_partition(h: PauliHamiltonian, n_modes: int) -> AnticommutingPartition:
    """The ``A_p`` sets on a Hamiltonian with the dual-basis term structure.

    Pattern members absent from ``h`` are skipped; every term not claimed by
    some ``A_p`` is coloured greedily among themselves.
    """
    if h.n_qubits != 2 * n_modes:
        raise ValueError(f"expected {2 * n_modes} qubits, got {h.n_qubits}")
    z_single, hopping, _ = _dual_ops(n_modes)

    def idx(op):
        try:
            return h.index_of(op)
        except KeyError:
            return None

    sets = []
    for s in range(2):
        for p in range(n_modes):
            members = [z_single[(s, p)]]
            members += [hopping[(s, "X", l, p)] for l in range(p)]
            members += [hopping[(s, "Y", p, q)] for q in range(p + 1, n_modes)]
            found = [i for i in map(idx, members) if i is not None]
            if found:
                sets.append(found)
    claimed = {i for st in sets for i in st}
    rest = [i for i in range(len(h.terms)) if i not in claimed]
    if rest:
        sub = h.subset(rest)
        for st in greedy_color(sub).sets:
            sets.append([h.index_of(sub.terms[i][1]) for i in st])
    return AnticommutingPartition.from_sets(h, sets)


# --- noncontextual instances ---------------------------------------------------


def random_noncontextual(n_qubits: int, seed=None, max_cliques: int | None = None) -> PauliHamiltonian:
    """Random noncontextual Hamiltonian built clique-first.

    The qubits split into a block carrying pairwise anticommuting operators
    ``A_1..A_m`` (Jordan-Wigner Majoranas) and a block carrying commuting
    Z-strings. Clique ``i`` is ``{A_i g}`` over a random handful of Z-strings
    ``g``, and the universally commuting terms are further Z-strings alone.
    Letters are then shuffled per qubit and qubits permuted, which keeps
    every commutation relation intact.
    """
    if n_qubits < 2:
        raise ValueError("need at least 2 qubits")
    rng = np.random.default_rng(seed)
    n_a = int(rng.integers(1, n_qubits))
    n_b = n_qubits - n_a
    majoranas = []
    for p in range(n_a):
        for letter in "XY":
            majoranas.append([(q, "Z") for q in range(p)] + [(p, letter)])
    limit = len(majoranas) if max_cliques is None else min(max_cliques, len(majoranas))
    m = int(rng.integers(2, limit + 1))
    chosen = rng.choice(len(majoranas), size=m, replace=False)

    def z_string():
        mask = rng.integers(0, 2, size=n_b)
        return [(n_a + q, "Z") for q in range(n_b) if mask[q]]

    factors_list = []
    for i in chosen:
        size = int(rng.integers(1, 5))
        for _ in range(size):
            factors_list.append(majoranas[int(i)] + z_string())
    for _ in range(int(rng.integers(0, 4)) if n_b else 0):
        g = z_string()
        if g:
            factors_list.append(g)

    letter_perm = [rng.permutation(3) for _ in range(n_qubits)]
    qubit_perm = rng.permutation(n_qubits)
    terms = {}
    for factors in factors_list:
        moved = [(int(qubit_perm[q]), "XYZ"[letter_perm[q]["XYZ".index(l)]]) for q, l in factors]
        op = PauliString.from_sparse(n_qubits, moved)
        if op.key not in terms:
            coeff = rng.uniform(0.1, 1.0) * rng.choice([-1.0, 1.0])
            terms[op.key] = (float(coeff), op)
    return PauliHamiltonian.from_terms(n_qubits, terms.values())
