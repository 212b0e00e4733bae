"""Electronic-structure Hamiltonians in Majorana form.

The input is a spin-orbital Hamiltonian

    H = sum_pq h_pq a+_p a_q + 1/2 sum_pqrs h_pqrs a+_p a+_q a_r a_s

with real integrals carrying the usual 8-fold permutational symmetry. With
``g_{2p} = a_p + a+_p`` and ``g_{2p+1} = -i (a_p - a+_p)`` it becomes a sum of
quadratic terms ``i g_{2p} g_{2q+1}`` and quartic terms
``g_{2p} g_{2q} g_{2r+1} g_{2s+1}``. Jordan-Wigner sends each single-mode
operator to one Pauli string, so every monomial becomes one Pauli term.

A stored monomial is a strictly increasing index tuple ``A`` with a real
coefficient ``c``; it denotes ``c * i**(|A|/2 mod 2) * g_A`` so that every
stored operator is Hermitian.
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .hamiltonian import DROP_TOLERANCE, PauliHamiltonian
from .partition import AnticommutingPartition
from .pauli import PauliString, multiply

__all__ = [
    "IntegralError",
    "IntegralTable",
    "MajoranaPolynomial",
    "parse_integrals",
    "parse_integral_file",
    "serialize_integrals",
    "random_integrals",
    "to_majorana",
    "majorana_pauli",
    "jordan_wigner",
    "theorem1_sets",
    "theorem1_partition",
    "full_quartic_polynomial",
]

SYMMETRY_TOL = 1e-10


class IntegralError(ValueError):
    pass


def two_body_images(p: int, q: int, r: int, s: int) -> set[tuple[int, int, int, int]]:
    """Orbit of an index quadruple under the 8 integral symmetries."""
    seen = {(p, q, r, s)}
    frontier = [(p, q, r, s)]
    while frontier:
        a, b, c, d = frontier.pop()
        for img in ((d, b, c, a), (a, c, b, d), (b, a, d, c)):
            if img not in seen:
                seen.add(img)
                frontier.append(img)
    return seen


@dataclass
class IntegralTable:
    """Symmetry-complete sparse one- and two-body integrals over N spin orbitals."""

    n_orbitals: int
    one_body: dict[tuple[int, int], float] = field(default_factory=dict)
    two_body: dict[tuple[int, int, int, int], float] = field(default_factory=dict)

    def _check_index(self, idx) -> None:
        for i in idx:
            if not 0 <= i < self.n_orbitals:
                raise IntegralError(f"index {i} outside [0, {self.n_orbitals})")

    def _store(self, table, key, value, images) -> None:
        for img in images:
            old = table.get(img)
            if old is not None and abs(old - value) > SYMMETRY_TOL:
                raise IntegralError(
                    f"entry {key} = {value} conflicts with symmetric entry {img} = {old}"
                )
        for img in images:
            table[img] = value

    def set_one_body(self, p: int, q: int, value: float) -> None:
        self._check_index((p, q))
        self._store(self.one_body, (p, q), float(value), {(p, q), (q, p)})

    def set_two_body(self, p: int, q: int, r: int, s: int, value: float) -> None:
        self._check_index((p, q, r, s))
        self._store(self.two_body, (p, q, r, s), float(value), two_body_images(p, q, r, s))

    def one_body_array(self) -> np.ndarray:
        n = self.n_orbitals
        out = np.zeros((n, n))
        for (p, q), v in self.one_body.items():
            out[p, q] = v
        return out

    def two_body_array(self) -> np.ndarray:
        n = self.n_orbitals
        out = np.zeros((n, n, n, n))
        for key, v in self.two_body.items():
            out[key] = v
        return out

    @classmethod
    def from_arrays(cls, one_body: np.ndarray, two_body: np.ndarray, tol: float = 0.0) -> IntegralTable:
        n = one_body.shape[0]
        table = cls(n)
        for p, q in zip(*np.nonzero(np.abs(one_body) > tol)):
            table.set_one_body(int(p), int(q), float(one_body[p, q]))
        for idx in zip(*np.nonzero(np.abs(two_body) > tol)):
            table.set_two_body(*(int(i) for i in idx), float(two_body[idx]))
        return table


def parse_integrals(stream: TextIO | str) -> IntegralTable:
    """Read ``norb N``, ``1 p q value`` and ``2 p q r s value`` lines.

    Every entry implies its symmetric images; conflicting images raise.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    table = None
    for lineno, raw in enumerate(stream, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "norb":
                if table is not None:
                    raise IntegralError("norb given twice")
                table = IntegralTable(int(parts[1]))
                if table.n_orbitals < 1:
                    raise IntegralError("norb must be positive")
                continue
            if table is None:
                raise IntegralError("the first entry must be 'norb N'")
            if parts[0] == "1" and len(parts) == 4:
                table.set_one_body(int(parts[1]), int(parts[2]), float(parts[3]))
            elif parts[0] == "2" and len(parts) == 6:
                table.set_two_body(*(int(x) for x in parts[1:5]), float(parts[5]))
            else:
                raise IntegralError(f"unrecognised record {line!r}")
        except IntegralError as exc:
            raise IntegralError(f"line {lineno}: {exc}") from None
        except (ValueError, IndexError):
            raise IntegralError(f"line {lineno}: malformed record {line!r}") from None
    if table is None:
        raise IntegralError("missing 'norb N' header")
    return table


def parse_integral_file(path) -> IntegralTable:
    with open(path) as fh:
        return parse_integrals(fh)


def serialize_integrals(table: IntegralTable) -> str:
    """One line per symmetry orbit (its lexicographically smallest member)."""
    lines = [f"norb {table.n_orbitals}"]
    for (p, q), v in sorted(table.one_body.items()):
        if p <= q:
            lines.append(f"1 {p} {q} {v:.17g}")
    for key, v in sorted(table.two_body.items()):
        if key == min(two_body_images(*key)):
            lines.append("2 {} {} {} {} {:.17g}".format(*key, v))
    return "\n".join(lines) + "\n"


def random_integrals(n_orbitals: int, rng: np.random.Generator, density: float = 1.0) -> IntegralTable:
    """Random real integrals with the full symmetry; ``density`` keeps a fraction of orbits."""
    n = n_orbitals
    h1 = rng.uniform(-1, 1, (n, n))
    h1 = (h1 + h1.T) / 2
    h2 = np.zeros((n, n, n, n))
    done = set()
    for idx in itertools.product(range(n), repeat=4):
        if idx in done:
            continue
        orbit = two_body_images(*idx)
        done |= orbit
        if rng.random() < density:
            v = rng.uniform(-1, 1)
            for img in orbit:
                h2[img] = v
    if density < 1.0:
        h1 *= rng.random((n, n)) < density
        h1 = np.triu(h1) + np.triu(h1, 1).T
    return IntegralTable.from_arrays(h1, h2)


# --- Majorana polynomial ---------------------------------------------------


@dataclass
class MajoranaPolynomial:
    n_modes: int
    monomials: dict[tuple[int, ...], float] = field(default_factory=dict)
    identity_offset: float = 0.0

    def __post_init__(self) -> None:
        if self.n_modes % 2:
            raise ValueError("n_modes must be even (two per orbital)")
        for idx in self.monomials:
            self.check_monomial(idx)

    @property
    def n_orbitals(self) -> int:
        return self.n_modes // 2

    def check_monomial(self, idx: tuple[int, ...]) -> None:
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"monomial {idx} is not strictly increasing")
        if idx and not (0 <= idx[0] and idx[-1] < self.n_modes):
            raise ValueError(f"monomial {idx} has an index outside [0, {self.n_modes})")
        evens = sum(1 for i in idx if i % 2 == 0)
        if len(idx) not in (2, 4) or 2 * evens != len(idx):
            raise ValueError(
                f"monomial {idx} is not an electronic quadratic or quartic "
                "with equal numbers of even and odd indices"
            )


def _sort_sign(word: list[int]) -> tuple[tuple[int, ...], int]:
    """Sort distinct Majorana indices, returning the permutation sign."""
    w = list(word)
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                w[j], w[j + 1] = w[j + 1], w[j]
                sign = -sign
    return tuple(w), sign


def to_majorana(table: IntegralTable) -> MajoranaPolynomial:
    """Rewrite the integrals as a Majorana polynomial.

    Coefficients:

        c0        = 1/2 sum_p h_pp + 1/8 sum_{p!=q} (h_pqqp - h_pqpq)
        c_pq      = 1/2 h_pq + 1/4 sum_{r!=p,q} (h_prrq - h_pqrr)
        c_pqrs    = -1/4 h_pqrs

    A quartic with p == r or q == s receives the same weight as any other;
    the ladder-operator expansion has no Kronecker-delta reduction there.

    and ``H = c0 + sum_pq c_pq i g2p g2q+1
    + 1/2 sum_{p!=q, r!=s} c_pqrs g2p g2q g2r+1 g2s+1``.
    """
    n = table.n_orbitals
    h1 = table.one_body_array()
    h2 = table.two_body_array()
    idx = np.arange(n)

    offset = 0.5 * np.trace(h1)
    for p in range(n):
        for q in range(n):
            if p != q:
                offset += (h2[p, q, q, p] - h2[p, q, p, q]) / 8

    monomials: dict[tuple[int, ...], float] = {}

    def add(word, value):
        key, sign = _sort_sign(word)
        monomials[key] = monomials.get(key, 0.0) + sign * value

    for p in range(n):
        for q in range(n):
            value = 0.5 * h1[p, q]
            others = (idx != p) & (idx != q)
            value += 0.25 * np.sum(h2[p, others, others, q] - h2[p, q, others, others])
            if value != 0.0:
                add([2 * p, 2 * q + 1], value)

    for p, q, r, s in zip(*np.nonzero(h2)):
        if p == q or r == s:
            continue
        add([2 * p, 2 * q, 2 * r + 1, 2 * s + 1], 0.5 * -0.25 * h2[p, q, r, s])

    monomials = {k: float(v) for k, v in monomials.items() if abs(v) >= DROP_TOLERANCE}
    return MajoranaPolynomial(2 * n, monomials, float(offset))


def majorana_pauli(j: int, n_orbitals: int) -> PauliString:
    """``g_{2p} = X_p Z_{p-1}..Z_0`` and ``g_{2p+1} = Y_p Z_{p-1}..Z_0``."""
    p = j // 2
    if not 0 <= p < n_orbitals:
        raise ValueError(f"mode {j} outside {2 * n_orbitals} Majorana modes")
    factors = [(q, "Z") for q in range(p)] + [(p, "Y" if j % 2 else "X")]
    return PauliString.from_sparse(n_orbitals, factors)


def monomial_pauli(idx: tuple[int, ...], n_orbitals: int) -> tuple[int, PauliString]:
    """Return ``(sign, P)`` with ``i**(|A|/2 mod 2) g_A = sign * P``."""
    op = PauliString.identity(n_orbitals)
    for j in idx:
        op = multiply(op, majorana_pauli(j, n_orbitals))
    if (len(idx) // 2) % 2:
        op = op.with_phase(op.phase_exp + 1)
    if op.phase_exp % 2:
        raise ValueError(f"monomial {idx} maps to a non-Hermitian string {op.label}")
    return (-1 if op.phase_exp == 2 else 1), op.unsigned()


def jordan_wigner(mp: MajoranaPolynomial) -> PauliHamiltonian:
    n = mp.n_orbitals
    terms = []
    for idx, c in mp.monomials.items():
        sign, op = monomial_pauli(idx, n)
        terms.append((sign * c, op))
    return PauliHamiltonian.from_terms(n, terms, mp.identity_offset)


# --- Cubic partition ------------------------------------------------------


def _quartic_key(idx: tuple[int, ...]) -> tuple[int, int, int]:
    evens = [i // 2 for i in idx if i % 2 == 0]
    odds = [i // 2 for i in idx if i % 2 == 1]
    q = max(evens)
    r, s = sorted(odds)
    # S(1,r,s) and S(2,r,s) share a bin
    return (2 if q == 1 else q, r, s)


def theorem1_sets(mp: MajoranaPolynomial) -> list[list[tuple[int, ...]]]:
    """Completely anticommuting sets of monomials.

    Quartic ``g2p g2q g2r+1 g2s+1`` (p < q, r < s) goes to bin ``(q, r, s)``
    with bins q = 1 and q = 2 merged. The quadratics ``T_p`` sharing even
    index 2p join the lowest nonempty bin ``(p, r, s)``, minus the two
    members with odd index r or s; those two join the lowest nonempty bin
    ``(p, r', s')`` disjoint from ``{r, s}``. Quadratics with no such host
    (always the case for p <= 2, where bins do not all contain 2p) stay
    together as their own set.
    """
    bins: dict[tuple[int, int, int], list[tuple[int, ...]]] = {}
    quad: dict[int, dict[int, tuple[int, ...]]] = {}
    for idx in mp.monomials:
        mp.check_monomial(idx)
        if len(idx) == 4:
            bins.setdefault(_quartic_key(idx), []).append(idx)
        else:
            even = idx[0] if idx[0] % 2 == 0 else idx[1]
            odd = idx[1] if even == idx[0] else idx[0]
            quad.setdefault(even // 2, {})[odd // 2] = idx
    extra: list[list[tuple[int, ...]]] = []
    for p in sorted(quad):
        members = quad[p]
        hosts = sorted(k for k in bins if k[0] == p and p >= 3)
        if not hosts:
            extra.append([members[t] for t in sorted(members)])
            continue
        _, r, s = hosts[0]
        excluded = [members[t] for t in (r, s) if t in members]
        bins[hosts[0]].extend(members[t] for t in sorted(members) if t not in (r, s))
        if excluded:
            second = [k for k in hosts[1:] if not {k[1], k[2]} & {r, s}]
            if second:
                bins[second[0]].extend(excluded)
            else:
                extra.append(excluded)
    ordered = [sorted(bins[k]) for k in sorted(bins)]
    return [s for s in ordered + extra if s]


def theorem1_partition(mp: MajoranaPolynomial) -> tuple[PauliHamiltonian, AnticommutingPartition]:
    """Jordan-Wigner Hamiltonian of ``mp`` and the cubic partition on its terms."""
    h = jordan_wigner(mp)
    n = mp.n_orbitals
    index_sets = []
    for group in theorem1_sets(mp):
        idxs = []
        for mono in group:
            _, op = monomial_pauli(mono, n)
            try:
                idxs.append(h.index_of(op))
            except KeyError:
                continue  # dropped below tolerance
        index_sets.append(idxs)
    return h, AnticommutingPartition.from_sets(h, index_sets)


def full_quartic_polynomial(n_orbitals: int, coefficient: float = 1.0) -> MajoranaPolynomial:
    """Every ``g2p g2q g2r+1 g2s+1`` with p < q and r < s, equal weights."""
    n = n_orbitals
    monos = {}
    for p, q in itertools.combinations(range(n), 2):
        for r, s in itertools.combinations(range(n), 2):
            key, _ = _sort_sign([2 * p, 2 * q, 2 * r + 1, 2 * s + 1])
            monos[key] = coefficient
    return MajoranaPolynomial(2 * n, monos)
