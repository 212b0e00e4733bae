"""Pauli strings in symplectic (x, z) form with exact phase tracking.

A :class:`PauliString` on ``n`` qubits is stored as two integer bit masks
``x_bits`` and ``z_bits`` (bit ``q`` belongs to qubit ``q``) and a phase
exponent. The operator it denotes is

    i**phase_exp * P_0 (x) P_1 (x) ... (x) P_{n-1}

where ``P_q`` is the letter I, X, Y or Z selected by ``(x_q, z_q)`` =
(0, 0), (1, 0), (1, 1), (0, 1). Python integers act as packed bit vectors of
arbitrary width, so equality and the symplectic product are word-wise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "PauliString",
    "multiply",
    "commutes",
    "weight",
    "is_hermitian_selfinverse",
]

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_PHASE_PREFIX = {"+": 0, "+i": 1, "-": 2, "-i": 3, "": 0, "i": 1}
_PREFIX_OF = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True, slots=True)
class PauliString:
    n_qubits: int
    x_bits: int
    z_bits: int
    phase_exp: int = 0

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_bits < limit and 0 <= self.z_bits < limit):
            raise ValueError("bit vectors do not fit in n_qubits")
        if not 0 <= self.phase_exp < 4:
            object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # construction -------------------------------------------------------

    @classmethod
    def identity(cls, n_qubits: int) -> PauliString:
        return cls(n_qubits, 0, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse ``[+|-|+i|-i]`` followed by letters, qubit 0 leftmost."""
        text = label.strip()
        body = text.lstrip("+-i")
        prefix = text[: len(text) - len(body)]
        if prefix not in _PHASE_PREFIX:
            raise ValueError(f"bad phase prefix in {label!r}")
        if not body:
            raise ValueError(f"empty Pauli word in {label!r}")
        x = z = 0
        for q, ch in enumerate(body):
            try:
                bx, bz = _LETTER_BITS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli character {ch!r} in {label!r}") from None
            x |= bx << q
            z |= bz << q
        return cls(len(body), x, z, _PHASE_PREFIX[prefix])

    @classmethod
    def from_sparse(cls, n_qubits: int, factors: Iterable[tuple[int, str]]) -> PauliString:
        """Build from ``(qubit, letter)`` pairs; repeated qubits are not allowed."""
        x = z = 0
        for q, ch in factors:
            if not 0 <= q < n_qubits:
                raise ValueError(f"qubit {q} out of range")
            if (x | z) >> q & 1:
                raise ValueError(f"qubit {q} given twice")
            bx, bz = _LETTER_BITS[ch]
            x |= bx << q
            z |= bz << q
        return cls(n_qubits, x, z, 0)

    # views --------------------------------------------------------------

    @property
    def key(self) -> tuple[int, int]:
        """Phase-free identity of the operator."""
        return (self.x_bits, self.z_bits)

    @property
    def support(self) -> int:
        return self.x_bits | self.z_bits

    @property
    def y_count(self) -> int:
        return (self.x_bits & self.z_bits).bit_count()

    def letter(self, q: int) -> str:
        return "IXZY"[(self.x_bits >> q & 1) | (self.z_bits >> q & 1) << 1]

    @property
    def word(self) -> str:
        return "".join(self.letter(q) for q in range(self.n_qubits))

    @property
    def label(self) -> str:
        return _PREFIX_OF[self.phase_exp] + self.word

    def unsigned(self) -> PauliString:
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, 0)

    def with_phase(self, phase_exp: int) -> PauliString:
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, phase_exp % 4)

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __str__(self) -> str:
        return self.label


def _check_sizes(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact operator product ``a @ b``.

    Each letter string equals ``i**y_count * X^x Z^z``; commuting ``Z^za``
    past ``X^xb`` costs a sign per overlapping qubit.
    """
    _check_sizes(a, b)
    x = a.x_bits ^ b.x_bits
    z = a.z_bits ^ b.z_bits
    phase = (
        a.phase_exp
        + b.phase_exp
        + a.y_count
        + b.y_count
        + 2 * (a.z_bits & b.x_bits).bit_count()
        - (x & z).bit_count()
    )
    return PauliString(a.n_qubits, x, z, phase % 4)


def symplectic_product(a: PauliString, b: PauliString) -> int:
    _check_sizes(a, b)
    return ((a.x_bits & b.z_bits) ^ (a.z_bits & b.x_bits)).bit_count() & 1


def commutes(a: PauliString, b: PauliString) -> bool:
    return symplectic_product(a, b) == 0


def anticommutes(a: PauliString, b: PauliString) -> bool:
    return symplectic_product(a, b) == 1


def weight(a: PauliString) -> int:
    return a.support.bit_count()


def is_hermitian_selfinverse(a: PauliString) -> bool:
    # letters are Hermitian; only a real prefactor (+1 or -1) keeps that
    return a.phase_exp % 2 == 0
