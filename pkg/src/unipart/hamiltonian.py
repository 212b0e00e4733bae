"""Real-coefficient Pauli Hamiltonians: canonical storage, text IO and norms."""

from __future__ import annotations

import io
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .pauli import PauliString, is_hermitian_selfinverse

__all__ = [
    "DROP_TOLERANCE",
    "HamiltonianParseError",
    "PauliHamiltonian",
    "parse",
    "parse_file",
    "serialize",
    "l1_norm",
]

DROP_TOLERANCE = 1e-12


class HamiltonianParseError(ValueError):
    pass


@dataclass(frozen=True)
class PauliHamiltonian:
    """``identity_offset * I + sum(c * P for c, P in terms)``.

    Terms are canonical: merged by operator, unsigned (sign lives in the
    coefficient), free of the identity, above the drop tolerance and sorted by
    descending ``|c|`` then by ``(x_bits, z_bits)``. Use :meth:`from_terms`
    to build one from arbitrary input.
    """

    n_qubits: int
    terms: tuple[tuple[float, PauliString], ...]
    identity_offset: float = 0.0
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    @classmethod
    def from_terms(
        cls,
        n_qubits: int,
        terms: Iterable[tuple[float, PauliString]],
        identity_offset: float = 0.0,
    ) -> PauliHamiltonian:
        buckets: dict[tuple[int, int], list[float]] = defaultdict(list)
        offset = [float(identity_offset)]
        for coeff, op in terms:
            if op.n_qubits != n_qubits:
                raise ValueError(f"term {op.label} has {op.n_qubits} qubits, expected {n_qubits}")
            if not is_hermitian_selfinverse(op):
                raise ValueError(f"term {op.label} has an imaginary phase")
            value = float(coeff) * (-1.0 if op.phase_exp == 2 else 1.0)
            if op.x_bits == 0 and op.z_bits == 0:
                offset.append(value)
            else:
                buckets[op.key].append(value)
        merged = []
        for (x, z), values in buckets.items():
            # fsum is exactly rounded, which makes merging order-independent
            c = math.fsum(values)
            if abs(c) >= DROP_TOLERANCE:
                merged.append((c, PauliString(n_qubits, x, z, 0)))
        merged.sort(key=lambda t: (-abs(t[0]), t[1].x_bits, t[1].z_bits))
        return cls(n_qubits, tuple(merged), math.fsum(offset))

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {op.key: j for j, (_, op) in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def coefficients(self) -> list[float]:
        return [c for c, _ in self.terms]

    @property
    def operators(self) -> list[PauliString]:
        return [op for _, op in self.terms]

    def index_of(self, op: PauliString) -> int:
        """Position of the term with the same (x, z) bits; KeyError if absent."""
        return self._index[op.key]

    def subset(self, indices: Iterable[int]) -> PauliHamiltonian:
        return PauliHamiltonian.from_terms(self.n_qubits, (self.terms[j] for j in indices))

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "identity_offset": self.identity_offset,
            "terms": [{"coefficient": c, "pauli": op.word} for c, op in self.terms],
        }

    @classmethod
    def from_dict(cls, data: dict) -> PauliHamiltonian:
        terms = [(t["coefficient"], PauliString.from_label(t["pauli"])) for t in data["terms"]]
        return cls.from_terms(int(data["n_qubits"]), terms, data.get("identity_offset", 0.0))


def parse(stream: TextIO | str) -> PauliHamiltonian:
    """Read ``coefficient pauli_word`` lines.

    ``#`` starts a comment. A word may carry a ``+`` or ``-`` prefix; an
    imaginary prefix is rejected because coefficients are real.

    >>> parse("1.0 ZZ\\n0.5 XI").coefficients
    [1.0, 0.5]
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    n_qubits = None
    terms = []
    for lineno, raw in enumerate(stream, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise HamiltonianParseError(f"line {lineno}: expected 'coefficient pauli_word'")
        try:
            coeff = float(parts[0])
        except ValueError:
            raise HamiltonianParseError(f"line {lineno}: malformed coefficient {parts[0]!r}") from None
        if not math.isfinite(coeff):
            raise HamiltonianParseError(f"line {lineno}: non-finite coefficient")
        try:
            op = PauliString.from_label(parts[1])
        except ValueError as exc:
            raise HamiltonianParseError(f"line {lineno}: {exc}") from None
        if not is_hermitian_selfinverse(op):
            raise HamiltonianParseError(f"line {lineno}: imaginary phase on {parts[1]!r}")
        if n_qubits is None:
            n_qubits = op.n_qubits
        elif op.n_qubits != n_qubits:
            raise HamiltonianParseError(
                f"line {lineno}: word length {op.n_qubits} differs from {n_qubits}"
            )
        terms.append((coeff, op))
    if n_qubits is None:
        raise HamiltonianParseError("no terms found; cannot infer the number of qubits")
    return PauliHamiltonian.from_terms(n_qubits, terms)


def parse_file(path) -> PauliHamiltonian:
    with open(path) as fh:
        return parse(fh)


def serialize(h: PauliHamiltonian) -> str:
    lines = []
    if h.identity_offset != 0.0 or not h.terms:
        lines.append(f"{h.identity_offset:.17g} {'I' * h.n_qubits}")
    lines.extend(f"{c:.17g} {op.word}" for c, op in h.terms)
    return "\n".join(lines) + "\n"


def l1_norm(h: PauliHamiltonian) -> float:
    return math.fsum(abs(c) for c, _ in h.terms)
