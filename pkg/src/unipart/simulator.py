"""Dense matrix oracle for Pauli strings, Hamiltonians and rotation plans.

Qubit 0 is the leftmost Kronecker factor. Every Pauli matrix is a monomial
matrix (one nonzero per row), accumulated factor by factor from the 2x2
matrices as a row permutation plus a phase vector. That lets rotations act
on a dense operator in O(d^2) rather than through full matrix products.
"""

from __future__ import annotations

import numpy as np

from .hamiltonian import PauliHamiltonian
from .pauli import PauliString
from .rotation import RotationPlan

__all__ = [
    "MAX_QUBITS",
    "SimulatorError",
    "PAULI_2X2",
    "pauli_matrix",
    "hamiltonian_matrix",
    "plan_matrix",
    "conjugate",
    "to_matrix",
    "expectation",
    "frobenius",
    "dump_matrix",
    "load_matrix",
]

MAX_QUBITS = 12
TOLERANCE = 1e-10

PAULI_2X2 = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_PHASES = (1, 1j, -1, -1j)


class SimulatorError(ValueError):
    pass


def _cap(n: int) -> None:
    if n > MAX_QUBITS:
        raise SimulatorError(f"{n} qubits exceeds the dense cap of {MAX_QUBITS}")


class _Monomial:
    """``M[i, perm[i]] = phase[i]``; all other entries vanish."""

    __slots__ = ("perm", "phase")

    def __init__(self, perm: np.ndarray, phase: np.ndarray):
        self.perm = perm
        self.phase = phase

    @classmethod
    def of(cls, p: PauliString) -> _Monomial:
        _cap(p.n_qubits)
        perm = np.zeros(1, dtype=np.int64)
        phase = np.ones(1, dtype=complex)
        for q in range(p.n_qubits):
            m = PAULI_2X2[p.letter(q)]
            cols = np.abs(m).argmax(axis=1)
            vals = m[np.arange(2), cols]
            perm = (perm[:, None] * 2 + cols[None, :]).ravel()
            phase = np.kron(phase, vals)
        return cls(perm, phase * _PHASES[p.phase_exp])

    def left(self, a: np.ndarray) -> np.ndarray:
        """``M @ a``."""
        return self.phase[:, None] * a[self.perm, :]

    def dense(self) -> np.ndarray:
        d = len(self.perm)
        out = np.zeros((d, d), dtype=complex)
        out[np.arange(d), self.perm] = self.phase
        return out


def pauli_matrix(p: PauliString) -> np.ndarray:
    return _Monomial.of(p).dense()


def pauli_kron(p: PauliString) -> np.ndarray:
    """Plain Kronecker product of the 2x2 factors; a cross-check for :func:`pauli_matrix`."""
    _cap(p.n_qubits)
    out = np.ones((1, 1), dtype=complex)
    for q in range(p.n_qubits):
        out = np.kron(out, PAULI_2X2[p.letter(q)])
    return out * _PHASES[p.phase_exp]


def hamiltonian_matrix(h: PauliHamiltonian) -> np.ndarray:
    _cap(h.n_qubits)
    d = 2 ** h.n_qubits
    out = h.identity_offset * np.eye(d, dtype=complex)
    for c, op in h.terms:
        mono = _Monomial.of(op)
        out[np.arange(d), mono.perm] += c * mono.phase
    return out


def _generator(step) -> list[tuple[float, _Monomial]]:
    return [(c, _Monomial.of(p)) for c, p in step.generator]


def _apply_left(step, a: np.ndarray) -> np.ndarray:
    # exp(-i t G/2) a = cos(t/2) a - i sin(t/2) G a
    gen = _generator(step)
    ga = sum(c * m.left(a) for c, m in gen)
    half = step.angle / 2
    return np.cos(half) * a - 1j * np.sin(half) * ga


def plan_matrix(plan: RotationPlan) -> np.ndarray:
    """``R = R_last ... R_first`` as a dense unitary."""
    n = plan.sink.n_qubits
    _cap(n)
    out = np.eye(2 ** n, dtype=complex)
    for step in plan.steps:
        out = _apply_left(step, out)
    return out


def conjugate(plan: RotationPlan, a: np.ndarray) -> np.ndarray:
    """``R a R^dag`` without forming ``R``.

    Uses ``R a R^dag = (R (R a)^dag)^dag`` so only row gathers are needed,
    which are much faster than the column scatters of a right product.
    """
    out = np.array(a, dtype=complex)
    for step in plan.steps:
        out = _apply_left(step, out)
    out = np.ascontiguousarray(out.conj().T)
    for step in plan.steps:
        out = _apply_left(step, out)
    return out.conj().T


def to_matrix(obj) -> np.ndarray:
    if isinstance(obj, PauliString):
        return pauli_matrix(obj)
    if isinstance(obj, PauliHamiltonian):
        return hamiltonian_matrix(obj)
    if isinstance(obj, RotationPlan):
        return plan_matrix(obj)
    raise TypeError(f"cannot build a matrix from {type(obj).__name__}")


def expectation(op, state: np.ndarray, hermitian: bool = True) -> float:
    """``Re <psi|O|psi>``; ``op`` may be a matrix or anything :func:`to_matrix` accepts."""
    mat = op if isinstance(op, np.ndarray) else to_matrix(op)
    psi = np.asarray(state, dtype=complex).ravel()
    if mat.shape != (psi.size, psi.size):
        raise SimulatorError(f"state of dimension {psi.size} does not match {mat.shape}")
    if abs(np.vdot(psi, psi) - 1) > TOLERANCE:
        raise SimulatorError("state is not normalized")
    value = np.vdot(psi, mat @ psi)
    if hermitian and abs(value.imag) > 1e-8:
        raise SimulatorError(f"imaginary expectation {value.imag:.3e} for a Hermitian operator")
    return float(value.real)


def frobenius(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b))


def dump_matrix(path, a: np.ndarray) -> None:
    """Row-major, interleaved real/imag little-endian float64; no header."""
    np.ascontiguousarray(a, dtype="<c16").tofile(path)


def load_matrix(path, n_qubits: int) -> np.ndarray:
    d = 2 ** n_qubits
    return np.fromfile(path, dtype="<c16").reshape(d, d)
