"""Unitary partitioning of qubit Hamiltonians into completely anticommuting sets."""

from .hamiltonian import PauliHamiltonian, parse, serialize
from .partition import AnticommutingPartition, greedy_color, validate
from .pauli import PauliString, anticommutes, commutes, multiply
from .rotation import RotationPlan, build_plan, budgeted_split, gate_count

__version__ = "0.1.0"

__all__ = [
    "PauliString",
    "PauliHamiltonian",
    "AnticommutingPartition",
    "RotationPlan",
    "multiply",
    "commutes",
    "anticommutes",
    "parse",
    "serialize",
    "greedy_color",
    "validate",
    "build_plan",
    "gate_count",
    "budgeted_split",
]
