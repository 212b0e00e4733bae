"""Bundled small-molecule integral tables (STO-3G, spin orbitals)."""

from __future__ import annotations

from importlib import resources

from .hamiltonian import PauliHamiltonian
from .majorana import IntegralTable, jordan_wigner, parse_integrals, to_majorana

__all__ = ["available", "load_integrals", "load_hamiltonian"]

_SUFFIX = "_sto3g.txt"


def available() -> list[str]:
    names = [p.name for p in resources.files("unipart").joinpath("data").iterdir()]
    return sorted(n[: -len(_SUFFIX)] for n in names if n.endswith(_SUFFIX))


def load_integrals(name: str) -> IntegralTable:
    path = resources.files("unipart").joinpath("data", name + _SUFFIX)
    if not path.is_file():
        raise KeyError(f"no bundled molecule {name!r}; choose from {', '.join(available())}")
    return parse_integrals(path.read_text())


def load_hamiltonian(name: str) -> PauliHamiltonian:
    """Jordan-Wigner qubit Hamiltonian of a bundled molecule."""
    return jordan_wigner(to_majorana(load_integrals(name)))
