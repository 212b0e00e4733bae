"""Gate-level compilation of Pauli rotations and gate accounting.

``exp(-i theta P / 2)`` compiles to: a basis change on every non-Z factor
(``H`` for X, ``V = Rx(pi/2)`` for Y), a CNOT ladder onto the last active
qubit, ``Rz(theta)`` there, then the mirror image. A weight-``w`` string
costs ``2(w - 1)`` CNOTs, one rotation and two basis gates per X or Y.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .pauli import PauliString

__all__ = ["Gate", "CircuitEstimate", "pauli_rotation_gates", "plan_gates",
           "cancel_adjacent", "estimate_circuit"]

_INVERSE = {"H": "H", "V": "Vdg", "Vdg": "V", "CX": "CX"}


class Gate(NamedTuple):
    name: str  # H, V, Vdg, CX (control, target) or RZ
    qubits: tuple[int, ...]
    param: float = 0.0
    step: int = 0  # index of the plan step that emitted the gate


@dataclass(frozen=True)
class CircuitEstimate:
    per_step_gates: tuple[int, ...]
    total_gates: int
    cnot_count: int
    single_qubit_count: int

    def to_dict(self) -> dict:
        return {
            "per_step_gates": list(self.per_step_gates),
            "total_gates": self.total_gates,
            "cnot_count": self.cnot_count,
            "single_qubit_count": self.single_qubit_count,
        }


def pauli_rotation_gates(p: PauliString, theta: float, step: int = 0) -> list[Gate]:
    """Gates for ``exp(-i theta P / 2)``; a ``-P`` phase flips the angle."""
    if p.phase_exp % 2:
        raise ValueError(f"{p.label} is not Hermitian")
    if p.phase_exp == 2:
        theta = -theta
    active = [q for q in range(p.n_qubits) if p.support >> q & 1]
    if not active or theta == 0.0:
        return []
    pre = []
    post = []
    for q in active:
        letter = p.letter(q)
        if letter == "X":
            pre.append(Gate("H", (q,), step=step))
            post.append(Gate("H", (q,), step=step))
        elif letter == "Y":
            pre.append(Gate("V", (q,), step=step))
            post.append(Gate("Vdg", (q,), step=step))
    ladder = [Gate("CX", (a, b), step=step) for a, b in zip(active, active[1:])]
    return (pre + ladder + [Gate("RZ", (active[-1],), theta, step)]
            + ladder[::-1] + post)


def plan_gates(plan) -> list[Gate]:
    gates: list[Gate] = []
    for i, st in enumerate(plan.steps):
        gates += pauli_rotation_gates(st.pauli, st.angle, i)
    return gates


def cancel_adjacent(gates: Iterable[Gate]) -> list[Gate]:
    """Remove gate/inverse pairs that meet after commuting past disjoint gates.

    Gates on disjoint qubits commute, so each incoming gate looks back past
    them for its inverse; any overlapping gate in between blocks the search.
    """
    out: list[Gate] = []
    for g in gates:
        inv = _INVERSE.get(g.name)
        hit = None
        if inv is not None:
            for pos in range(len(out) - 1, -1, -1):
                prev = out[pos]
                if set(prev.qubits) & set(g.qubits):
                    if prev.name == inv and prev.qubits == g.qubits:
                        hit = pos
                    break
        if hit is None:
            out.append(g)
        else:
            del out[hit]
    return out


def estimate_circuit(gates: list[Gate], n_steps: int | None = None) -> CircuitEstimate:
    if n_steps is None:
        n_steps = max((g.step for g in gates), default=-1) + 1
    kept = cancel_adjacent(gates)
    per_step = [0] * n_steps
    cnots = 0
    for g in kept:
        per_step[g.step] += 1
        cnots += g.name == "CX"
    return CircuitEstimate(tuple(per_step), len(kept), cnots, len(kept) - cnots)
