"""Rotations that collapse a completely anticommuting set onto one Pauli term.

Given ``H_S = sum_j beta_j P_j`` with pairwise anticommuting ``P_j`` and
``sum beta_j**2 == 1``, a plan ``R`` satisfies ``R H_S R^dag = P_s`` for the
chosen sink ``P_s``. Each step ``(generator, angle)`` stands for
``exp(-i * angle * G / 2)`` with ``G`` a Hermitian, self-inverse combination
of Pauli strings; steps apply in list order, so ``R = R_last ... R_first``.

Two constructions are provided:

* ``sequence``: ``s - 1`` rotations generated by ``i P_s P_k``, each
  eliminating one ``P_k`` and growing the sink coefficient.
* ``single``: one rotation generated by ``i sum_k beta'_k P_s P_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .gates import CircuitEstimate, estimate_circuit, plan_gates
from .hamiltonian import PauliHamiltonian
from .partition import AnticommutingPartition, validate
from .pauli import PauliString, anticommutes, multiply

__all__ = [
    "RotationStep",
    "RotationPlan",
    "RotationError",
    "build_sequence_plan",
    "build_single_rotation_plan",
    "build_plan",
    "gate_count",
    "budgeted_split",
    "default_sink",
    "plans_for_partition",
]

ZERO_BETA = 1e-12
_NORM_TOL = 1e-10


class RotationError(ValueError):
    pass


@dataclass(frozen=True)
class RotationStep:
    """One factor ``exp(-i angle G / 2)`` with ``G = sum(c * P for c, P in generator)``."""

    generator: tuple[tuple[float, PauliString], ...]
    angle: float

    @property
    def pauli(self) -> PauliString:
        """The lone generator term of a sequence-mode step."""
        if len(self.generator) != 1:
            raise RotationError("step generator is not a single Pauli string")
        return self.generator[0][1]

    def to_dict(self) -> dict:
        return {
            "generator": [{"coefficient": c, "pauli": p.label} for c, p in self.generator],
            "angle": self.angle,
        }


@dataclass(frozen=True)
class RotationPlan:
    set_index: int
    sink: PauliString
    steps: tuple[RotationStep, ...]
    mode: str  # "sequence" or "single"

    def to_dict(self) -> dict:
        return {
            "set_index": self.set_index,
            "mode": self.mode,
            "sink": self.sink.label,
            "steps": [s.to_dict() for s in self.steps],
        }

    @classmethod
    def from_dict(cls, data: dict) -> RotationPlan:
        steps = tuple(
            RotationStep(
                tuple((float(g["coefficient"]), PauliString.from_label(g["pauli"]))
                      for g in st["generator"]),
                float(st["angle"]),
            )
            for st in data["steps"]
        )
        return cls(int(data["set_index"]), PauliString.from_label(data["sink"]), steps, data["mode"])


def _wrap(angle: float) -> float:
    # keep angles in (-pi, pi]
    if angle <= -math.pi:
        angle += 2 * math.pi
    elif angle > math.pi:
        angle -= 2 * math.pi
    return angle


def _check_inputs(ops: Sequence[PauliString], betas: Sequence[float]) -> None:
    if len(ops) == 0:
        raise RotationError("empty set")
    if len(ops) != len(betas):
        raise RotationError("ops and betas differ in length")
    if abs(math.fsum(b * b for b in betas) - 1.0) > _NORM_TOL:
        raise RotationError("betas are not l2-normalized")
    for a in range(len(ops)):
        for b in range(a + 1, len(ops)):
            if not anticommutes(ops[a], ops[b]):
                raise RotationError(f"{ops[a].word} and {ops[b].word} commute")


def default_sink(betas: Sequence[float]) -> int:
    """Largest |beta| wins, ties to the lowest position."""
    return max(range(len(betas)), key=lambda j: (abs(betas[j]), -j))


def _hermitian_product(a: PauliString, b: PauliString) -> PauliString:
    # i * a * b for anticommuting Hermitian a, b
    p = multiply(a, b)
    return p.with_phase(p.phase_exp + 1)


def _trivial_plan(ops, betas, sink, set_index, mode) -> RotationPlan:
    sign_flip = 2 if betas[sink] < 0 else 0
    p = ops[sink]
    return RotationPlan(set_index, p.with_phase(p.phase_exp + sign_flip), (), mode)


def build_sequence_plan(
    ops: Sequence[PauliString],
    betas: Sequence[float],
    sink: int | None = None,
    set_index: int = 0,
) -> RotationPlan:
    """Sequence of ``s - 1`` two-term rotations onto ``ops[sink]``.

    The step for ``P_k`` uses ``theta = atan2(beta_k, b)`` where ``b`` is the
    current sink coefficient. After the first step ``b`` is the positive
    root ``sqrt(beta_s**2 + sum_{j<k} beta_j**2)``, so the sink always
    ends with coefficient +1 when the set has two or more terms.
    """
    _check_inputs(ops, betas)
    if sink is None:
        sink = default_sink(betas)
    if len(ops) == 1:
        return _trivial_plan(ops, betas, sink, set_index, "sequence")
    p_s = ops[sink]
    b = betas[sink]
    steps = []
    for k, (p_k, beta_k) in enumerate(zip(ops, betas)):
        if k == sink:
            continue
        gen = _hermitian_product(p_s, p_k)
        if abs(beta_k) < ZERO_BETA:
            steps.append(RotationStep(((1.0, gen),), 0.0))
            continue
        theta = math.atan2(beta_k, b)
        b = math.hypot(beta_k, b)
        steps.append(RotationStep(((1.0, gen),), _wrap(theta)))
    if b < 0:
        # every other beta was negligible; the sink keeps its own sign
        return RotationPlan(set_index, p_s.with_phase(p_s.phase_exp + 2), tuple(steps), "sequence")
    return RotationPlan(set_index, p_s, tuple(steps), "sequence")


def build_single_rotation_plan(
    ops: Sequence[PauliString],
    betas: Sequence[float],
    sink: int | None = None,
    set_index: int = 0,
) -> RotationPlan:
    """One rotation about ``X = i sum_{k != s} beta'_k P_s P_k``.

    ``beta'_k = beta_k / sqrt(1 - beta_s**2)`` and the angle is
    ``arccos(beta_s)``. A set whose sink already carries all the weight
    returns an empty plan.
    """
    _check_inputs(ops, betas)
    if sink is None:
        sink = default_sink(betas)
    rest = [k for k in range(len(ops)) if k != sink]
    norm_rest = math.hypot(*(betas[k] for k in rest)) if rest else 0.0
    if norm_rest < ZERO_BETA:
        return _trivial_plan(ops, betas, sink, set_index, "single")
    p_s = ops[sink]
    generator = tuple(
        (betas[k] / norm_rest, _hermitian_product(p_s, ops[k])) for k in rest
    )
    alpha = math.atan2(norm_rest, betas[sink])
    return RotationPlan(set_index, p_s, (RotationStep(generator, _wrap(alpha)),), "single")


def build_plan(ops, betas, mode: str = "sequence", sink=None, set_index: int = 0) -> RotationPlan:
    if mode == "sequence":
        return build_sequence_plan(ops, betas, sink, set_index)
    if mode == "single":
        return build_single_rotation_plan(ops, betas, sink, set_index)
    raise ValueError(f"unknown mode {mode!r}")


def plans_for_partition(h: PauliHamiltonian, partition: AnticommutingPartition,
                        mode: str = "sequence") -> list[RotationPlan]:
    plans = []
    for l, (s, betas) in enumerate(zip(partition.sets, partition.betas)):
        ops = [h.terms[j][1] for j in s]
        plans.append(build_plan(ops, betas, mode, set_index=l))
    return plans


def gate_count(plan: RotationPlan) -> CircuitEstimate:
    """Gate totals of the compiled sequence plan after peephole cancellation."""
    if plan.mode != "sequence":
        raise RotationError("gate counts exist only for sequence plans; single mode needs an LCU circuit")
    return estimate_circuit(plan_gates(plan), len(plan.steps))


def _halve(s: tuple[int, ...]) -> list[tuple[int, ...]]:
    mid = (len(s) + 1) // 2
    return [s[:mid], s[mid:]]


def budgeted_split(
    partition: AnticommutingPartition,
    h: PauliHamiltonian,
    max_gates: int,
) -> tuple[AnticommutingPartition, list[RotationPlan], list[CircuitEstimate]]:
    """Halve every set whose rotation circuit exceeds ``max_gates``.

    Halving is at the canonical-order midpoint and repeats until each set
    fits or is a singleton (singletons need no rotation).
    """
    if max_gates < 0:
        raise ValueError("max_gates must be non-negative")
    pending = list(partition.sets)
    final: list[tuple[int, ...]] = []
    fitted: dict[tuple[int, ...], tuple[RotationPlan, CircuitEstimate]] = {}
    while pending:
        s = pending.pop(0)
        sub = AnticommutingPartition.from_sets(h, [s])
        plan = build_sequence_plan([h.terms[j][1] for j in s], sub.betas[0])
        est = gate_count(plan)
        if est.total_gates <= max_gates or len(s) == 1:
            final.append(s)
            fitted[s] = (plan, est)
        else:
            pending[0:0] = _halve(s)
    result = AnticommutingPartition.from_sets(h, final)
    plans = []
    estimates = []
    for l, s in enumerate(result.sets):
        plan, est = fitted[s]
        plans.append(RotationPlan(l, plan.sink, plan.steps, plan.mode))
        estimates.append(est)
    assert validate(result, h)
    return result, plans, estimates
