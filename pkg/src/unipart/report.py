"""JSON reports: deterministic writing, reloading with re-validation, and oracle residuals."""

from __future__ import annotations

import datetime as _dt
import json
import math
from dataclasses import dataclass

import numpy as np

from .gates import CircuitEstimate
from .hamiltonian import PauliHamiltonian
from .measure import cost_report
from .partition import AnticommutingPartition, find_violation
from .rotation import RotationPlan, gate_count

__all__ = [
    "SCHEMA_VERSION",
    "RESIDUAL_TOL",
    "ReportError",
    "LoadedReport",
    "dumps",
    "write_json",
    "partition_report",
    "load_report",
    "plan_residuals",
]

SCHEMA_VERSION = 1
RESIDUAL_TOL = 1e-10


class ReportError(ValueError):
    pass


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            raise ReportError(f"non-finite number {value} in report")
        text = f"{value:.17g}"
        # keep floats recognisable as floats on reload
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, str, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise ReportError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def _timestamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()


def plan_residuals(
    h: PauliHamiltonian,
    partition: AnticommutingPartition,
    plans: list[RotationPlan],
) -> dict:
    """Dense residuals: each ``||R H_S R^dag - P_s||`` and the reassembled Hamiltonian."""
    from . import simulator

    per_set = []
    d = 2 ** h.n_qubits
    rebuilt = h.identity_offset * np.eye(d, dtype=complex)
    for plan, s, betas, gamma in zip(plans, partition.sets, partition.betas, partition.gammas):
        sub = PauliHamiltonian.from_terms(h.n_qubits, [(b, h.terms[j][1]) for j, b in zip(s, betas)])
        rotated = simulator.conjugate(plan, simulator.hamiltonian_matrix(sub))
        sink = simulator.pauli_matrix(plan.sink)
        per_set.append(simulator.frobenius(rotated, sink))
        # R^dag P_s R, built by conjugating with the inverse steps
        inverse = RotationPlan(plan.set_index, plan.sink,
                               tuple(type(st)(st.generator, -st.angle) for st in reversed(plan.steps)),
                               plan.mode)
        rebuilt += gamma * simulator.conjugate(inverse, sink)
    total = simulator.frobenius(rebuilt, simulator.hamiltonian_matrix(h))
    return {
        "tolerance": RESIDUAL_TOL,
        "max_set_residual": max(per_set, default=0.0),
        "reassembly_residual": total,
        "set_residuals": per_set,
    }


def partition_report(
    h: PauliHamiltonian,
    partition: AnticommutingPartition,
    plans: list[RotationPlan],
    estimates: list[CircuitEstimate] | None,
    epsilon: float,
    config: dict,
    verification: dict | None = None,
) -> dict:
    cost = cost_report(h, partition, epsilon)
    report = {
        "schema_version": SCHEMA_VERSION,
        "timestamp": _timestamp(),
        "config": config,
        "terms_before": len(h.terms),
        "terms_after": len(partition.sets),
        "hamiltonian": h.to_dict(),
        "partition": partition.to_dict(h),
        "plans": [p.to_dict() for p in plans],
        "measurement_cost": cost.to_dict(),
    }
    if estimates is not None:
        report["gate_counts"] = {
            "total_gates": sum(e.total_gates for e in estimates),
            "total_cnots": sum(e.cnot_count for e in estimates),
            "per_set": [e.to_dict() for e in estimates],
        }
    if verification is not None:
        report["verification"] = verification
    return report


@dataclass
class LoadedReport:
    data: dict
    hamiltonian: PauliHamiltonian
    partition: AnticommutingPartition
    plans: list[RotationPlan]


def load_report(path) -> LoadedReport:
    """Read a partition report and re-check it against its own Hamiltonian.

    Raises :class:`ReportError` when the partition no longer validates, the
    plans do not line up with the sets, or stored gate counts disagree with
    a fresh compilation.
    """
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ReportError(f"cannot read report: {exc}") from None
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ReportError(f"unsupported schema_version {data.get('schema_version')!r}")
    try:
        h = PauliHamiltonian.from_dict(data["hamiltonian"])
        partition = AnticommutingPartition.from_dict(data["partition"])
        plans = [RotationPlan.from_dict(p) for p in data["plans"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ReportError(f"malformed report: {exc}") from None
    problem = find_violation(partition, h)
    if problem is not None:
        raise ReportError(f"partition does not validate: {problem}")
    if len(plans) != len(partition.sets):
        raise ReportError(f"{len(plans)} plans for {len(partition.sets)} sets")
    for plan, s in zip(plans, partition.sets):
        members = {h.terms[j][1].key for j in s}
        if plan.sink.key not in members:
            raise ReportError(f"plan {plan.set_index} sink {plan.sink.word} is not in its set")
        if len(s) > 1 and plan.mode == "sequence" and len(plan.steps) != len(s) - 1:
            raise ReportError(f"plan {plan.set_index} has {len(plan.steps)} steps for {len(s)} terms")
    if "gate_counts" in data:
        stored = [e["total_gates"] for e in data["gate_counts"]["per_set"]]
        fresh = [gate_count(p).total_gates for p in plans]
        if stored != fresh:
            raise ReportError("stored gate counts disagree with the plans")
    if data["terms_after"] != len(partition.sets) or data["terms_before"] != len(h.terms):
        raise ReportError("term counts disagree with the partition")
    return LoadedReport(data, h, partition, plans)
