"""Measurement-cost model before and after partitioning.

With per-term standard deviations ``sigma_j`` the optimal shot split for
precision ``epsilon`` is ``M_j = |a_j| sigma_j (sum_k |a_k| sigma_k) / eps^2``.
Self-inverse observables have ``sigma <= 1``, which bounds the total by
``Lambda^2 / eps^2`` with ``Lambda`` the l1 norm of the coefficients.
Partitioning replaces ``Lambda`` by ``Lambda_c = sum_l gamma_l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hamiltonian import PauliHamiltonian, l1_norm
from .partition import AnticommutingPartition, find_violation

__all__ = ["CostReport", "shot_allocation", "cost_report", "variance_given_state"]


@dataclass(frozen=True)
class CostReport:
    lambda_before: float
    lambda_after: float
    s_max: int
    shot_bound_before: float
    shot_bound_after: float
    epsilon: float

    @property
    def lower_bound(self) -> float:
        """``Lambda / sqrt(s_max)``, never above ``lambda_after``."""
        return self.lambda_before / math.sqrt(self.s_max) if self.s_max else 0.0

    def to_dict(self) -> dict:
        return {
            "lambda_before": self.lambda_before,
            "lambda_after": self.lambda_after,
            "lambda_lower_bound": self.lower_bound,
            "s_max": self.s_max,
            "epsilon": self.epsilon,
            "shot_bound_before": self.shot_bound_before,
            "shot_bound_after": self.shot_bound_after,
        }


def shot_allocation(
    coeffs: Sequence[float],
    sigmas: Sequence[float] | None = None,
    epsilon: float = 1.0,
) -> list[float]:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if sigmas is None:
        sigmas = [1.0] * len(coeffs)
    if len(sigmas) != len(coeffs):
        raise ValueError("coeffs and sigmas differ in length")
    for s in sigmas:
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"sigma {s} outside [0, 1]")
    weights = [abs(a) * s for a, s in zip(coeffs, sigmas)]
    total = math.fsum(weights)
    return [w * total / epsilon**2 for w in weights]


def cost_report(h: PauliHamiltonian, partition: AnticommutingPartition, epsilon: float) -> CostReport:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    problem = find_violation(partition, h)
    if problem is not None:
        raise ValueError(f"invalid partition: {problem}")
    lam = l1_norm(h)
    lam_c = math.fsum(abs(g) for g in partition.gammas)
    return CostReport(
        lambda_before=lam,
        lambda_after=lam_c,
        s_max=partition.s_max,
        shot_bound_before=lam**2 / epsilon**2,
        shot_bound_after=lam_c**2 / epsilon**2,
        epsilon=epsilon,
    )


def variance_given_state(
    h: PauliHamiltonian,
    partition: AnticommutingPartition,
    state: np.ndarray,
    mode: str = "sequence",
) -> list[float]:
    """Per-set ``sigma = sqrt(1 - <R^dag P_s R>^2)`` in ``state``."""
    from . import simulator
    from .rotation import plans_for_partition

    psi = np.asarray(state, dtype=complex).ravel()
    if psi.size != 2**h.n_qubits:
        raise ValueError(f"state dimension {psi.size} does not match {h.n_qubits} qubits")
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-10:
        raise ValueError("state is not normalized")
    sigmas = []
    for plan in plans_for_partition(h, partition, mode):
        u = simulator.plan_matrix(plan)
        rotated = u @ psi
        value = simulator.expectation(plan.sink, rotated)
        sigmas.append(math.sqrt(max(0.0, 1.0 - value * value)))
    return sigmas
