"""Closed forms for Hamiltonians with exactly two distinct energy levels,
and the resource-ratio case analysis for ground-energy estimation.

For levels xi_1 < xi_2 write a_1 and a_2 for the summed inverse stable
ranks over each level. The rank budget is parametrized by mu in (0, 1) as
m(mu) = (a_1 + mu a_2) / (a_1 (a_1 + a_2)), which sweeps exactly the
non-trivial budgets, and the minimizing ground-level weight and energy
follow in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .predictor import Classification, SpectrumProblem, classify, predict


@dataclass(frozen=True)
class TwoLevelSystem:
    """Two energy levels with their summed inverse stable ranks."""

    xi1: float
    xi2: float
    a1: float
    a2: float

    def __post_init__(self) -> None:
        if not self.xi2 > self.xi1:
            raise ValueError("need xi2 > xi1")
        if self.a1 <= 0 or self.a2 <= 0:
            raise ValueError("level weights a1, a2 must be positive")

    @property
    def gap(self) -> float:
        return self.xi2 - self.xi1

    @property
    def p_lower_limit(self) -> float:
        """Infimum of reachable ground-level weight, a1 / (a1 + a2)."""
        return self.a1 / (self.a1 + self.a2)


@dataclass(frozen=True)
class TwoLevelSpectrum:
    m: float
    p: float
    energy: float


def spectrum_from_mu(sys: TwoLevelSystem, mu: float) -> TwoLevelSpectrum:
    """Budget, ground-level weight, and energy at parameter mu in (0, 1)."""
    if not 0.0 < mu < 1.0:
        raise ValueError("mu must lie in the open interval (0, 1)")
    a1, a2 = sys.a1, sys.a2
    m = (a1 + mu * a2) / (a1 * (a1 + a2))
    p = (a1 + math.sqrt(mu) * a2) ** 2 / ((a1 + a2) * (a1 + mu * a2))
    energy = sys.xi1 + sys.gap * (1.0 - p)
    return TwoLevelSpectrum(m=m, p=p, energy=energy)


def m_from_p(sys: TwoLevelSystem, p: float) -> float:
    """Smallest budget achieving ground-level weight p:
    m = 1 / (sqrt(a1 p) + sqrt(a2 (1 - p)))^2."""
    if not sys.p_lower_limit < p < 1.0:
        raise ValueError(
            f"p must lie in ({sys.p_lower_limit:.6g}, 1), got {p}"
        )
    return 1.0 / (math.sqrt(sys.a1 * p) + math.sqrt(sys.a2 * (1.0 - p))) ** 2


@dataclass(frozen=True)
class AdvantageReport:
    """Budget ratio between a near-certain and a polynomially small
    ground-level weight target, with the applicable analytic cap."""

    m_q: float
    m_c: float
    ratio: float
    case: str  # "a1>=a2" or "a1<=a2"
    bound: float

    @property
    def bounded(self) -> bool:
        return self.ratio <= self.bound + 1e-12


def advantage(sys: TwoLevelSystem, p_quantum: float, p_classical: float) -> AdvantageReport:
    """Budgets for the two weight targets and their ratio.

    Case a1 >= a2 caps the ratio by (sqrt(p_q) + sqrt(1-p_q))^2 / p_c;
    case a1 <= a2 by (sqrt(p_q) + sqrt(1-p_q))^2 / (1 - p_c). Both follow
    from sandwiching m between the single-level extremes.
    """
    m_q = m_from_p(sys, p_quantum)
    m_c = m_from_p(sys, p_classical)
    ratio = m_c / m_q
    envelope = (math.sqrt(p_quantum) + math.sqrt(1.0 - p_quantum)) ** 2
    if sys.a1 >= sys.a2:
        case = "a1>=a2"
        bound = envelope / p_classical
    else:
        case = "a1<=a2"
        bound = envelope / (1.0 - p_classical)
    return AdvantageReport(m_q=m_q, m_c=m_c, ratio=ratio, case=case, bound=bound)


def cross_check_predictor(
    sys: TwoLevelSystem, mu: float, ground_count: int, excited_count: int
) -> float:
    """Residual between the closed form and the generic solver on an
    explicit (ground_count + excited_count)-state problem whose per-level
    inverse ranks sum to a1 and a2.

    Raises if the explicit problem does not classify as GENERIC.
    """
    if ground_count < 1 or excited_count < 1:
        raise ValueError("need at least one state per level")
    closed = spectrum_from_mu(sys, mu)
    energies = np.concatenate(
        [np.full(ground_count, sys.xi1), np.full(excited_count, sys.xi2)]
    )
    ranks = np.concatenate(
        [np.full(ground_count, ground_count / sys.a1),
         np.full(excited_count, excited_count / sys.a2)]
    )
    problem = SpectrumProblem(energies=energies, state_ranks=ranks, rank_budget=closed.m)
    report = classify(problem)
    if report.case is not Classification.GENERIC:
        raise ValueError(f"explicit problem classified as {report.case.name}, not GENERIC")
    solved = predict(problem)
    p_ground = float(solved.weights[:ground_count].sum())
    return max(
        abs(p_ground - closed.p),
        abs(solved.optimum_energy - closed.energy),
    )
