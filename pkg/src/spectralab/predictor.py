"""Energy-minimizing spectrum prediction under a stable-rank budget.

Given eigenstate energies E_i (ascending), per-eigenstate stable ranks
M_i, and a rank budget m for the superposition, the minimum of
sum p_i E_i over amplitude weights p on the simplex subject to
sum sqrt(p_i / M_i) >= 1 / sqrt(m) is characterized by a scalar concave
dual: maximize h(nu) = nu + (m * S_1(nu))^-1 over nu < E_1 with
S_p(nu) = sum_i 1 / (M_i (E_i - nu)^p). At the unique stationary point
nu* the optimal weights follow an inverse-square law,
p_i proportional to 1 / (M_i (E_i - nu*)^2).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

# Tolerance for the non-triviality threshold comparisons and energy ties.
_CLASSIFY_TOL = 1e-12
_BRACKET_BLOWUP = 1e6


class InfeasibleProblem(ValueError):
    """No weight vector can satisfy the rank-budget constraint."""


def harmonic_mean(values) -> float:
    """k / sum(1 / v_i) for positive v."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("harmonic mean of an empty list")
    if np.any(v <= 0):
        raise ValueError("harmonic mean requires positive entries")
    return float(v.size / np.sum(1.0 / v))


@dataclass(frozen=True)
class SpectrumProblem:
    """Inputs of the constrained energy minimization.

    energies: ascending eigenstate energies (length k >= 1).
    state_ranks: positive stable ranks M_i of the eigenstates.
    rank_budget: positive stable-rank budget m of the superposition.
    """

    energies: np.ndarray
    state_ranks: np.ndarray
    rank_budget: float

    def __post_init__(self) -> None:
        e = np.asarray(self.energies, dtype=float)
        m = np.asarray(self.state_ranks, dtype=float)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "state_ranks", m)
        if e.ndim != 1 or e.size < 1:
            raise ValueError("need at least one energy")
        if m.shape != e.shape:
            raise ValueError("energies and state_ranks must have equal length")
        if np.any(np.diff(e) < 0):
            raise ValueError("energies must be ascending")
        if np.any(m <= 0):
            raise ValueError("state ranks must be positive")
        if not self.rank_budget > 0:
            raise ValueError("rank budget must be positive")

    @property
    def k(self) -> int:
        return self.energies.size

    @property
    def ground_multiplicity(self) -> int:
        e1 = self.energies[0]
        tol = _CLASSIFY_TOL * max(1.0, abs(e1))
        return int(np.sum(self.energies <= e1 + tol))


class Classification(enum.Enum):
    DEGENERATE_L = "DEGENERATE_L"
    INFEASIBLE = "INFEASIBLE"
    BOUNDARY = "BOUNDARY"
    GENERIC = "GENERIC"


@dataclass(frozen=True)
class NonTrivialityReport:
    ground_multiplicity: int
    case: Classification
    threshold_ground: float  # H(M_1..M_l) / m, compared against l
    threshold_all: float  # H(M_1..M_k) / m, compared against k


def classify(problem: SpectrumProblem) -> NonTrivialityReport:
    """Four-way split of the problem.

    DEGENERATE_L: the budget admits a combination supported on the ground
    manifold, so the minimum is simply E_1. INFEASIBLE: no weight vector
    meets the constraint. BOUNDARY: exactly one feasible point (all
    inverse-rank weights). GENERIC: interior case solved by the dual.
    """
    l = problem.ground_multiplicity
    m = problem.rank_budget
    thr_ground = harmonic_mean(problem.state_ranks[:l]) / m
    thr_all = harmonic_mean(problem.state_ranks) / m
    if l >= thr_ground - _CLASSIFY_TOL:
        case = Classification.DEGENERATE_L
    elif problem.k < thr_all - _CLASSIFY_TOL:
        case = Classification.INFEASIBLE
    elif abs(problem.k - thr_all) <= _CLASSIFY_TOL:
        case = Classification.BOUNDARY
    else:
        case = Classification.GENERIC
    return NonTrivialityReport(
        ground_multiplicity=l, case=case, threshold_ground=thr_ground, threshold_all=thr_all
    )


class DualFunction:
    """The scalar dual h and its derivatives on nu < E_1.

    h(nu) = nu + 1 / (m * S_1(nu)), h' = 1 - S_2 / (m * S_1^2),
    h'' = -(2/m) (S_1 S_3 - S_2^2) / S_1^3. Strict concavity holds
    whenever the energies are not all equal.
    """

    def __init__(self, problem: SpectrumProblem):
        self.problem = problem

    def power_sum(self, p: int, nu: float) -> float:
        """S_p(nu) = sum_i 1 / (M_i (E_i - nu)^p); numpy pairwise summation
        keeps the wide-dynamic-range sums accurate at large k."""
        gaps = self.problem.energies - nu
        if np.any(gaps <= 0):
            raise ValueError("nu must lie strictly below the ground energy")
        return float(np.sum(1.0 / (self.problem.state_ranks * gaps**p)))

    def value(self, nu: float) -> float:
        return nu + 1.0 / (self.problem.rank_budget * self.power_sum(1, nu))

    def derivative(self, nu: float) -> float:
        s1 = self.power_sum(1, nu)
        s2 = self.power_sum(2, nu)
        return 1.0 - s2 / (self.problem.rank_budget * s1**2)

    def second_derivative(self, nu: float) -> float:
        s1 = self.power_sum(1, nu)
        s2 = self.power_sum(2, nu)
        s3 = self.power_sum(3, nu)
        return -(2.0 / self.problem.rank_budget) * (s1 * s3 - s2**2) / s1**3

    def limit_derivative_at_ground(self) -> float:
        """lim of h' as nu approaches E_1 from below: 1 - H(M_1..l)/(m l)."""
        l = self.problem.ground_multiplicity
        return 1.0 - 1.0 / (
            self.problem.rank_budget * np.sum(1.0 / self.problem.state_ranks[:l])
        )

    def limit_derivative_at_minus_infinity(self) -> float:
        """lim of h' as nu -> -inf: 1 - H(M_1..k)/(m k)."""
        return 1.0 - 1.0 / (
            self.problem.rank_budget * np.sum(1.0 / self.problem.state_ranks)
        )


def solve_nu_star(problem: SpectrumProblem, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Unique root of h' below E_1 for a GENERIC problem.

    Brackets by geometric expansion away from E_1 (h' < 0 near E_1,
    h' > 0 far left), then runs bisection with Newton acceleration;
    h' is strictly decreasing so the bracket never lies.
    """
    report = classify(problem)
    if report.case is not Classification.GENERIC:
        raise ValueError(f"nu* is defined only in the GENERIC case, got {report.case.name}")
    dual = DualFunction(problem)
    e1 = float(problem.energies[0])
    span = max(1.0, float(problem.energies[-1] - e1))

    # Find nu_neg with h'(nu_neg) < 0 by approaching E_1 geometrically. The
    # sign flip can sit arbitrarily close to E_1 when the budget almost
    # saturates the ground-manifold threshold, so shrink down to rounding.
    delta = span
    nu_neg = None
    while delta > 4.0 * np.finfo(float).eps * max(1.0, abs(e1)):
        if dual.derivative(e1 - delta) < 0:
            nu_neg = e1 - delta
            break
        delta /= 2.0
    if nu_neg is None:
        raise ArithmeticError("no negative-derivative point found near the ground energy")
    # Expand leftward until h' > 0.
    delta = max(span, e1 - nu_neg)
    nu_pos = None
    while delta < span * _BRACKET_BLOWUP:
        if dual.derivative(e1 - delta) > 0:
            nu_pos = e1 - delta
            break
        delta *= 2.0
    if nu_pos is None:
        raise ArithmeticError(
            "bracket expansion exceeded its budget; dual derivative never turned positive"
        )

    lo, hi = nu_pos, nu_neg  # h'(lo) > 0 > h'(hi)
    scale = max(1.0, abs(dual.derivative(lo)), abs(dual.derivative(hi)))
    nu = 0.5 * (lo + hi)
    for _ in range(max_iter):
        d = dual.derivative(nu)
        if abs(d) <= tol * scale:
            return float(nu)
        if d > 0:
            lo = nu
        else:
            hi = nu
        if hi - lo <= 4.0 * np.finfo(float).eps * max(1.0, abs(lo), abs(hi)):
            # bracket exhausted at floating-point resolution
            return float(0.5 * (lo + hi))
        # Newton step on h' (monotone), kept only when it stays bracketed.
        dd = dual.second_derivative(nu)
        step = nu - d / dd if dd != 0 else None
        nu = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
    d = dual.derivative(nu)
    if abs(d) <= 10 * tol * scale:
        return float(nu)
    raise ArithmeticError(f"root refinement stalled, |h'| = {abs(d):.3e}")


@dataclass(frozen=True)
class PredictedSpectrum:
    weights: np.ndarray
    nu_star: float | None
    optimum_energy: float
    case: Classification


def predict(problem: SpectrumProblem) -> PredictedSpectrum:
    """Minimizing weights p_i and the achieved energy.

    GENERIC uses the inverse-square law at nu*; DEGENERATE_L spreads
    inverse-rank weight over the ground manifold; BOUNDARY pins
    p_i = m / M_i. INFEASIBLE raises.
    """
    report = classify(problem)
    m = problem.rank_budget
    ranks = problem.state_ranks
    if report.case is Classification.INFEASIBLE:
        raise InfeasibleProblem(
            f"no feasible weights: harmonic-mean threshold {report.threshold_all:.6g} "
            f"exceeds k = {problem.k}"
        )
    if report.case is Classification.DEGENERATE_L:
        l = report.ground_multiplicity
        p = np.zeros(problem.k)
        inv = 1.0 / ranks[:l]
        p[:l] = inv / inv.sum()
        return PredictedSpectrum(
            weights=p, nu_star=None, optimum_energy=float(problem.energies[0]), case=report.case
        )
    if report.case is Classification.BOUNDARY:
        p = m / ranks
        optimum = float(m * np.sum(problem.energies / ranks))
        return PredictedSpectrum(weights=p, nu_star=None, optimum_energy=optimum, case=report.case)
    nu = solve_nu_star(problem)
    raw = 1.0 / (ranks * (problem.energies - nu) ** 2)
    p = raw / raw.sum()
    optimum = DualFunction(problem).value(nu)
    return PredictedSpectrum(weights=p, nu_star=nu, optimum_energy=optimum, case=report.case)


@dataclass(frozen=True)
class OptimalityResiduals:
    constraint_activity: float  # |sum sqrt(p_i/M_i) - 1/sqrt(m)|
    stationarity: float  # max_i |p_i - lambda_0^2 / (4 M_i (E_i - nu*)^2)|
    normalization: float  # |sum p_i - 1|
    objective_gap: float  # |sum p_i E_i - h(nu*)|
    multiplier: float  # lambda_0 at the optimum

    def max_residual(self) -> float:
        return max(
            self.constraint_activity, self.stationarity, self.normalization, self.objective_gap
        )


def primal_optimum_check(
    problem: SpectrumProblem, spectrum: PredictedSpectrum, tol: float = 1e-10
) -> OptimalityResiduals:
    """First-order optimality residuals of a GENERIC prediction.

    Strong duality gives the stationary weights in closed form from the
    scalar multiplier lambda_0 = 2 / (sqrt(m) S_1(nu*)); all residuals
    must sit below ``tol``.
    """
    if spectrum.case is not Classification.GENERIC:
        raise ValueError("optimality residuals are defined for GENERIC predictions")
    m = problem.rank_budget
    nu = spectrum.nu_star
    dual = DualFunction(problem)
    s1 = dual.power_sum(1, nu)
    lam0 = 2.0 / (math.sqrt(m) * s1)
    gaps = problem.energies - nu
    stationary_p = lam0**2 / (4.0 * problem.state_ranks * gaps**2)
    p = spectrum.weights
    residuals = OptimalityResiduals(
        constraint_activity=abs(
            float(np.sum(np.sqrt(p / problem.state_ranks))) - 1.0 / math.sqrt(m)
        ),
        stationarity=float(np.abs(p - stationary_p).max()),
        normalization=abs(float(p.sum()) - 1.0),
        objective_gap=abs(float(p @ problem.energies) - spectrum.optimum_energy),
        multiplier=lam0,
    )
    if residuals.max_residual() > tol:
        raise AssertionError(f"optimality residuals exceed {tol:g}: {residuals}")
    return residuals


def broaden(
    energies: np.ndarray, weights: np.ndarray, width: float, grid: np.ndarray
) -> np.ndarray:
    """Sum of Gaussians (standard deviation ``width``) centered at the
    spectrum's energies, weighted by p_i, sampled on ``grid``."""
    if width <= 0:
        raise ValueError("width must be positive")
    e = np.asarray(energies, dtype=float)
    p = np.asarray(weights, dtype=float)
    g = np.asarray(grid, dtype=float)
    z = (g[:, None] - e[None, :]) / width
    dens = np.exp(-0.5 * z**2) @ p
    return dens / (width * math.sqrt(2.0 * math.pi))


def default_grid(energies: np.ndarray, width: float) -> np.ndarray:
    """Broadening grid spanning [E_1 - 1, E_k + 1] with step width / 5."""
    e = np.asarray(energies, dtype=float)
    lo, hi = float(e.min()) - 1.0, float(e.max()) + 1.0
    return np.arange(lo, hi + width / 5.0, width / 5.0)


def bin_means(
    offsets: np.ndarray, values: np.ndarray, bin_width: float = 0.1
) -> tuple[np.ndarray, np.ndarray]:
    """Mean of ``values`` grouped into half-open bins
    [w*j - w/2, w*j + w/2) of the energy offsets; empty bins are omitted.

    Returns (bin centers, means) with centers ascending.
    """
    x = np.asarray(offsets, dtype=float)
    v = np.asarray(values, dtype=float)
    if x.shape != v.shape:
        raise ValueError("offsets and values must have equal length")
    j = np.floor((x + bin_width / 2.0) / bin_width).astype(np.int64)
    uniq, inv = np.unique(j, return_inverse=True)
    sums = np.zeros(uniq.size)
    counts = np.zeros(uniq.size)
    np.add.at(sums, inv, v)
    np.add.at(counts, inv, 1.0)
    return uniq * bin_width, sums / counts
