import numpy as np
import pytest

from oracles import brute_force_minimum, random_generic_problem
from spectralab.predictor import (
    Classification,
    DualFunction,
    InfeasibleProblem,
    SpectrumProblem,
    bin_means,
    broaden,
    classify,
    default_grid,
    harmonic_mean,
    predict,
    primal_optimum_check,
    solve_nu_star,
)


def two_state_problem(m):
    return SpectrumProblem(np.array([0.0, 1.0]), np.array([1.0, 1.0]), m)


def test_harmonic_mean_examples():
    assert harmonic_mean([1.0, 1.0, 1.0]) == pytest.approx(1.0)
    assert harmonic_mean([2.0, 2.0]) == pytest.approx(2.0)
    assert harmonic_mean([1.0, 3.0]) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        harmonic_mean([])
    with pytest.raises(ValueError):
        harmonic_mean([1.0, -2.0])


def test_problem_validation():
    with pytest.raises(ValueError):
        SpectrumProblem(np.array([1.0, 0.0]), np.ones(2), 1.0)
    with pytest.raises(ValueError):
        SpectrumProblem(np.array([0.0, 1.0]), np.array([1.0, -1.0]), 1.0)
    with pytest.raises(ValueError):
        SpectrumProblem(np.array([0.0]), np.array([1.0]), 0.0)


@pytest.mark.parametrize(
    "m,expected",
    [
        (1.0, Classification.DEGENERATE_L),
        (0.4, Classification.INFEASIBLE),
        (0.6, Classification.GENERIC),
        (0.5, Classification.BOUNDARY),
    ],
)
def test_classification_cases(m, expected):
    assert classify(two_state_problem(m)).case is expected


def test_classify_counts_ground_multiplicity():
    p = SpectrumProblem(np.array([0.0, 0.0, 1.0]), np.ones(3), 0.4)
    assert classify(p).ground_multiplicity == 2


def test_solve_nu_star_two_state_against_oracle():
    problem = two_state_problem(0.6)
    nu = solve_nu_star(problem)
    assert nu < 0.0
    dual = DualFunction(problem)
    assert abs(dual.derivative(nu)) < 1e-10
    _, obj = brute_force_minimum(problem.energies, problem.state_ranks, 0.6)
    assert dual.value(nu) == pytest.approx(obj, abs=1e-8)


def test_nu_star_continuity_near_degeneracy():
    # an almost-degenerate ground pair behaves like the exactly degenerate case
    eps = 1e-9
    problem = SpectrumProblem(np.array([0.0, eps, 1.0]), np.ones(3), 0.45)
    pred = predict(problem)
    assert pred.case is Classification.GENERIC
    degenerate = predict(SpectrumProblem(np.array([0.0, 0.0, 1.0]), np.ones(3), 0.45))
    assert degenerate.case is Classification.GENERIC
    assert np.abs(pred.weights - degenerate.weights).max() < 1e-6
    assert abs(pred.optimum_energy - degenerate.optimum_energy) < 1e-6


def test_predict_degenerate_case():
    pred = predict(two_state_problem(1.0))
    assert pred.case is Classification.DEGENERATE_L
    assert np.allclose(pred.weights, [1.0, 0.0])
    assert pred.optimum_energy == 0.0


def test_predict_boundary_case():
    pred = predict(two_state_problem(0.5))
    assert pred.case is Classification.BOUNDARY
    assert np.allclose(pred.weights, [0.5, 0.5])
    assert pred.optimum_energy == pytest.approx(0.5)


def test_predict_infeasible_raises():
    with pytest.raises(InfeasibleProblem):
        predict(two_state_problem(0.4))


def test_predict_matches_brute_force_k4():
    rng = np.random.default_rng(11)
    for _ in range(5):
        energies, ranks, budget = random_generic_problem(rng, 4)
        problem = SpectrumProblem(energies, ranks, budget)
        pred = predict(problem)
        p_bf, obj_bf = brute_force_minimum(energies, ranks, budget)
        assert np.abs(pred.weights - p_bf).max() < 1e-5
        assert abs(pred.optimum_energy - obj_bf) < 1e-6


def test_primal_optimum_check_generic():
    rng = np.random.default_rng(12)
    for _ in range(5):
        energies, ranks, budget = random_generic_problem(rng, 5)
        problem = SpectrumProblem(energies, ranks, budget)
        res = primal_optimum_check(problem, predict(problem))
        assert res.max_residual() <= 1e-10


def test_primal_optimum_check_rejects_non_generic():
    problem = two_state_problem(1.0)
    with pytest.raises(ValueError):
        primal_optimum_check(problem, predict(problem))


def test_dual_dominance_and_optimum():
    rng = np.random.default_rng(13)
    energies, ranks, budget = random_generic_problem(rng, 6)
    problem = SpectrumProblem(energies, ranks, budget)
    pred = predict(problem)
    dual = DualFunction(problem)
    nus = energies[0] - np.geomspace(1e-6, 100.0, 100)
    values = np.array([dual.value(nu) for nu in nus])
    assert np.all(pred.optimum_energy >= values - 1e-10)
    assert pred.optimum_energy == pytest.approx(dual.value(pred.nu_star), abs=1e-10)


def test_dual_concavity_and_single_sign_change():
    rng = np.random.default_rng(14)
    for _ in range(10):
        energies, ranks, budget = random_generic_problem(rng, 5)
        dual = DualFunction(SpectrumProblem(energies, ranks, budget))
        nus = energies[0] - np.geomspace(1e-8, 1e4, 50)
        assert all(dual.second_derivative(nu) < 0 for nu in nus)
        signs = np.sign([dual.derivative(nu) for nu in nus])
        # descending nu: negative near E_1, positive far left; one flip
        flips = np.count_nonzero(np.diff(signs[signs != 0]))
        assert flips == 1
        assert dual.limit_derivative_at_ground() < 0
        assert dual.limit_derivative_at_minus_infinity() > 0


def test_optimum_monotone_in_budget():
    rng = np.random.default_rng(15)
    energies, ranks, _ = random_generic_problem(rng, 5)
    lo = 1.0 / np.sum(1.0 / ranks)
    hi = float(ranks[0])
    budgets = np.linspace(lo * 1.02, hi * 0.98, 12)
    values = [predict(SpectrumProblem(energies, ranks, m)).optimum_energy for m in budgets]
    assert all(b <= a + 1e-10 for a, b in zip(values, values[1:]))


def test_prediction_is_feasible_for_sqrt_constraint():
    rng = np.random.default_rng(16)
    for m in (1.0, 0.5, 0.6):
        pred = predict(two_state_problem(m))
        problem = two_state_problem(m)
        lhs = float(np.sqrt(pred.weights / problem.state_ranks).sum())
        assert lhs >= 1.0 / np.sqrt(m) - 1e-10
    for _ in range(5):
        energies, ranks, budget = random_generic_problem(rng, 4)
        pred = predict(SpectrumProblem(energies, ranks, budget))
        lhs = float(np.sqrt(pred.weights / ranks).sum())
        assert lhs >= 1.0 / np.sqrt(budget) - 1e-10


def test_shift_covariance():
    rng = np.random.default_rng(17)
    energies, ranks, budget = random_generic_problem(rng, 5)
    base = predict(SpectrumProblem(energies, ranks, budget))
    shift = 3.7
    moved = predict(SpectrumProblem(energies + shift, ranks, budget))
    assert moved.nu_star == pytest.approx(base.nu_star + shift, abs=1e-9)
    assert np.abs(moved.weights - base.weights).max() < 1e-10
    assert moved.optimum_energy == pytest.approx(base.optimum_energy + shift, abs=1e-9)


def test_large_k_sums_stay_accurate():
    rng = np.random.default_rng(18)
    k = 1 << 16
    energies = np.sort(rng.uniform(0.0, 50.0, k))
    energies[0] -= 0.5  # isolate the ground energy
    ranks = rng.uniform(0.5, 200.0, k)
    lo = 1.0 / np.sum(1.0 / ranks)
    problem = SpectrumProblem(energies, ranks, 10 * lo)
    pred = predict(problem)
    assert pred.case is Classification.GENERIC
    assert primal_optimum_check(problem, pred).max_residual() <= 1e-10


def test_broaden_single_peak():
    grid = np.linspace(-1.0, 1.0, 2001)
    dens = broaden(np.array([0.0]), np.array([1.0]), 0.1, grid)
    assert dens.max() == pytest.approx(1.0 / (0.1 * np.sqrt(2 * np.pi)), rel=1e-6)
    assert np.trapezoid(dens, grid) == pytest.approx(1.0, abs=1e-3)


def test_broaden_symmetric_pair():
    grid = np.linspace(-2.0, 2.0, 401)
    dens = broaden(np.array([-0.5, 0.5]), np.array([0.5, 0.5]), 0.1, grid)
    assert np.abs(dens - dens[::-1]).max() < 1e-12


def test_default_grid_covers_spectrum():
    grid = default_grid(np.array([-1.0, 2.0]), 0.1)
    assert grid[0] <= -2.0 + 1e-9 and grid[-1] >= 3.0 - 0.1
    assert np.allclose(np.diff(grid), 0.02)


def test_bin_means_examples():
    centers, means = bin_means(np.array([0.0, 0.04]), np.array([2.0, 4.0]))
    assert centers.tolist() == [0.0]
    assert means.tolist() == [3.0]
    centers, means = bin_means(np.array([0.05]), np.array([7.0]))
    assert centers.tolist() == [pytest.approx(0.1)]
    centers, means = bin_means(np.linspace(0, 1, 50), np.full(50, 2.5))
    assert np.allclose(means, 2.5)
