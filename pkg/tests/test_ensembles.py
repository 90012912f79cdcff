import numpy as np
import pytest
from scipy import stats

from spectralab.ensembles import (
    ab_statistics,
    haar_unitary,
    norm_scaling_check,
    sample_basis,
    sample_ginibre,
)


def test_ginibre_reproducible_and_shaped():
    a = sample_ginibre(4, seed=123)
    b = sample_ginibre(4, seed=123)
    assert np.array_equal(a, b)
    assert a.shape == (4, 4) and np.iscomplexobj(a)
    assert not np.array_equal(a, sample_ginibre(4, seed=124))


def test_ginibre_moments():
    d, trials = 3, 10_000
    rng_seeds = np.random.SeedSequence(7).spawn(trials)
    samples = np.stack([sample_ginibre(d, s) for s in rng_seeds[:2000]])
    entries = samples.ravel()
    n_real = 2 * entries.size
    # mean of all real components is 0 within 4 sigma
    comps = np.concatenate([entries.real, entries.imag])
    assert abs(comps.mean()) < 4.0 / np.sqrt(n_real)
    # E ||G||_F^2 = 2 d^2
    fro2 = np.sum(np.abs(samples) ** 2, axis=(1, 2))
    se = fro2.std() / np.sqrt(fro2.size)
    assert abs(fro2.mean() - 2 * d * d) < 4 * se


def test_haar_unitary_is_unitary():
    u = haar_unitary(9, seed=5)
    assert np.abs(u.conj().T @ u - np.eye(9)).max() < 1e-10


def test_haar_first_column_sphere_moments():
    k, trials = 6, 3000
    seeds = np.random.SeedSequence(11).spawn(trials)
    cols = np.stack([haar_unitary(k, s)[:, 0] for s in seeds])
    mags = np.abs(cols) ** 2
    means = mags.mean(axis=0)
    se = mags.std(axis=0).max() / np.sqrt(trials)
    assert np.abs(means - 1.0 / k).max() < 4 * se


def test_haar_invariance_under_fixed_rotation():
    k, d, trials = 4, 2, 2000
    rng = np.random.default_rng(0)
    v, _ = np.linalg.qr(rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))
    seeds = np.random.SeedSequence(13).spawn(trials)
    stat_u, stat_vu = [], []
    for s in seeds:
        u = haar_unitary(k, s)
        stat_u.append(np.linalg.svd(u[:, 0].reshape(d, d), compute_uv=False)[0])
        stat_vu.append(np.linalg.svd((v @ u)[:, 0].reshape(d, d), compute_uv=False)[0])
    stat_u, stat_vu = np.array(stat_u), np.array(stat_vu)
    se = np.hypot(stat_u.std(), stat_vu.std()) / np.sqrt(trials)
    assert abs(stat_u.mean() - stat_vu.mean()) < 4 * se


def test_sample_basis_orthonormal():
    basis = sample_basis(3, seed=21)
    flat = basis.matrices.reshape(basis.k, -1)
    gram = flat.conj() @ flat.T
    assert np.abs(gram - np.eye(basis.k)).max() < 1e-10


def test_sample_basis_d1_is_phase():
    basis = sample_basis(1, seed=3)
    assert basis.matrices.shape == (1, 1, 1)
    assert abs(abs(basis.matrices[0, 0, 0]) - 1.0) < 1e-12


def test_basis_marginal_matches_normalized_ginibre():
    # ||Gamma_1|| should be distributed as ||G||/||G||_F
    d, trials = 3, 2000
    root = np.random.SeedSequence(17)
    basis_seeds = root.generate_state(trials)
    from_basis = np.array(
        [np.linalg.svd(sample_basis(d, int(s)).matrices[0], compute_uv=False)[0]
         for s in basis_seeds]
    )
    direct = []
    for s in root.spawn(trials):
        g = sample_ginibre(d, s)
        sv = np.linalg.svd(g, compute_uv=False)
        direct.append(sv[0] / np.linalg.norm(sv))
    direct = np.array(direct)
    ks = stats.ks_2samp(from_basis, direct)
    assert ks.pvalue > 1e-4


def test_ab_single_term_collapses():
    k = 4
    alpha = np.zeros(k)
    alpha[0] = 1.0
    report = ab_statistics(alpha, d=2, trials=500, seed=29)
    assert abs(report.mean_a - report.mean_b) < 1e-12
    assert report.max_a_minus_b <= 1e-12
    assert report.ratio == pytest.approx(1.0, abs=1e-10)


def test_ab_uniform_alpha_ratio_and_triangle():
    d = 4
    k = d * d
    alpha = np.full(k, 1.0 / np.sqrt(k))
    report = ab_statistics(alpha, d=d, trials=4000, seed=31)
    # ratio = mean(A) ||alpha||_1 / mean(B) concentrates near 1
    assert 0.9 <= report.ratio <= 1.1
    assert report.alpha_norm1 == pytest.approx(np.sqrt(k))
    assert report.max_a_minus_b <= 1e-12
    for tail in report.tails:
        assert tail.holds


def test_ab_rejects_bad_amplitudes():
    with pytest.raises(ValueError):
        ab_statistics(np.ones(4), d=2, trials=10, seed=1)
    with pytest.raises(ValueError):
        ab_statistics(np.ones(3) / np.sqrt(3), d=2, trials=10, seed=1)


def test_ab_alpha_independence_of_a():
    # A is distributed independently of the amplitude profile
    d, trials = 3, 3000
    k = d * d
    uniform = np.full(k, 1.0 / np.sqrt(k))
    heavy = 0.5 ** np.arange(k)
    heavy = heavy / np.linalg.norm(heavy)
    r1 = ab_statistics(uniform, d, trials, seed=37)
    r2 = ab_statistics(heavy, d, trials, seed=37)
    se = np.sqrt(r1.var_a / trials + r2.var_a / trials)
    assert abs(r1.mean_a - r2.mean_a) < 4 * se


def test_report_json_interface():
    import json

    alpha = np.full(4, 0.5)
    report = ab_statistics(alpha, d=2, trials=200, seed=41)
    doc = json.loads(report.to_json())
    for key in ("d", "k", "alpha_norm1", "trials", "seed", "mean_A", "mean_B", "ratio", "tails"):
        assert key in doc
    assert {"r", "empirical", "bound"} <= set(doc["tails"][0])


def test_norm_scaling_quantiles_stable():
    report = norm_scaling_check((2, 16), trials=2000, seed=43)
    med2 = report.quantiles[2][1]
    med16 = report.quantiles[16][1]
    assert 0.5 <= med2 / med16 <= 2.0
    for check in report.frob_tail_checks:
        assert check.holds


def test_frobenius_square_is_chi_squared():
    d, trials = 3, 4000
    seeds = np.random.SeedSequence(47).spawn(trials)
    fro2 = np.array([np.sum(np.abs(sample_ginibre(d, s)) ** 2) for s in seeds])
    ks = stats.kstest(fro2, stats.chi2(2 * d * d).cdf)
    assert ks.statistic < 0.05
