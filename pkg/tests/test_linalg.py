import numpy as np
import pytest
import scipy.sparse as sp

from spectralab.linalg import (
    frobenius_norm,
    hermitian_eig,
    lanczos_ground,
    spectral_norm,
    svd_truncate,
)
from spectralab.hamiltonian import build_afhm_1d, full_matrix


def random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def test_hermitian_eig_diagonal():
    res = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(res.eigenvalues, [1.0, 2.0, 3.0])


def test_hermitian_eig_pauli_x():
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    res = hermitian_eig(x)
    assert np.allclose(res.eigenvalues, [-1.0, 1.0])
    # eigenvectors are (|0> -+ |1>)/sqrt(2) up to phase
    for col, sign in ((0, -1.0), (1, 1.0)):
        v = res.eigenvectors[:, col]
        v = v / v[0]
        assert np.allclose(v, [1.0, sign])


def test_hermitian_eig_reconstruction():
    rng = np.random.default_rng(0)
    h = random_hermitian(rng, 8)
    res = hermitian_eig(h)
    recon = res.eigenvectors @ np.diag(res.eigenvalues) @ res.eigenvectors.conj().T
    assert np.abs(recon - h).max() < 1e-10
    gram = res.eigenvectors.conj().T @ res.eigenvectors
    assert np.abs(gram - np.eye(8)).max() < 1e-10


def test_hermitian_eig_rejects_bad_input():
    with pytest.raises(ValueError):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        hermitian_eig(np.zeros((2, 3)))


def test_eigenvalues_invariant_under_unitary_conjugation():
    rng = np.random.default_rng(1)
    h = random_hermitian(rng, 10)
    q, _ = np.linalg.qr(rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10)))
    before = hermitian_eig(h).eigenvalues
    after = hermitian_eig(q @ h @ q.conj().T).eigenvalues
    assert np.abs(before - after).max() < 1e-10


def test_lanczos_diagonal_sparse():
    h = sp.diags([5.0, -2.0, 7.0]).tocsr()
    energy, vec = lanczos_ground(h, tol=1e-10)
    assert energy == pytest.approx(-2.0, abs=1e-10)
    assert abs(abs(vec[1]) - 1.0) < 1e-10


def test_lanczos_afhm_n2():
    h = full_matrix(build_afhm_1d(2), sparse=True)
    energy, _ = lanczos_ground(h, tol=1e-10)
    assert energy == pytest.approx(-0.75, abs=1e-10)


def test_lanczos_matches_dense_n10():
    h = full_matrix(build_afhm_1d(10), sparse=True)
    energy, vec = lanczos_ground(h, tol=1e-9)
    dense_min = hermitian_eig(h.toarray()).eigenvalues[0]
    assert abs(energy - dense_min) < 1e-9
    assert np.linalg.norm(h @ vec - energy * vec) < 1e-9


def test_lanczos_matches_dense_random():
    rng = np.random.default_rng(2)
    h = random_hermitian(rng, 300)
    hs = sp.csr_matrix(h)
    energy, _ = lanczos_ground(hs, tol=1e-9)
    assert abs(energy - hermitian_eig(h).eigenvalues[0]) < 1e-8


def test_spectral_norm_trivial():
    assert spectral_norm(np.eye(7)) == pytest.approx(1.0, abs=1e-12)
    assert spectral_norm(np.diag([2.0, 1.0])) == pytest.approx(2.0, abs=1e-12)
    assert spectral_norm(np.zeros((4, 4))) == 0.0


def test_spectral_norm_matches_svd():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    assert spectral_norm(a) == pytest.approx(np.linalg.svd(a, compute_uv=False)[0], abs=1e-10)


def test_spectral_norm_power_iteration_path():
    # above the SVD fallback dimension the power-iteration branch runs
    rng = np.random.default_rng(4)
    a = rng.standard_normal((80, 90)) + 1j * rng.standard_normal((80, 90))
    exact = np.linalg.svd(a, compute_uv=False)[0]
    assert spectral_norm(a) == pytest.approx(exact, rel=1e-9)


def test_frobenius_norm_trivial():
    assert frobenius_norm(np.eye(9)) == pytest.approx(3.0)
    assert frobenius_norm(np.zeros((3, 5))) == 0.0
    assert frobenius_norm(np.diag([2.0, 1.0, 1.0])) == pytest.approx(np.sqrt(6.0))


def test_norm_sandwich():
    rng = np.random.default_rng(5)
    for _ in range(20):
        a = rng.standard_normal((12, 7)) + 1j * rng.standard_normal((12, 7))
        spec = spectral_norm(a)
        fro = frobenius_norm(a)
        rank = np.linalg.matrix_rank(a)
        assert spec <= fro + 1e-12
        assert fro <= np.sqrt(rank) * spec + 1e-12


def test_svd_truncate_rank_one():
    u = np.array([[1.0], [2.0]]) / np.sqrt(5)
    a = u @ u.T
    uu, s, vh, disc = svd_truncate(a, 1)
    assert disc == pytest.approx(0.0, abs=1e-15)
    assert np.abs(uu @ np.diag(s) @ vh - a).max() < 1e-12


def test_svd_truncate_diag():
    _, s, _, disc = svd_truncate(np.diag([2.0, 1.0]), 1)
    assert s.tolist() == [2.0]
    assert disc == pytest.approx(1.0, abs=1e-14)


def test_svd_truncate_tail_weight():
    rng = np.random.default_rng(6)
    a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    svals = np.linalg.svd(a, compute_uv=False)
    for r in (1, 3, 6):
        _, _, _, disc = svd_truncate(a, r)
        assert disc == pytest.approx(float(np.sum(svals[r:] ** 2)), abs=1e-12)


def test_svd_truncate_rejects_bad_rank():
    with pytest.raises(ValueError):
        svd_truncate(np.eye(2), 0)
