"""Dense/sparse complex linear-algebra kernels shared by the rest of the package.

Everything here operates on plain numpy arrays (complex or real) and
scipy sparse matrices; all functions are pure and safe to call from
parallel batch drivers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

# Deterministic seed for iterative starting vectors (reproducible runs).
_ITER_SEED = 0x5EED

# Below this dimension, spectral_norm falls back to a full SVD: exactness
# is cheap and power iteration gains nothing.
_SVD_FALLBACK_DIM = 64


class ConvergenceFailure(RuntimeError):
    """An iterative solver ran out of iterations before meeting its tolerance."""


@dataclass(frozen=True)
class HermitianEigenResult:
    """Full eigensystem of a Hermitian matrix, eigenvalues ascending.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``; columns are
    orthonormal to 1e-10.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_matrix(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a


def hermitian_eig(matrix: np.ndarray, hermicity_tol: float = 1e-12) -> HermitianEigenResult:
    """Full ascending eigensystem of a Hermitian matrix.

    Raises ValueError if the input is not square or deviates from
    Hermitian symmetry by more than ``hermicity_tol`` (relative to the
    largest entry).
    """
    a = _as_matrix(matrix)
    n, m = a.shape
    if n != m:
        raise ValueError(f"expected a square matrix, got {a.shape}")
    scale = max(1.0, float(np.abs(a).max()) if a.size else 1.0)
    dev = float(np.abs(a - a.conj().T).max()) if a.size else 0.0
    if dev > hermicity_tol * scale:
        raise ValueError(f"matrix is not Hermitian: max |A - A^dag| = {dev:.3e}")
    vals, vecs = np.linalg.eigh(a)
    return HermitianEigenResult(eigenvalues=vals, eigenvectors=vecs)


def lanczos_ground(
    h: sp.spmatrix | spla.LinearOperator | np.ndarray,
    tol: float = 1e-10,
    maxiter: int | None = None,
    seed: int = _ITER_SEED,
) -> tuple[float, np.ndarray]:
    """Ground eigenpair (smallest eigenvalue) of a sparse Hermitian operator.

    Uses implicitly restarted Lanczos (ARPACK) with a deterministic
    seeded start vector; small operators are diagonalized densely. The
    returned residual obeys ``||H v - E v||_2 <= tol``.

    Parameters
    ----------
    h : sparse matrix, LinearOperator or ndarray
        Hermitian operator.
    tol : float
        Absolute residual tolerance (> 0).

    Returns
    -------
    (energy, vector)
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    dim = h.shape[0]
    if h.shape[0] != h.shape[1]:
        raise ValueError(f"operator is not square: {h.shape}")

    if dim <= 16 or (isinstance(h, np.ndarray) and dim <= _SVD_FALLBACK_DIM):
        dense = h.toarray() if sp.issparse(h) else (h if isinstance(h, np.ndarray) else _operator_to_dense(h))
        res = hermitian_eig(dense)
        return float(res.eigenvalues[0]), res.eigenvectors[:, 0]

    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(dim)
    v0 /= np.linalg.norm(v0)
    try:
        vals, vecs = spla.eigsh(h, k=1, which="SA", v0=v0, tol=tol * 1e-2, maxiter=maxiter)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceFailure(f"Lanczos did not converge: {exc}") from exc
    energy = float(vals[0])
    vec = vecs[:, 0]
    vec = vec / np.linalg.norm(vec)
    residual = float(np.linalg.norm(h @ vec - energy * vec))
    if residual > tol:
        # One tighter retry; ARPACK's tol is a relative heuristic.
        try:
            vals, vecs = spla.eigsh(h, k=1, which="SA", v0=vec, tol=0, maxiter=maxiter)
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceFailure(f"Lanczos did not converge: {exc}") from exc
        energy = float(vals[0])
        vec = vecs[:, 0] / np.linalg.norm(vecs[:, 0])
        residual = float(np.linalg.norm(h @ vec - energy * vec))
        if residual > tol:
            raise ConvergenceFailure(f"Lanczos residual {residual:.3e} above tol {tol:.3e}")
    return energy, vec


def _operator_to_dense(op: spla.LinearOperator) -> np.ndarray:
    dim = op.shape[0]
    eye = np.eye(dim, dtype=complex)
    cols = [op @ eye[:, j] for j in range(dim)]
    return np.stack(cols, axis=1)


def spectral_norm(matrix: np.ndarray, tol: float = 1e-12, seed: int = _ITER_SEED) -> float:
    """Largest singular value of a dense matrix.

    Small matrices (min dimension < 64) use a full SVD; larger ones use
    power iteration on the Gram matrix with a deterministic start and
    relative tolerance ``tol``. The zero matrix returns 0.
    """
    a = _as_matrix(matrix)
    if a.size == 0:
        return 0.0
    if min(a.shape) < _SVD_FALLBACK_DIM:
        s = np.linalg.svd(a, compute_uv=False)
        return float(s[0]) if s.size else 0.0

    # Iterate on the smaller Gram side: v -> (A^dag A) v.
    if a.shape[0] < a.shape[1]:
        a = a.conj().T
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(a.shape[1]) + 1j * rng.standard_normal(a.shape[1])
    v /= np.linalg.norm(v)
    sigma2 = 0.0
    for _ in range(10_000):
        w = a.conj().T @ (a @ v)
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return 0.0
        v = w / nrm
        if abs(nrm - sigma2) <= tol * max(nrm, 1e-300):
            sigma2 = nrm
            break
        sigma2 = nrm
    else:
        raise ConvergenceFailure("power iteration did not converge")
    return float(np.sqrt(sigma2))


def frobenius_norm(matrix: np.ndarray) -> float:
    """Square root of the sum of squared entry moduli."""
    a = _as_matrix(matrix)
    return float(np.linalg.norm(a))


def svd_truncate(
    matrix: np.ndarray, max_rank: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Best Frobenius-norm approximation of rank at most ``max_rank``.

    Returns ``(U, S, Vh, discarded_weight)`` with ``U @ diag(S) @ Vh``
    the truncated matrix and ``discarded_weight`` the sum of squared
    dropped singular values.
    """
    if max_rank < 1:
        raise ValueError("max_rank must be >= 1")
    a = _as_matrix(matrix)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    keep = min(max_rank, s.size)
    discarded = float(np.sum(s[keep:] ** 2))
    return u[:, :keep], s[:keep], vh[:keep, :], discarded
