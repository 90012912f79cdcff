"""Bipartitions, coefficient matrices, stable (Schmidt) rank, and
min/Renyi entanglement entropies of pure qubit states.

The stable rank of a nonzero matrix is ``||A||_F^2 / ||A||^2``: a robust,
real-valued surrogate for rank that never exceeds it. Applied to the
coefficient matrix of a state under a bipartition it measures
entanglement and equals ``1 / ||rho_A|| = 2^{S_min}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import frobenius_norm, spectral_norm

# Full SVD below this matrix dimension, power iteration above; the two
# paths must agree to 1e-9 where they overlap.
_SVD_DIM = 256

_SCHMIDT_CUTOFF = 1e-14


@dataclass(frozen=True)
class Bipartition:
    """Split of sites [0, n) into a nonempty subset A and its complement B.

    Bit/row ordering inside each side follows the global site order, so
    the coefficient matrix is reproducible across modules.
    """

    n: int
    part_a: tuple[int, ...]

    def __post_init__(self) -> None:
        a = self.part_a
        if len(set(a)) != len(a):
            raise ValueError("duplicate sites in A")
        if any(not 0 <= s < self.n for s in a):
            raise ValueError("site index outside [0, n)")
        if not 0 < len(a) < self.n:
            raise ValueError("both sides of the bipartition must be nonempty")
        object.__setattr__(self, "part_a", tuple(sorted(a)))

    @classmethod
    def left_half(cls, n: int) -> "Bipartition":
        return cls(n, tuple(range(n // 2)))

    @property
    def part_b(self) -> tuple[int, ...]:
        in_a = set(self.part_a)
        return tuple(s for s in range(self.n) if s not in in_a)

    @property
    def dims(self) -> tuple[int, int]:
        return 1 << len(self.part_a), 1 << (self.n - len(self.part_a))

    def swapped(self) -> "Bipartition":
        return Bipartition(self.n, self.part_b)


def reshape_state(state: np.ndarray, bipartition: Bipartition) -> np.ndarray:
    """Coefficient matrix of a state: rows indexed by bitstrings on A,
    columns by bitstrings on B, such that the matrix entries reproduce the
    state amplitude for the combined bitstring exactly."""
    n = bipartition.n
    state = np.asarray(state)
    if state.shape != (1 << n,):
        raise ValueError(f"state length {state.shape} does not match n = {n}")
    tensor = state.reshape((2,) * n)
    perm = bipartition.part_a + bipartition.part_b
    return np.transpose(tensor, perm).reshape(bipartition.dims)


def unreshape_state(gamma: np.ndarray, bipartition: Bipartition) -> np.ndarray:
    """Inverse of reshape_state."""
    n = bipartition.n
    perm = bipartition.part_a + bipartition.part_b
    inverse = np.argsort(perm)
    return np.transpose(gamma.reshape((2,) * n), inverse).reshape(1 << n)


def stable_rank(matrix: np.ndarray) -> float:
    """||A||_F^2 / ||A||^2 for nonzero A; 0 for the zero matrix."""
    fro = frobenius_norm(matrix)
    if fro == 0.0:
        return 0.0
    if min(matrix.shape) < _SVD_DIM:
        s = np.linalg.svd(matrix, compute_uv=False)
        top = float(s[0])
    else:
        top = spectral_norm(matrix)
    return fro**2 / top**2


@dataclass(frozen=True)
class SchmidtData:
    """Coefficient matrix of a state plus its norms and stable rank."""

    gamma: np.ndarray
    singular_values: np.ndarray
    frobenius: float
    spectral: float
    chi: float


def schmidt_data(state: np.ndarray, bipartition: Bipartition) -> SchmidtData:
    """Schmidt decomposition data at a bipartition; checks the singular-value
    route against the reduced-density-matrix route (rho_A = Gamma Gamma^dag)."""
    gamma = reshape_state(state, bipartition)
    fro = frobenius_norm(gamma)
    if fro == 0.0:
        raise ValueError("zero state has no Schmidt data")
    svals = np.linalg.svd(gamma, compute_uv=False)
    top = float(svals[0])
    chi = fro**2 / top**2
    if gamma.shape[0] <= 512:
        rho_a = gamma @ gamma.conj().T
        rho_top = float(np.linalg.eigvalsh(rho_a)[-1])
        chi_rho = fro**2 / rho_top
        if abs(chi - chi_rho) > 1e-9 * max(1.0, chi):
            raise AssertionError(
                f"stable-rank cross-check failed: {chi} (SVD) vs {chi_rho} (rho_A)"
            )
    return SchmidtData(
        gamma=gamma, singular_values=svals, frobenius=fro, spectral=top, chi=chi
    )


def stable_schmidt_rank(state: np.ndarray, bipartition: Bipartition) -> float:
    """Stable rank of the state's coefficient matrix at the bipartition."""
    return schmidt_data(state, bipartition).chi


@dataclass(frozen=True)
class EntropyProfile:
    """Min-entropy and requested Renyi entropies, in bits."""

    s_min: float
    s_alpha: dict[float, float]


def entropy_profile(
    state: np.ndarray, bipartition: Bipartition, alphas: tuple[float, ...] = (1.0, 2.0)
) -> EntropyProfile:
    """Entanglement entropies from the Schmidt spectrum.

    alpha = 1 is the von Neumann limit, alpha = 0 counts nonzero Schmidt
    coefficients (above a 1e-14 cutoff).
    """
    data = schmidt_data(state, bipartition)
    lam = (data.singular_values / data.frobenius) ** 2
    lam = lam[lam > _SCHMIDT_CUTOFF]
    s_min = float(-np.log2(lam[0]))
    out: dict[float, float] = {}
    for alpha in alphas:
        if alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if abs(alpha - 1.0) < 1e-12:
            out[alpha] = float(-np.sum(lam * np.log2(lam)))
        elif alpha == 0:
            out[alpha] = float(np.log2(lam.size))
        else:
            out[alpha] = float(np.log2(np.sum(lam**alpha)) / (1.0 - alpha))
    return EntropyProfile(s_min=s_min, s_alpha=out)


def eigenstate_stable_ranks(eigensystem, bipartition: Bipartition) -> np.ndarray:
    """Stable Schmidt rank of every eigenstate, in energy order.

    Densely stored eigensystems are processed as one batched SVD.
    """
    da, db = bipartition.dims
    if getattr(eigensystem, "vectors", None) is not None:
        k = eigensystem.k
        perm = bipartition.part_a + bipartition.part_b
        tensors = eigensystem.vectors.T.reshape((k,) + (2,) * bipartition.n)
        gammas = np.transpose(tensors, (0,) + tuple(p + 1 for p in perm)).reshape(k, da, db)
        svals = np.linalg.svd(gammas, compute_uv=False)
        fro2 = np.sum(svals**2, axis=1)
        return fro2 / svals[:, 0] ** 2
    return np.array(
        [stable_schmidt_rank(state, bipartition) for state in eigensystem.iter_states()]
    )


@dataclass(frozen=True)
class DecompositionCheck:
    """Result of the orthogonal-decomposition term-count bound.

    For Gamma = sum_i coeff_i * part_i with pairwise Hilbert-Schmidt
    orthogonal nonzero parts, the number of terms k is at least
    min_i chi(part_i) / chi(Gamma).
    """

    k: int
    chi_total: float
    chi_parts: np.ndarray
    bound: float

    @property
    def holds(self) -> bool:
        return self.k >= self.bound - 1e-9


def stable_rank_inequality_check(
    gamma: np.ndarray,
    parts: list[np.ndarray],
    coeffs: np.ndarray,
    tol: float = 1e-10,
) -> DecompositionCheck:
    """Validate the preconditions of the orthogonal-decomposition bound and
    evaluate both sides.

    Raises ValueError if the parts fail to reconstruct ``gamma``, are not
    pairwise orthogonal under the Hilbert-Schmidt inner product, or vanish.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    k = len(parts)
    if coeffs.shape != (k,):
        raise ValueError("one coefficient per part required")
    stack = np.stack([np.asarray(p, dtype=complex) for p in parts])
    if np.any(np.linalg.norm(stack.reshape(k, -1), axis=1) == 0.0):
        raise ValueError("zero part in decomposition")
    recon = np.tensordot(coeffs, stack, axes=1)
    scale = max(1.0, frobenius_norm(gamma))
    if frobenius_norm(recon - gamma) > tol * scale:
        raise ValueError("parts do not reconstruct the matrix")
    flat = stack.reshape(k, -1)
    gram = flat.conj() @ flat.T
    off = gram - np.diag(np.diag(gram))
    if np.abs(off).max() > tol * max(1.0, np.abs(np.diag(gram)).max()):
        raise ValueError("parts are not pairwise Hilbert-Schmidt orthogonal")
    chi_parts = np.array([stable_rank(p) for p in parts])
    chi_total = stable_rank(gamma)
    return DecompositionCheck(
        k=k, chi_total=chi_total, chi_parts=chi_parts, bound=float(chi_parts.min() / chi_total)
    )
