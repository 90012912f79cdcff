"""Tighter convex relaxation of the rank-budget constraint using all
pairwise products of eigenstate coefficient matrices.

The pairwise matrix gamma_ij = ||Gamma_i Gamma_j^dag|| tightens the
triangle-inequality relaxation: with s_i = sqrt(p_i), the constraint
s^T gamma s >= 1/m is convex (the quadratic form in sqrt-weights is
concave on the simplex) and sandwiches the exact constraint between the
plain relaxation and the truth. The program

    minimize sum p_i E_i  s.t.  p on the simplex, s^T gamma s >= 1/m

is solved here through its scalar Lagrangian dual: for multiplier
lam >= 0 the inner minimization over the simplex is an extremal
eigenproblem of diag(E) - lam*gamma, whose bottom eigenvector can be
taken entrywise nonnegative (the off-diagonal entries are nonpositive),
so the sign constraint never binds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse.linalg as spla

from .entanglement import Bipartition, reshape_state
from .predictor import InfeasibleProblem

_PAIR_BLOCK = 8192


@dataclass(frozen=True)
class GammaMatrix:
    """Symmetric nonnegative matrix of pairwise spectral norms
    gamma_ij = ||Gamma_i Gamma_j^dag||; the diagonal equals the inverse
    stable ranks of the eigenstates."""

    values: np.ndarray

    def __post_init__(self) -> None:
        g = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", g)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError("gamma must be square")
        if np.any(g < 0):
            raise ValueError("gamma entries must be nonnegative")
        if np.abs(g - g.T).max() > 1e-10 * max(1.0, g.max()):
            raise ValueError("gamma must be symmetric")

    @property
    def k(self) -> int:
        return self.values.shape[0]

    def constraint_value(self, p: np.ndarray) -> float:
        """g(p) = sum_ij gamma_ij sqrt(p_i p_j)."""
        s = np.sqrt(np.maximum(np.asarray(p, dtype=float), 0.0))
        return float(s @ self.values @ s)

    def max_over_simplex(self) -> tuple[float, np.ndarray]:
        """Maximum of the constraint over the simplex and its argmax.

        Equals the top eigenvalue of gamma; the top eigenvector is
        entrywise nonnegative because gamma is.
        """
        val, s = _extreme_eigpair(self.values, largest=True)
        return val, s**2


def rank_one_gamma(state_ranks: np.ndarray) -> GammaMatrix:
    """The plain-relaxation matrix gamma_ij = 1 / sqrt(M_i M_j), which makes
    the pairwise program coincide with the analytic predictor."""
    v = 1.0 / np.sqrt(np.asarray(state_ranks, dtype=float))
    return GammaMatrix(values=np.outer(v, v))


def _stacked_gammas(eigensystem, bipartition: Bipartition) -> np.ndarray:
    """All eigenstate coefficient matrices as one (k, dA, dB) array."""
    da, db = bipartition.dims
    if getattr(eigensystem, "vectors", None) is not None:
        k = eigensystem.k
        perm = bipartition.part_a + bipartition.part_b
        tensors = eigensystem.vectors.T.reshape((k,) + (2,) * bipartition.n)
        return np.transpose(tensors, (0,) + tuple(p + 1 for p in perm)).reshape(k, da, db)
    return np.stack(
        [reshape_state(state, bipartition) for state in eigensystem.iter_states()]
    )


def gamma_matrix(
    eigensystem,
    bipartition: Bipartition,
    cache_path: str | Path | None = None,
    hamiltonian_hash: str | None = None,
) -> GammaMatrix:
    """Pairwise spectral norms of all eigenstate coefficient-matrix products.

    The diagonal is cross-checked against the inverse stable ranks. With
    ``cache_path`` the matrix is loaded if a matching cache exists
    (keyed by k, Hamiltonian hash, and bipartition) and written otherwise.
    """
    if cache_path is not None:
        cached = _load_gamma_cache(Path(cache_path), eigensystem.k, hamiltonian_hash, bipartition)
        if cached is not None:
            return cached
    gam = _stacked_gammas(eigensystem, bipartition)
    k = gam.shape[0]
    values = np.empty((k, k))
    iu, ju = np.triu_indices(k)
    for start in range(0, iu.size, _PAIR_BLOCK):
        sl = slice(start, min(start + _PAIR_BLOCK, iu.size))
        prods = gam[iu[sl]] @ np.conj(np.transpose(gam[ju[sl]], (0, 2, 1)))
        tops = np.linalg.svd(prods, compute_uv=False)[:, 0]
        values[iu[sl], ju[sl]] = tops
        values[ju[sl], iu[sl]] = tops
    fro2 = np.sum(np.abs(gam) ** 2, axis=(1, 2))
    inv_ranks = np.linalg.svd(gam, compute_uv=False)[:, 0] ** 2 / fro2
    if np.abs(np.diag(values) - inv_ranks).max() > 1e-9:
        raise AssertionError("gamma diagonal disagrees with inverse stable ranks")
    result = GammaMatrix(values=values)
    if cache_path is not None:
        _save_gamma_cache(Path(cache_path), result, hamiltonian_hash, bipartition)
    return result


def _cache_header(k: int, hamiltonian_hash: str | None, bipartition: Bipartition) -> dict:
    return {
        "k": k,
        "hamiltonian_hash": hamiltonian_hash,
        "bipartition": list(bipartition.part_a),
    }


def _save_gamma_cache(
    path: Path, gamma: GammaMatrix, hamiltonian_hash: str | None, bipartition: Bipartition
) -> None:
    lines = [json.dumps(_cache_header(gamma.k, hamiltonian_hash, bipartition), sort_keys=True)]
    for i in range(gamma.k):
        lines.append(",".join(repr(float(v)) for v in gamma.values[i, i:]))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def _load_gamma_cache(
    path: Path, k: int, hamiltonian_hash: str | None, bipartition: Bipartition
) -> GammaMatrix | None:
    if not path.exists():
        return None
    with path.open() as fh:
        header = json.loads(fh.readline())
        if header != _cache_header(k, hamiltonian_hash, bipartition):
            return None
        values = np.zeros((k, k))
        for i in range(k):
            row = np.fromstring(fh.readline(), sep=",")
            values[i, i:] = row
            values[i:, i] = row
    return GammaMatrix(values=values)


@dataclass(frozen=True)
class ConcavityReport:
    trials: int
    max_violation: float
    witness: tuple[np.ndarray, np.ndarray, float] | None

    @property
    def holds(self) -> bool:
        return self.witness is None


def concavity_check(gamma: GammaMatrix, trials: int = 200, seed: int = 7, tol: float = 1e-10) -> ConcavityReport:
    """Sample midpoint-style concavity of the constraint on the simplex:
    g(t p + (1-t) q) >= t g(p) + (1-t) g(q) - tol. Violations are returned
    with their witness triple."""
    rng = np.random.default_rng(seed)
    k = gamma.k
    worst = 0.0
    witness = None
    for _ in range(trials):
        p = rng.dirichlet(np.ones(k))
        q = rng.dirichlet(np.ones(k))
        t = rng.uniform()
        gap = (
            t * gamma.constraint_value(p)
            + (1.0 - t) * gamma.constraint_value(q)
            - gamma.constraint_value(t * p + (1.0 - t) * q)
        )
        if gap > worst:
            worst = gap
            if gap > tol:
                witness = (p, q, t)
    return ConcavityReport(trials=trials, max_violation=worst, witness=witness)


def _extreme_eigpair(
    matrix: np.ndarray, largest: bool, v0: np.ndarray | None = None
) -> tuple[float, np.ndarray]:
    """Extremal eigenpair of a symmetric matrix with the eigenvector fixed
    entrywise nonnegative (valid for matrices whose relevant extreme
    eigenvector is a Perron vector)."""
    k = matrix.shape[0]
    use_dense = k <= 32
    if not use_dense:
        if v0 is None:
            v0 = np.full(k, 1.0 / np.sqrt(k))
        try:
            vals, vecs = spla.eigsh(
                matrix, k=1, which="LA" if largest else "SA", v0=v0, tol=1e-14
            )
            val, vec = float(vals[0]), vecs[:, 0]
        except spla.ArpackNoConvergence:
            use_dense = True
    if use_dense:
        vals, vecs = np.linalg.eigh(matrix)
        idx = -1 if largest else 0
        val, vec = float(vals[idx]), vecs[:, idx]
    if vec.sum() < 0:
        vec = -vec
    vec = np.maximum(vec, 0.0)
    nrm = np.linalg.norm(vec)
    if nrm == 0.0:
        raise ArithmeticError("extreme eigenvector vanished after sign clipping")
    return val, vec / nrm


@dataclass(frozen=True)
class CRPlusSolution:
    weights: np.ndarray
    achieved_constraint: float
    optimum_energy: float
    multiplier: float
    iterations: int
    converged: bool


def solve_cr_plus(
    energies: np.ndarray,
    gamma: GammaMatrix,
    rank_budget: float,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> CRPlusSolution:
    """Global optimum of the pairwise-relaxation program.

    Feasibility is checked by maximizing the concave constraint first;
    then the scalar dual in the constraint multiplier is solved by
    bisection on constraint activity, with the inner simplex minimization
    done exactly as a bottom eigenpair (warm-started between iterations).
    Deterministic for identical inputs.
    """
    e = np.asarray(energies, dtype=float)
    k = gamma.k
    if e.shape != (k,):
        raise ValueError("energies length must match gamma")
    if rank_budget <= 0 or tol <= 0:
        raise ValueError("rank budget and tol must be positive")
    target = 1.0 / rank_budget

    g_max, p_max = gamma.max_over_simplex()
    if g_max < target - 1e-8:
        raise InfeasibleProblem(
            f"constraint unreachable: max over the simplex is {g_max:.6g} < 1/m = {target:.6g}"
        )
    if g_max <= target + 1e-12:
        # Single feasible point (up to solver noise): the constraint maximizer.
        p = p_max / p_max.sum()
        return CRPlusSolution(
            weights=p,
            achieved_constraint=gamma.constraint_value(p),
            optimum_energy=float(e @ p),
            multiplier=float("inf"),
            iterations=0,
            converged=True,
        )

    def inner(lam: float, v0: np.ndarray | None) -> tuple[np.ndarray, np.ndarray, float]:
        """argmin over the simplex of E.p - lam*g(p); returns (p, s, value)."""
        val, s = _extreme_eigpair(np.diag(e) - lam * gamma.values, largest=False, v0=v0)
        return s**2, s, val

    # lam = 0: pure energy minimization. The minimizer is supported on the
    # ground manifold; take its constraint-maximizing point so that an
    # inactive constraint is detected whenever any minimizer is feasible.
    ground = np.nonzero(e <= e[0] + 1e-12 * max(1.0, abs(e[0])))[0]
    sub = GammaMatrix(values=gamma.values[np.ix_(ground, ground)])
    g0, p0_sub = sub.max_over_simplex()
    if g0 >= target - 1e-12:
        p = np.zeros(k)
        p[ground] = p0_sub / p0_sub.sum()
        return CRPlusSolution(
            weights=p,
            achieved_constraint=gamma.constraint_value(p),
            optimum_energy=float(e[0]),
            multiplier=0.0,
            iterations=0,
            converged=True,
        )

    # Bracket the multiplier: activity g(p(lam)) grows with lam.
    span = max(1.0, float(e[-1] - e[0]))
    lam_lo, g_lo, s_lo = 0.0, g0, None
    lam_hi = span
    iterations = 0
    v0 = None
    while True:
        p_hi, s_hi, _ = inner(lam_hi, v0)
        v0 = s_hi
        iterations += 1
        if gamma.constraint_value(p_hi) >= target:
            break
        lam_hi *= 2.0
        if lam_hi > span * 1e9:
            raise ArithmeticError("multiplier bracket expansion failed")

    p_best = p_hi
    for _ in range(max_iter):
        lam = 0.5 * (lam_lo + lam_hi)
        p, s, _ = inner(lam, v0)
        v0 = s
        iterations += 1
        g = gamma.constraint_value(p)
        if g >= target:
            lam_hi, p_hi, s_hi = lam, p, s
            p_best = p
        else:
            lam_lo, g_lo, s_lo = lam, g, s
        if lam_hi - lam_lo <= 1e-14 * max(1.0, lam_hi):
            break

    # At a kink of the dual (degenerate bottom eigenvalue) the two bracket
    # eigenvectors straddle the activity target; blend them inside the
    # near-degenerate eigenspace to restore exact activity.
    g_best = gamma.constraint_value(p_best)
    if s_lo is not None and g_best - target > tol:
        t_lo, t_hi = 0.0, 1.0  # t=0 -> s_lo (infeasible), t=1 -> s_hi (feasible)
        for _ in range(200):
            t = 0.5 * (t_lo + t_hi)
            s = (1.0 - t) * s_lo + t * s_hi
            s /= np.linalg.norm(s)
            g = gamma.constraint_value(s**2)
            if g >= target:
                t_hi = t
                p_best, g_best = s**2, g
            else:
                t_lo = t
            if abs(g - target) <= tol:
                break

    p_best = np.maximum(p_best, 0.0)
    p_best /= p_best.sum()
    lam_star = 0.5 * (lam_lo + lam_hi)
    g_final = gamma.constraint_value(p_best)
    return CRPlusSolution(
        weights=p_best,
        achieved_constraint=g_final,
        optimum_energy=float(e @ p_best),
        multiplier=lam_star,
        iterations=iterations,
        converged=g_final >= target - 1e-8 and lam_star * abs(g_final - target) <= 1e-8,
    )


@dataclass(frozen=True)
class SlackChain:
    """The three nested constraint evaluations at fixed amplitudes:
    exact <= pairwise <= triangle."""

    exact: float  # ||sum alpha_i Gamma_i||
    pairwise: float  # sqrt(sum |alpha_i||alpha_j| gamma_ij)
    triangle: float  # sum |alpha_i| ||Gamma_i||


def slack_chain(
    alpha: np.ndarray,
    eigensystem,
    bipartition: Bipartition,
    gamma: GammaMatrix | None = None,
) -> SlackChain:
    """Evaluate the exact, pairwise, and triangle-inequality constraint
    values for amplitudes ``alpha`` over an eigenbasis; verifies the chain
    ordering before returning."""
    a = np.asarray(alpha, dtype=complex)
    if abs(float(np.sum(np.abs(a) ** 2)) - 1.0) > 1e-10:
        raise ValueError("amplitudes must be normalized")
    gam = _stacked_gammas(eigensystem, bipartition)
    if a.shape != (gam.shape[0],):
        raise ValueError("amplitude count must match the eigensystem")
    combined = np.tensordot(a, gam, axes=1)
    exact = float(np.linalg.svd(combined, compute_uv=False)[0])
    mods = np.abs(a)
    tops = np.linalg.svd(gam, compute_uv=False)[:, 0]
    triangle = float(mods @ tops)
    if gamma is None:
        gamma = gamma_matrix(eigensystem, bipartition)
    pairwise = float(np.sqrt(mods @ gamma.values @ mods))
    if not (exact <= pairwise + 1e-9 and pairwise <= triangle + 1e-9):
        raise AssertionError(
            f"slack chain violated: exact={exact}, pairwise={pairwise}, triangle={triangle}"
        )
    return SlackChain(exact=exact, pairwise=pairwise, triangle=triangle)
