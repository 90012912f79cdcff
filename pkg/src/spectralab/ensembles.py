"""Monte Carlo over Haar-random orthonormal matrix bases.

Columns of a Haar unitary on C^(d^2), reshaped to d x d matrices over the
standard basis, give an orthonormal basis under the Hilbert-Schmidt inner
product. For fixed unit amplitudes the exact constraint value
A = ||sum alpha_i Gamma_i|| and its triangle bound
B = sum |alpha_i| ||Gamma_i|| become random variables; A's distribution
is that of ||G|| / ||G||_F for a complex Ginibre G, independent of the
amplitudes, while B concentrates around ||alpha||_1 E[A] with
sub-Gaussian tails bounded by 2 exp(-k r^2 / 24).

All sampling is driven by the counter-based Philox generator with the
64-bit root seed recorded in every report; per-chunk child seeds keep the
trial stream independent of chunking.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

_CHUNK = 256


def _generator(seed: int | np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def sample_ginibre(d: int, seed: int | np.random.SeedSequence) -> np.ndarray:
    """d x d matrix with independent standard complex normal entries
    (real and imaginary parts each standard normal)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = _generator(seed)
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def _ginibre_batch(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    return rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))


def _haar_from_ginibre(g: np.ndarray) -> np.ndarray:
    """QR with the diagonal phase fix that makes Q Haar-distributed."""
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[..., None, :]


def haar_unitary(k: int, seed: int | np.random.SeedSequence) -> np.ndarray:
    """k x k unitary distributed by the Haar measure."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = _generator(seed)
    return _haar_from_ginibre(_ginibre_batch(rng, 1, k)[0])


@dataclass(frozen=True)
class HaarBasisSample:
    """k = d^2 matrices of shape d x d forming a Hilbert-Schmidt
    orthonormal basis, drawn from the Haar ensemble."""

    d: int
    seed: int
    matrices: np.ndarray  # (k, d, d)

    @property
    def k(self) -> int:
        return self.d * self.d


def sample_basis(d: int, seed: int) -> HaarBasisSample:
    """Columns of a Haar unitary on C^(d^2) reshaped into d x d matrices."""
    u = haar_unitary(d * d, seed)
    mats = u.T.reshape(d * d, d, d)
    return HaarBasisSample(d=d, seed=seed, matrices=mats)


def _ab_trials(
    alpha_abs: np.ndarray, alpha: np.ndarray, d: int, trials: int, seed_seq: np.random.SeedSequence
) -> tuple[np.ndarray, np.ndarray]:
    """Per-trial exact and triangle constraint values over the Haar ensemble."""
    k = d * d
    a_vals = np.empty(trials)
    b_vals = np.empty(trials)
    children = seed_seq.spawn((trials + _CHUNK - 1) // _CHUNK)
    done = 0
    for child in children:
        count = min(_CHUNK, trials - done)
        rng = _generator(child)
        us = _haar_from_ginibre(_ginibre_batch(rng, count, k))
        combos = (us @ alpha).reshape(count, d, d)
        a_vals[done : done + count] = np.linalg.svd(combos, compute_uv=False)[:, 0]
        basis = np.transpose(us, (0, 2, 1)).reshape(count, k, d, d)
        tops = np.linalg.svd(basis, compute_uv=False)[..., 0]
        b_vals[done : done + count] = tops @ alpha_abs
        done += count
    return a_vals, b_vals


@dataclass(frozen=True)
class TailCheck:
    r: float
    empirical: float
    bound: float
    std_error: float

    @property
    def holds(self) -> bool:
        return self.empirical <= self.bound + 3.0 * self.std_error


@dataclass(frozen=True)
class ConcentrationReport:
    d: int
    k: int
    alpha_norm1: float
    trials: int
    seed: int
    generator: str
    mean_a: float
    var_a: float
    mean_b: float
    var_b: float
    ratio: float  # mean(A) * ||alpha||_1 / mean(B)
    max_a_minus_b: float  # max over trials of A - B (<= 0 by the triangle inequality)
    tails: tuple[TailCheck, ...]

    def to_json(self) -> str:
        doc = {
            "d": self.d,
            "k": self.k,
            "alpha_norm1": self.alpha_norm1,
            "trials": self.trials,
            "seed": self.seed,
            "generator": self.generator,
            "mean_A": self.mean_a,
            "var_A": self.var_a,
            "mean_B": self.mean_b,
            "var_B": self.var_b,
            "ratio": self.ratio,
            "max_A_minus_B": self.max_a_minus_b,
            "tails": [asdict(t) for t in self.tails],
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def ab_statistics(alpha: np.ndarray, d: int, trials: int, seed: int) -> ConcentrationReport:
    """Monte Carlo statistics of the exact and triangle constraint values.

    The tail reference mean of B comes from an independent pilot run of
    equal size, so tail frequencies never reuse their own samples. Tails
    are checked at r in {0.5, 1, 2} / sqrt(k) against 2 exp(-k r^2 / 24).
    """
    alpha = np.asarray(alpha, dtype=complex)
    if abs(float(np.sum(np.abs(alpha) ** 2)) - 1.0) > 1e-10:
        raise ValueError("amplitudes must be normalized")
    k = d * d
    if alpha.shape != (k,):
        raise ValueError(f"need k = d^2 = {k} amplitudes")
    if trials < 2:
        raise ValueError("need at least 2 trials")
    alpha_abs = np.abs(alpha)
    root = np.random.SeedSequence(seed)
    pilot_seq, main_seq = root.spawn(2)
    _, b_pilot = _ab_trials(alpha_abs, alpha, d, trials, pilot_seq)
    mean_b_pilot = float(b_pilot.mean())
    a_vals, b_vals = _ab_trials(alpha_abs, alpha, d, trials, main_seq)

    tails = []
    for mult in (0.5, 1.0, 2.0):
        r = mult / np.sqrt(k)
        empirical = float(np.mean(np.abs(b_vals - mean_b_pilot) >= r))
        bound = float(2.0 * np.exp(-k * r**2 / 24.0))
        p_hat = max(empirical, min(bound, 1.0), 1.0 / trials)
        se = float(np.sqrt(p_hat * (1.0 - p_hat) / trials)) if p_hat < 1.0 else 0.0
        tails.append(TailCheck(r=float(r), empirical=empirical, bound=bound, std_error=se))

    mean_a, mean_b = float(a_vals.mean()), float(b_vals.mean())
    return ConcentrationReport(
        d=d,
        k=k,
        alpha_norm1=float(alpha_abs.sum()),
        trials=trials,
        seed=seed,
        generator="philox",
        mean_a=mean_a,
        var_a=float(a_vals.var()),
        mean_b=mean_b,
        var_b=float(b_vals.var()),
        ratio=mean_a * float(alpha_abs.sum()) / mean_b,
        max_a_minus_b=float((a_vals - b_vals).max()),
        tails=tuple(tails),
    )


@dataclass(frozen=True)
class NormScalingReport:
    """Scaling of ||G|| / ||G||_F across Ginibre dimensions, plus
    chi-squared tail sanity for ||G||_F^2."""

    trials: int
    seed: int
    quantiles: dict[int, tuple[float, float, float]]  # d -> sqrt(d)*(q25, q50, q75)
    fitted_lower: float
    fitted_upper: float
    frob_tail_checks: tuple[TailCheck, ...]  # Pr(X >= D + 2 sqrt(D r) + 2 r) vs e^-r


def norm_scaling_check(d_list: tuple[int, ...], trials: int, seed: int) -> NormScalingReport:
    """Empirical check that sqrt(d) * ||G|| / ||G||_F stays within constant
    bounds across dimensions, and that ||G||_F^2 obeys chi-squared upper
    tails Pr(X >= D + 2 sqrt(D r) + 2 r) <= exp(-r) for r in {1, 2, 4}."""
    root = np.random.SeedSequence(seed)
    quantiles: dict[int, tuple[float, float, float]] = {}
    frob_checks: list[TailCheck] = []
    for d, child in zip(d_list, root.spawn(len(d_list))):
        rng = _generator(child)
        ratios = np.empty(trials)
        frob2 = np.empty(trials)
        done = 0
        while done < trials:
            count = min(_CHUNK, trials - done)
            g = _ginibre_batch(rng, count, d)
            svals = np.linalg.svd(g, compute_uv=False)
            fro = np.sqrt(np.sum(svals**2, axis=1))
            ratios[done : done + count] = svals[:, 0] / fro
            frob2[done : done + count] = fro**2
            done += count
        q25, q50, q75 = np.quantile(np.sqrt(d) * ratios, [0.25, 0.5, 0.75])
        quantiles[d] = (float(q25), float(q50), float(q75))
        dof = 2 * d * d
        for r in (1.0, 2.0, 4.0):
            threshold = dof + 2.0 * np.sqrt(dof * r) + 2.0 * r
            empirical = float(np.mean(frob2 >= threshold))
            bound = float(np.exp(-r))
            p_hat = max(empirical, bound, 1.0 / trials)
            se = float(np.sqrt(p_hat * (1.0 - p_hat) / trials))
            frob_checks.append(TailCheck(r=r, empirical=empirical, bound=bound, std_error=se))
    medians = [q[1] for q in quantiles.values()]
    return NormScalingReport(
        trials=trials,
        seed=seed,
        quantiles=quantiles,
        fitted_lower=float(min(q[0] for q in quantiles.values())),
        fitted_upper=float(max(q[2] for q in quantiles.values())),
        frob_tail_checks=tuple(frob_checks),
    )
