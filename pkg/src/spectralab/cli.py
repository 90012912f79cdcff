"""Batch pipelines: config in, CSV/JSON artifacts out.

Every mode writes deterministic data files plus a ``manifest.json``
recording the config hash, package version, and all derived scalars.
Figure-facing CSVs carry a ``# figure: ...`` tag naming the figure they
feed. Exit codes: 2 invalid config, 3 numerical failure, 4 infeasible
problem.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .compress import compress_state, overlap_spectrum, slack_table, snake_path, sweep_refine
from .ensembles import ab_statistics, norm_scaling_check
from .entanglement import (
    Bipartition,
    entropy_profile,
    eigenstate_stable_ranks,
    reshape_state,
    stable_schmidt_rank,
)
from .hamiltonian import (
    PauliHamiltonian,
    build_afhm_1d,
    build_afhm_2d,
    full_eigensystem,
    ground_state,
    stream_sector_eigensystems,
)
from .linalg import ConvergenceFailure
from .predictor import (
    InfeasibleProblem,
    SpectrumProblem,
    bin_means,
    broaden,
    classify,
    default_grid,
    predict,
)
from .relaxation import gamma_matrix, solve_cr_plus
from .twolevel import TwoLevelSystem, spectrum_from_mu

MODES = (
    "predict",
    "predict-plus",
    "actual",
    "entropy-sweep",
    "two-level",
    "ensemble",
    "slack-table",
)

EXIT_BAD_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_INFEASIBLE = 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    mode: str
    model: dict = field(default_factory=dict)
    bipartition: str | list[int] = "half"
    bond_dims: list[int] = field(default_factory=lambda: [4, 8, 16])
    rank_budget: str | float | list[float] = "from-compression"
    width: float = 0.1
    out: str = "out"
    seed: int = 2024
    sweeps: int = 0
    full_2d: bool = False
    # two-level sweep parameters
    two_level: dict = field(default_factory=lambda: {"a1": 1.0, "a2": 1.0, "xi1": 0.0, "xi2": 1.0, "mu_points": 99})
    # ensemble parameters
    ensemble: dict = field(default_factory=lambda: {"d_list": [2, 4, 8], "trials": 10_000, "alphas": ["uniform", "heavy"]})

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.width <= 0:
            raise ConfigError("width must be positive")
        if any(int(d) < 1 for d in self.bond_dims):
            raise ConfigError("bond dimensions must be >= 1")
        if self.mode in ("predict", "predict-plus", "actual", "entropy-sweep", "slack-table"):
            if not self.model:
                self.model = self._default_model()
            kind = self.model.get("kind")
            if kind not in ("afhm1d", "afhm2d", "pauli"):
                raise ConfigError(f"unknown model kind {kind!r}")
        if isinstance(self.rank_budget, str) and self.rank_budget != "from-compression":
            raise ConfigError("rank budget must be a number, list, or 'from-compression'")

    def _default_model(self) -> dict:
        if self.mode == "entropy-sweep":
            return {"kind": "afhm2d", "side": 4} if self.full_2d else {"kind": "afhm1d", "n": 8}
        if self.full_2d:
            return {"kind": "afhm2d", "side": 4}
        return {"kind": "afhm1d", "n": 10}

    def canonical_dict(self) -> dict:
        return {
            "mode": self.mode,
            "model": self.model,
            "bipartition": self.bipartition,
            "bond_dims": [int(d) for d in self.bond_dims],
            "rank_budget": self.rank_budget,
            "width": self.width,
            "seed": int(self.seed),
            "sweeps": int(self.sweeps),
            "full_2d": bool(self.full_2d),
            "two_level": self.two_level,
            "ensemble": self.ensemble,
        }


def load_config(path: str | None, overrides: dict) -> RunConfig:
    doc: dict = {}
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    doc.update({k: v for k, v in overrides.items() if v is not None})
    if "D" in doc:
        doc["bond_dims"] = doc.pop("D")
    if "m" in doc:
        doc["rank_budget"] = doc.pop("m")
    known = {f for f in RunConfig.__dataclass_fields__}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    cfg = RunConfig(**doc)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# Artifact helpers
# ---------------------------------------------------------------------------


def _write_csv(path: Path, figure: str | None, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        if figure:
            fh.write(f"# figure: {figure}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


class RunContext:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.out = Path(cfg.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.files: list[str] = []
        self.scalars: dict = {}

    def csv(self, name: str, figure: str | None, header: list[str], rows) -> None:
        _write_csv(self.out / name, figure, header, rows)
        self.files.append(name)

    def json_file(self, name: str, text: str) -> None:
        (self.out / name).write_text(text)
        self.files.append(name)

    def finish(self) -> dict:
        import scipy

        canonical = json.dumps(self.cfg.canonical_dict(), sort_keys=True, separators=(",", ":"))
        manifest = {
            "config": self.cfg.canonical_dict(),
            "config_hash": hashlib.sha256(canonical.encode()).hexdigest(),
            "package_version": __version__,
            "tool_versions": {"numpy": np.__version__, "scipy": scipy.__version__},
            "files": sorted(self.files),
            "scalars": self.scalars,
            "created": datetime.now(timezone.utc).isoformat(),
        }
        (self.out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
        return manifest


def _build_model(cfg: RunConfig) -> tuple[PauliHamiltonian, tuple[int, ...]]:
    """Hamiltonian plus the canonical compression path for its geometry."""
    kind = cfg.model["kind"]
    if kind == "afhm1d":
        n = int(cfg.model["n"])
        return build_afhm_1d(n), tuple(range(n))
    if kind == "afhm2d":
        side = int(cfg.model["side"])
        return build_afhm_2d(side), snake_path(side)
    doc = json.loads(Path(cfg.model["path"]).read_text())
    h = PauliHamiltonian.from_json_dict(doc)
    return h, tuple(range(h.n))


def _build_bipartition(cfg: RunConfig, n: int, path: tuple[int, ...]) -> Bipartition:
    if cfg.bipartition == "half":
        return Bipartition(n, tuple(path[: n // 2]))
    return Bipartition(n, tuple(int(s) for s in cfg.bipartition))


def _budgets(cfg: RunConfig, h, path, cut) -> list[tuple[str, float]]:
    """(label, m) pairs: explicit budgets or one per compressed bond dimension."""
    if cfg.rank_budget == "from-compression":
        ground = ground_state(h)
        out = []
        for d in cfg.bond_dims:
            mps = compress_state(ground.state, int(d), path=path)
            if cfg.sweeps:
                mps = sweep_refine(mps, h, cfg.sweeps)
            m = stable_schmidt_rank(mps.to_state(), cut)
            out.append((f"D{int(d)}", float(m)))
        return out
    if isinstance(cfg.rank_budget, (int, float)):
        return [("m0", float(cfg.rank_budget))]
    return [(f"m{i}", float(m)) for i, m in enumerate(cfg.rank_budget)]


# ---------------------------------------------------------------------------
# Modes
# ---------------------------------------------------------------------------


def _run_entropy_sweep(ctx: RunContext) -> None:
    cfg = ctx.cfg
    h, path = _build_model(cfg)
    if cfg.model.get("kind") == "afhm2d" and h.n > 14 and not cfg.full_2d:
        raise ConfigError("the full 2^16 sweep is opt-in: pass --full-2d")
    cut = _build_bipartition(cfg, h.n, path)
    if h.n > 14:
        _run_entropy_sweep_streaming(ctx, h, cut)
        return
    es = full_eigensystem(h)
    rows = []
    e1 = float(es.energies[0])
    for i in range(es.k):
        prof = entropy_profile(es.state(i), cut, alphas=(1.0,))
        chi = 2.0 ** prof.s_min
        weight = int(es.sector_weights[i]) if es.sector_weights is not None else -1
        rows.append((i, float(es.energies[i]), float(es.energies[i]) - e1, prof.s_min, prof.s_alpha[1.0], chi, weight))
    ctx.csv(
        "entropy_sweep.csv",
        "fig1",
        ["index", "E", "E_minus_E1", "S_min", "S_1", "chi", "sector_weight"],
        rows,
    )
    offsets = np.array([r[2] for r in rows])
    for col, name in ((3, "S_min"), (4, "S_1")):
        centers, means = bin_means(offsets, np.array([r[col] for r in rows]))
        ctx.csv(
            f"entropy_bins_{name}.csv",
            "fig1",
            ["E_minus_E1", f"mean_{name}"],
            zip(centers, means),
        )
    ctx.scalars["k"] = es.k
    ctx.scalars["ceiling_bits"] = h.n / 2


def _run_entropy_sweep_streaming(ctx: RunContext, h: PauliHamiltonian, cut: Bipartition) -> None:
    from .hamiltonian import embed_sector_vector

    records = []
    for sector, energies, vectors in stream_sector_eigensystems(h):
        for j in range(energies.size):
            psi = embed_sector_vector(sector, vectors[:, j])
            prof = entropy_profile(psi, cut, alphas=(1.0,))
            records.append((float(energies[j]), prof.s_min, prof.s_alpha[1.0], sector.weight))
    records.sort(key=lambda r: r[0])
    e1 = records[0][0]
    rows = [
        (i, e, e - e1, s_min, s_1, 2.0**s_min, w)
        for i, (e, s_min, s_1, w) in enumerate(records)
    ]
    ctx.csv(
        "entropy_sweep.csv",
        "fig1",
        ["index", "E", "E_minus_E1", "S_min", "S_1", "chi", "sector_weight"],
        rows,
    )
    offsets = np.array([r[2] for r in rows])
    for col, name in ((3, "S_min"), (4, "S_1")):
        centers, means = bin_means(offsets, np.array([r[col] for r in rows]))
        ctx.csv(
            f"entropy_bins_{name}.csv",
            "fig1",
            ["E_minus_E1", f"mean_{name}"],
            zip(centers, means),
        )
    ctx.scalars["k"] = len(rows)
    ctx.scalars["ceiling_bits"] = h.n / 2


def _predicted_figure(cfg: RunConfig) -> str:
    return "fig2a" if cfg.model.get("kind") == "afhm2d" else "fig3"


def _actual_figure(cfg: RunConfig) -> str:
    return "fig2b" if cfg.model.get("kind") == "afhm2d" else "fig3"


def _run_predict(ctx: RunContext, plus: bool) -> None:
    cfg = ctx.cfg
    h, path = _build_model(cfg)
    if h.n > 14:
        raise ConfigError("predict modes need a materialized eigensystem (n <= 14)")
    cut = _build_bipartition(cfg, h.n, path)
    es = full_eigensystem(h)
    ranks = eigenstate_stable_ranks(es, cut)
    budgets = _budgets(cfg, h, path, cut)
    gamma = None
    if plus:
        cache = ctx.out / f"gamma_{h.canonical_hash()[:16]}.cache"
        gamma = gamma_matrix(es, cut, cache_path=cache, hamiltonian_hash=h.canonical_hash())
    grid = default_grid(es.energies, cfg.width)
    for label, m in budgets:
        problem = SpectrumProblem(es.energies, ranks, m)
        report = classify(problem)
        ctx.scalars[f"case_{label}"] = report.case.value
        ctx.scalars[f"m_{label}"] = m
        if plus:
            sol = solve_cr_plus(es.energies, gamma, m)
            weights = sol.weights
            ctx.scalars[f"optimum_{label}"] = sol.optimum_energy
            ctx.scalars[f"multiplier_{label}"] = sol.multiplier
            stem = f"cr_plus_{label}"
        else:
            pred = predict(problem)
            weights = pred.weights
            ctx.scalars[f"optimum_{label}"] = pred.optimum_energy
            if pred.nu_star is not None:
                ctx.scalars[f"nu_star_{label}"] = pred.nu_star
            stem = f"predicted_{label}"
        ctx.csv(
            f"{stem}.csv",
            _predicted_figure(cfg),
            ["E", "M", "p"],
            zip(es.energies, ranks, weights),
        )
        dens = broaden(es.energies, weights, cfg.width, grid)
        ctx.csv(
            f"{stem}_broadened.csv",
            _predicted_figure(cfg),
            ["E", "density"],
            zip(grid, dens),
        )


def _run_actual(ctx: RunContext) -> None:
    cfg = ctx.cfg
    h, path = _build_model(cfg)
    cut = _build_bipartition(cfg, h.n, path)
    if h.n > 14:
        _run_full_2d_actual(ctx, h, path, cut)
        return
    es = full_eigensystem(h)
    ground = ground_state(h)
    grid = default_grid(es.energies, cfg.width)
    for d in cfg.bond_dims:
        mps = compress_state(ground.state, int(d), path=path)
        if cfg.sweeps:
            mps = sweep_refine(mps, h, cfg.sweeps)
        spec = overlap_spectrum(mps, es, bipartition=cut, h=h)
        ctx.scalars[f"m_D{int(d)}"] = spec.chi
        ctx.scalars[f"energy_D{int(d)}"] = spec.energy
        ctx.csv(
            f"actual_D{int(d)}.csv",
            _actual_figure(cfg),
            ["E", "p"],
            zip(es.energies, spec.weights),
        )
        dens = broaden(es.energies, spec.weights, cfg.width, grid)
        ctx.csv(
            f"actual_D{int(d)}_broadened.csv",
            _actual_figure(cfg),
            ["E", "density"],
            zip(grid, dens),
        )


def _run_full_2d_actual(ctx: RunContext, h, path, cut) -> None:
    """Streamed variant for systems above the materialization limit:
    eigenstate ranks, overlaps, predictions, and the slack table in one
    pass over the magnetization sectors."""
    cfg = ctx.cfg
    if not cfg.full_2d:
        raise ConfigError("the full 2^16 job is opt-in: pass --full-2d")
    ground = ground_state(h)
    compressed = {}
    for d in cfg.bond_dims:
        mps = compress_state(ground.state, int(d), path=path)
        if cfg.sweeps:
            mps = sweep_refine(mps, h, cfg.sweeps)
        psi = mps.to_state()
        compressed[int(d)] = psi
        ctx.scalars[f"m_D{int(d)}"] = stable_schmidt_rank(psi, cut)

    from .hamiltonian import embed_sector_vector

    energies_parts: list[np.ndarray] = []
    ranks_all: list[float] = []
    amp_parts: dict[int, list[np.ndarray]] = {d: [] for d in compressed}
    for sector, energies, vectors in stream_sector_eigensystems(h):
        idx = sector.basis.astype(np.intp)
        energies_parts.append(energies)
        for d, psi in compressed.items():
            amp_parts[d].append(vectors.conj().T @ psi[idx])
        for j in range(energies.size):
            psi_full = embed_sector_vector(sector, vectors[:, j])
            gam = reshape_state(psi_full, cut)
            svals = np.linalg.svd(gam, compute_uv=False)
            ranks_all.append(float(np.sum(svals**2) / svals[0] ** 2))
    order = np.argsort(np.concatenate(energies_parts), kind="stable")
    energies_arr = np.concatenate(energies_parts)[order]
    ranks_arr = np.asarray(ranks_all)[order]
    amps_all = {d: np.concatenate(parts) for d, parts in amp_parts.items()}
    overlaps_all = {d: np.abs(a) ** 2 for d, a in amps_all.items()}
    grid = default_grid(energies_arr, cfg.width)
    slack_rows = []
    for d, psi in compressed.items():
        p = overlaps_all[d][order]
        amps = amps_all[d][order]
        ctx.csv(f"actual_D{d}.csv", "fig2b", ["E", "p"], zip(energies_arr, p))
        dens = broaden(energies_arr, p, cfg.width, grid)
        ctx.csv(f"actual_D{d}_broadened.csv", "fig2b", ["E", "density"], zip(grid, dens))
        m = ctx.scalars[f"m_D{d}"]
        problem = SpectrumProblem(energies_arr, ranks_arr, m)
        pred = predict(problem)
        ctx.csv(f"predicted_D{d}.csv", "fig2a", ["E", "M", "p"], zip(energies_arr, ranks_arr, pred.weights))
        dens = broaden(energies_arr, pred.weights, cfg.width, grid)
        ctx.csv(f"predicted_D{d}_broadened.csv", "fig2a", ["E", "density"], zip(grid, dens))
        if pred.nu_star is not None:
            ctx.scalars[f"nu_star_D{d}"] = pred.nu_star
        ctx.scalars[f"optimum_D{d}"] = pred.optimum_energy
        gam_psi = reshape_state(psi, cut)
        inv_sqrt_m = float(np.linalg.svd(gam_psi, compute_uv=False)[0])
        triangle = float(np.abs(amps) @ (1.0 / np.sqrt(ranks_arr)))
        slack_rows.append((d, inv_sqrt_m, triangle))
    ctx.csv("slack_table.csv", "table", ["D", "inv_sqrt_m", "B"], slack_rows)


def _run_slack_table(ctx: RunContext) -> None:
    cfg = ctx.cfg
    h, path = _build_model(cfg)
    if h.n > 14:
        raise ConfigError("slack-table needs a materialized eigensystem; use actual --full-2d")
    cut = _build_bipartition(cfg, h.n, path)
    es = full_eigensystem(h)
    ground = ground_state(h)
    rows = slack_table(
        ground.state, es, cut, tuple(int(d) for d in cfg.bond_dims), path=path,
        sweeps=cfg.sweeps, h=h,
    )
    ctx.csv(
        "slack_table.csv",
        "table",
        ["D", "inv_sqrt_m", "B"],
        [(r.max_bond, r.inv_sqrt_chi, r.triangle_bound) for r in rows],
    )
    for r in rows:
        ctx.scalars[f"inv_sqrt_m_D{r.max_bond}"] = r.inv_sqrt_chi
        ctx.scalars[f"B_D{r.max_bond}"] = r.triangle_bound


def _run_two_level(ctx: RunContext) -> None:
    p = ctx.cfg.two_level
    sys_ = TwoLevelSystem(
        xi1=float(p.get("xi1", 0.0)),
        xi2=float(p.get("xi2", 1.0)),
        a1=float(p.get("a1", 1.0)),
        a2=float(p.get("a2", 1.0)),
    )
    points = int(p.get("mu_points", 99))
    mus = np.linspace(0.0, 1.0, points + 2)[1:-1]
    rows = []
    for mu in mus:
        s = spectrum_from_mu(sys_, float(mu))
        rows.append((float(mu), s.m, s.p, s.energy))
    ctx.csv("two_level_sweep.csv", None, ["mu", "m", "p", "E"], rows)
    ctx.scalars["p_lower_limit"] = sys_.p_lower_limit


def _run_ensemble(ctx: RunContext) -> None:
    p = ctx.cfg.ensemble
    d_list = [int(d) for d in p.get("d_list", [2, 4, 8])]
    trials = int(p.get("trials", 10_000))
    kinds = p.get("alphas", ["uniform", "heavy"])
    for d in d_list:
        k = d * d
        for kind in kinds:
            if kind == "uniform":
                alpha = np.full(k, 1.0 / np.sqrt(k))
            elif kind == "heavy":
                alpha = 0.9 ** np.arange(k)
                alpha /= np.linalg.norm(alpha)
            else:
                raise ConfigError(f"unknown amplitude profile {kind!r}")
            report = ab_statistics(alpha, d, trials, ctx.cfg.seed)
            ctx.json_file(f"ensemble_d{d}_{kind}.json", report.to_json())
            ctx.scalars[f"ratio_d{d}_{kind}"] = report.ratio
    scaling = norm_scaling_check(tuple(d_list), trials, ctx.cfg.seed)
    doc = {
        "trials": scaling.trials,
        "seed": scaling.seed,
        "quantiles": {str(d): list(q) for d, q in scaling.quantiles.items()},
        "fitted_lower": scaling.fitted_lower,
        "fitted_upper": scaling.fitted_upper,
        "frob_tails": [
            {"r": t.r, "empirical": t.empirical, "bound": t.bound, "std_error": t.std_error}
            for t in scaling.frob_tail_checks
        ],
    }
    ctx.json_file("norm_scaling.json", json.dumps(doc, indent=2, sort_keys=True))


def run(cfg: RunConfig) -> dict:
    """Execute one mode and return the manifest dictionary."""
    cfg.validate()
    ctx = RunContext(cfg)
    if cfg.mode == "entropy-sweep":
        _run_entropy_sweep(ctx)
    elif cfg.mode == "predict":
        _run_predict(ctx, plus=False)
    elif cfg.mode == "predict-plus":
        _run_predict(ctx, plus=True)
    elif cfg.mode == "actual":
        _run_actual(ctx)
    elif cfg.mode == "slack-table":
        _run_slack_table(ctx)
    elif cfg.mode == "two-level":
        _run_two_level(ctx)
    elif cfg.mode == "ensemble":
        _run_ensemble(ctx)
    else:
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    return ctx.finish()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="spectra-lab",
        description="Predict and validate eigenstate-overlap spectra of compressed states.",
    )
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--seed", type=int, help="64-bit RNG seed")
    parser.add_argument("--d", help="comma-separated bond dimensions, e.g. 4,8,16")
    parser.add_argument("--width", type=float, help="Gaussian broadening width")
    parser.add_argument("--sweeps", type=int, help="variational refinement sweeps")
    parser.add_argument("--full-2d", action="store_true", default=None,
                        help="opt in to the full 2^16 torus job")
    args = parser.parse_args(argv)

    overrides: dict = {
        "mode": args.mode,
        "out": args.out,
        "seed": args.seed,
        "width": args.width,
        "sweeps": args.sweeps,
        "full_2d": args.full_2d,
    }
    if args.d is not None:
        overrides["bond_dims"] = [int(x) for x in args.d.split(",")]
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    try:
        manifest = run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except InfeasibleProblem as exc:
        print(f"INFEASIBLE: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConvergenceFailure, ArithmeticError, AssertionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(json.dumps({"out": cfg.out, "files": manifest["files"]}, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
