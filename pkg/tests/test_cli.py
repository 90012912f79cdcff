import csv
import json
from pathlib import Path

import numpy as np
import pytest

from spectralab.cli import EXIT_BAD_CONFIG, EXIT_INFEASIBLE, load_config, main, run


def read_tagged_csv(path: Path):
    text = path.read_text().splitlines()
    assert text[0].startswith("# figure:")
    tag = text[0].split(":", 1)[1].strip()
    rows = list(csv.DictReader(text[1:]))
    return tag, rows


def test_entropy_sweep_sector_complete(tmp_path):
    cfg = load_config(None, {"mode": "entropy-sweep", "out": str(tmp_path)})
    cfg.model = {"kind": "afhm1d", "n": 8}
    run(cfg)
    tag, rows = read_tagged_csv(tmp_path / "entropy_sweep.csv")
    assert tag == "fig1"
    assert len(rows) == 256
    half_sector = [r for r in rows if r["sector_weight"] == "4"]
    assert len(half_sector) == 70  # C(8, 4)
    assert (tmp_path / "entropy_bins_S_min.csv").exists()
    assert (tmp_path / "entropy_bins_S_1.csv").exists()
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["scalars"]["k"] == 256


def test_predict_infeasible_exit_code(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "model": {"kind": "afhm1d", "n": 4},
        "m": 1e-6,
    }))
    code = main(["predict", "--config", str(cfg_path), "--out", str(tmp_path / "o")])
    assert code == EXIT_INFEASIBLE


def test_invalid_config_exit_code(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"model": {"kind": "nonsense"}}))
    assert main(["predict", "--config", str(cfg_path)]) == EXIT_BAD_CONFIG
    cfg_path.write_text("{not json")
    assert main(["predict", "--config", str(cfg_path)]) == EXIT_BAD_CONFIG
    cfg_path.write_text(json.dumps({"mystery_knob": 3}))
    assert main(["predict", "--config", str(cfg_path)]) == EXIT_BAD_CONFIG


def test_predict_mode_artifacts(tmp_path):
    cfg = load_config(None, {"mode": "predict", "out": str(tmp_path)})
    cfg.model = {"kind": "afhm1d", "n": 6}
    cfg.bond_dims = [2, 4]
    manifest = run(cfg)
    for d in (2, 4):
        tag, rows = read_tagged_csv(tmp_path / f"predicted_D{d}.csv")
        assert tag == "fig3"
        assert len(rows) == 64
        p = np.array([float(r["p"]) for r in rows])
        assert p.sum() == pytest.approx(1.0, abs=1e-9)
        assert f"nu_star_D{d}" in manifest["scalars"]
        assert manifest["scalars"][f"case_D{d}"] == "GENERIC"
        tag, rows = read_tagged_csv(tmp_path / f"predicted_D{d}_broadened.csv")
        assert tag == "fig3"


def test_actual_mode_and_budget_consistency(tmp_path):
    cfg = load_config(None, {"mode": "actual", "out": str(tmp_path)})
    cfg.model = {"kind": "afhm1d", "n": 6}
    cfg.bond_dims = [2]
    manifest = run(cfg)
    tag, rows = read_tagged_csv(tmp_path / "actual_D2.csv")
    assert tag == "fig3"
    weights = np.array([float(r["p"]) for r in rows])
    assert weights.sum() == pytest.approx(1.0, abs=1e-9)
    assert manifest["scalars"]["m_D2"] <= 2.0 + 1e-9


def test_predict_plus_writes_gamma_cache(tmp_path):
    cfg = load_config(None, {"mode": "predict-plus", "out": str(tmp_path)})
    cfg.model = {"kind": "afhm1d", "n": 6}
    cfg.bond_dims = [2]
    manifest = run(cfg)
    caches = list(tmp_path.glob("gamma_*.cache"))
    assert len(caches) == 1
    header = json.loads(caches[0].read_text().splitlines()[0])
    assert header["k"] == 64 and header["bipartition"] == [0, 1, 2]
    tag, _ = read_tagged_csv(tmp_path / "cr_plus_D2.csv")
    assert tag == "fig3"
    assert "optimum_D2" in manifest["scalars"]


def test_two_level_sweep_monotone(tmp_path):
    cfg = load_config(None, {"mode": "two-level", "out": str(tmp_path)})
    cfg.two_level = {"a1": 1.0, "a2": 2.0, "xi1": 0.0, "xi2": 1.0, "mu_points": 37}
    run(cfg)
    text = (tmp_path / "two_level_sweep.csv").read_text().splitlines()
    rows = list(csv.DictReader(text))
    assert len(rows) == 37
    ps = [float(r["p"]) for r in rows]
    assert all(b > a for a, b in zip(ps, ps[1:]))


def test_ensemble_mode_reports(tmp_path):
    cfg = load_config(None, {"mode": "ensemble", "out": str(tmp_path), "seed": 3})
    cfg.ensemble = {"d_list": [2], "trials": 300, "alphas": ["uniform"]}
    manifest = run(cfg)
    doc = json.loads((tmp_path / "ensemble_d2_uniform.json").read_text())
    for key in ("d", "k", "alpha_norm1", "trials", "seed", "mean_A", "mean_B", "ratio", "tails"):
        assert key in doc
    assert doc["seed"] == 3
    assert (tmp_path / "norm_scaling.json").exists()
    assert "ratio_d2_uniform" in manifest["scalars"]


def test_slack_table_mode(tmp_path):
    cfg = load_config(None, {"mode": "slack-table", "out": str(tmp_path)})
    cfg.model = {"kind": "afhm1d", "n": 6}
    cfg.bond_dims = [2, 4]
    run(cfg)
    tag, rows = read_tagged_csv(tmp_path / "slack_table.csv")
    assert tag == "table"
    assert [r["D"] for r in rows] == ["2", "4"]
    for r in rows:
        assert float(r["B"]) >= float(r["inv_sqrt_m"]) - 1e-12


def test_reruns_byte_identical_except_manifest_timestamp(tmp_path):
    outs = []
    for sub in ("a", "b"):
        cfg = load_config(None, {"mode": "predict", "out": str(tmp_path / sub), "seed": 9})
        cfg.model = {"kind": "afhm1d", "n": 4}
        cfg.bond_dims = [2]
        run(cfg)
        outs.append(tmp_path / sub)
    for name in ("predicted_D2.csv", "predicted_D2_broadened.csv"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    m0 = json.loads((outs[0] / "manifest.json").read_text())
    m1 = json.loads((outs[1] / "manifest.json").read_text())
    m0.pop("created"), m1.pop("created")
    m0["config"].pop("out", None), m1["config"].pop("out", None)
    assert m0 == m1


def test_pauli_model_from_json_document(tmp_path):
    # arbitrary pauli-sum models enter through the documented JSON schema
    from spectralab.hamiltonian import build_afhm_1d

    model_path = tmp_path / "model.json"
    model_path.write_text(json.dumps(build_afhm_1d(4).to_json_dict()))
    cfg = load_config(None, {"mode": "predict", "out": str(tmp_path / "o")})
    cfg.model = {"kind": "pauli", "path": str(model_path)}
    cfg.bond_dims = [2]
    manifest = run(cfg)
    assert "predicted_D2.csv" in manifest["files"]
    assert manifest["tool_versions"]["numpy"]


def test_cli_end_to_end_via_main(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"model": {"kind": "afhm1d", "n": 4}}))
    code = main([
        "predict", "--config", str(cfg_path), "--out", str(tmp_path / "out"), "--d", "2",
        "--width", "0.2",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "predicted_D2.csv" in out
