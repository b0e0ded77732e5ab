"""Command-line interface: outputs, exit codes, determinism."""

from __future__ import annotations

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from fracmix.cli import main


def write_config(path, **overrides):
    cfg = {
        "problem": {"alpha": 0.7, "beta": 1.5, "gamma": 0.5, "p": 1.0,
                    "q": 1.0, "K": 4, "tol": 1e-10},
        "boundary": {
            "mode": "trig",
            "phi": [{"kind": "cosine", "k": 1, "amplitude": 1.0}],
            "psi": [{"kind": "cosine", "k": 1, "amplitude": 1.0}],
        },
        "report": {"nx": 8, "nt": 6},
    }
    for key, val in overrides.items():
        cfg[key] = val
    path.write_text(json.dumps(cfg, indent=1), encoding="utf-8")
    return path


def read_csv(path):
    rows = [line.split(",") for line in
            path.read_text().strip().splitlines()[1:]]
    return np.array([[float(v) for v in row] for row in rows])


class TestInverse:
    def test_zero_data(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", boundary={
            "mode": "trig", "phi": [], "psi": []})
        out = tmp_path / "out"
        assert main(["inverse", "--config", str(cfg), "--out", str(out),
                     "--grid-nx", "11", "--grid-nt", "5"]) == 0
        f = read_csv(out / "f.csv")
        u = read_csv(out / "u.csv")
        assert np.all(f[:, 1] == 0.0)
        assert np.all(u[:, 2] == 0.0)
        report = json.loads((out / "report.json").read_text())
        assert report["passed"] is True

    def test_cos_mode_source(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        out = tmp_path / "out"
        assert main(["inverse", "--config", str(cfg), "--out", str(out),
                     "--grid-nx", "41", "--grid-nt", "5"]) == 0
        f = read_csv(out / "f.csv")
        expect = 4 * math.pi**2 * np.cos(2 * math.pi * f[:, 0])
        assert np.max(np.abs(f[:, 1] - expect)) <= 1e-8
        coeffs = json.loads((out / "coefficients.json").read_text())
        assert coeffs["source"]["c0"] == 0.0

    def test_solvability_exit_code(self, tmp_path, capsys):
        # Delta_0 = p + p^2/2 - q vanishes at q = 1.5 for alpha=1, beta=2
        cfg = write_config(
            tmp_path / "c.json",
            problem={"alpha": 1.0, "beta": 2.0, "gamma": 1.0, "p": 1.0,
                     "q": 1.5, "K": 2})
        out = tmp_path / "out"
        assert main(["inverse", "--config", str(cfg), "--out", str(out)]) == 2
        err = capsys.readouterr().err
        assert "Delta_0" in err

    def test_config_validation_exit_code(self, tmp_path):
        cfg = write_config(tmp_path / "c.json",
                           problem={"alpha": 2.5, "beta": 1.5, "gamma": 0.5,
                                    "p": 1.0, "q": 1.0})
        assert main(["inverse", "--config", str(cfg),
                     "--out", str(tmp_path / "o")]) == 3
        missing = tmp_path / "missing.json"
        assert main(["inverse", "--config", str(missing),
                     "--out", str(tmp_path / "o")]) == 3

    def test_deterministic_outputs(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        assert main(["inverse", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["inverse", "--config", str(cfg), "--out", str(out2)]) == 0
        for name in ("f.csv", "u.csv", "coefficients.json", "report.json"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_modes_flag_overrides(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        out = tmp_path / "out"
        assert main(["inverse", "--config", str(cfg), "--out", str(out),
                     "--modes", "2"]) == 0
        coeffs = json.loads((out / "coefficients.json").read_text())
        assert len(coeffs["source"]["c1"]) == 2

    def test_sampled_boundary_mode(self, tmp_path):
        xs = np.linspace(0.0, 1.0, 3001)
        vals = np.cos(2 * math.pi * xs)
        lines = ["x,value"] + [f"{x:.17g},{v:.17g}" for x, v in zip(xs, vals)]
        (tmp_path / "phi.csv").write_text("\n".join(lines) + "\n")
        (tmp_path / "psi.csv").write_text("\n".join(lines) + "\n")
        cfg = write_config(tmp_path / "c.json", boundary={
            "mode": "samples", "phi": "phi.csv", "psi": "psi.csv"})
        out = tmp_path / "out"
        assert main(["inverse", "--config", str(cfg), "--out", str(out),
                     "--grid-nx", "21"]) == 0
        f = read_csv(out / "f.csv")
        expect = 4 * math.pi**2 * np.cos(2 * math.pi * f[:, 0])
        # piecewise-linear samples limit the projection accuracy
        assert np.max(np.abs(f[:, 1] - expect)) <= 1e-3


class TestForward:
    def test_zero_everything(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", forward={
            "source": [], "interface": [], "slope": []})
        out = tmp_path / "out"
        assert main(["forward", "--config", str(cfg), "--out", str(out)]) == 0
        u = read_csv(out / "u.csv")
        assert np.all(u[:, 2] == 0.0)

    def test_linear_zero_mode_growth(self, tmp_path):
        # constant source with alpha = 1 grows the zero mode linearly in t
        cfg = write_config(
            tmp_path / "c.json",
            problem={"alpha": 1.0, "beta": 2.0, "gamma": 1.0, "p": 1.0,
                     "q": 1.0, "K": 2},
            forward={"source": [{"kind": "constant", "k": 0, "amplitude": 2.0}],
                     "interface": [{"kind": "constant", "k": 0,
                                    "amplitude": 1.0}],
                     "slope": [{"kind": "constant", "k": 0, "amplitude": 2.0}]})
        out = tmp_path / "out"
        assert main(["forward", "--config", str(cfg), "--out", str(out),
                     "--grid-nx", "3", "--grid-nt", "21"]) == 0
        u = read_csv(out / "u.csv")
        at_origin = u[u[:, 0] == 0.0]
        upper = at_origin[at_origin[:, 1] >= 0.0]
        assert np.max(np.abs(upper[:, 2] - (1.0 + 2.0 * upper[:, 1]))) <= 1e-12

    def test_round_trip_through_cli(self, tmp_path):
        # transmitting-consistent data for gamma = 1:
        # f_k = slope_k + mu_k u0_k (minus the x-sine -> cosine coupling)
        mu1 = (2 * math.pi) ** 2
        mu2 = (4 * math.pi) ** 2
        lam2 = 4 * math.pi
        src = [{"kind": "cosine", "k": 1, "amplitude": 0.3 + mu1 * 1.0},
               {"kind": "cosine", "k": 2, "amplitude": -2 * lam2 * 0.4},
               {"kind": "x-sine", "k": 2, "amplitude": mu2 * 0.4}]
        fwd_cfg = write_config(
            tmp_path / "fwd.json",
            problem={"alpha": 0.7, "beta": 1.5, "gamma": 1.0, "p": 1.0,
                     "q": 1.0, "K": 4},
            forward={
                "source": src,
                "interface": [{"kind": "cosine", "k": 1, "amplitude": 1.0},
                              {"kind": "x-sine", "k": 2, "amplitude": 0.4}],
                "slope": [{"kind": "cosine", "k": 1, "amplitude": 0.3}],
            })
        fwd_out = tmp_path / "fwd"
        assert main(["forward", "--config", str(fwd_cfg),
                     "--out", str(fwd_out)]) == 0
        # feed the emitted snapshots back through the inverse solver
        base = json.loads((tmp_path / "fwd.json").read_text())
        base["boundary"] = json.loads((fwd_out / "boundary.json").read_text())
        inv_cfg = tmp_path / "inv.json"
        inv_cfg.write_text(json.dumps(base))
        inv_out = tmp_path / "inv"
        assert main(["inverse", "--config", str(inv_cfg),
                     "--out", str(inv_out)]) == 0
        got = json.loads((inv_out / "coefficients.json").read_text())
        want = json.loads((fwd_out / "coefficients.json").read_text())
        for key in ("c1", "c2"):
            assert np.max(np.abs(np.array(got["source"][key])
                                 - np.array(want["source"][key]))) <= 1e-8
        assert abs(got["source"]["c0"] - want["source"]["c0"]) <= 1e-8


class TestVerify:
    def test_pass_and_fail(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        out = tmp_path / "out"
        assert main(["inverse", "--config", str(cfg), "--out", str(out)]) == 0
        assert main(["verify", "--config", str(cfg), "--field", str(out)]) == 0
        # perturb the recovered source and re-verify
        doc = json.loads((out / "coefficients.json").read_text())
        doc["state"]["f2"][0] += 0.5
        doc["source"]["c2"][0] += 0.5
        bad = tmp_path / "bad"
        bad.mkdir()
        (bad / "coefficients.json").write_text(json.dumps(doc))
        assert main(["verify", "--config", str(cfg), "--field", str(bad),
                     "--out", str(tmp_path / "badrep")]) == 1

    def test_threshold_equal_passes(self, tmp_path):
        cfg = write_config(tmp_path / "c.json",
                           thresholds={"pde_minus": 1.0, "transmit": 1.0})
        out = tmp_path / "out"
        assert main(["inverse", "--config", str(cfg), "--out", str(out)]) == 0
        assert main(["verify", "--config", str(cfg), "--field", str(out)]) == 0


class TestSpecfunTable:
    def test_ml_column_is_exp(self, tmp_path):
        out = tmp_path / "tab"
        assert main(["specfun-table", "--function", "ml", "--out", str(out),
                     "--alpha", "1.0", "--beta", "1.0",
                     "--z-min", "-4", "--z-max", "1", "--n", "11"]) == 0
        tab = read_csv(out / "table.csv")
        assert np.max(np.abs(tab[:, 1] - np.exp(tab[:, 0]))) <= 1e-12

    def test_e1_columns_agree(self, tmp_path):
        out = tmp_path / "tab"
        assert main(["specfun-table", "--function", "e1", "--out", str(out),
                     "--nu", "1.5", "--delta1", "2.5",
                     "--z-min", "-50", "--z-max", "0", "--n", "6"]) == 0
        tab = read_csv(out / "table.csv")
        assert np.max(np.abs(tab[:, 3])) <= 1e-8

    def test_empty_range_header_only(self, tmp_path):
        out = tmp_path / "tab"
        assert main(["specfun-table", "--function", "ml", "--out", str(out),
                     "--n", "0"]) == 0
        text = (out / "table.csv").read_text().strip()
        assert text == "z,ml"


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", boundary={
            "mode": "trig", "phi": [], "psi": []})
        out = tmp_path / "out"
        proc = subprocess.run(
            [sys.executable, "-m", "fracmix.cli", "inverse",
             "--config", str(cfg), "--out", str(out), "--grid-nx", "5",
             "--grid-nt", "3"],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert (out / "report.json").exists()
