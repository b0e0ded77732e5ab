"""Batch command-line front-end.

Subcommands: ``inverse`` (recover source and field from the two boundary
snapshots), ``forward`` (evolve a given source and interface data),
``verify`` (re-check a previously solved field), and ``specfun-table``
(debug tables for the special-function evaluators).

A single JSON config describes the problem and the boundary data; outputs
are two delimited grids (f.csv, u.csv), the solved coefficients
(coefficients.json), and a residual report (report.json).  All numeric
output carries 17 significant digits, so re-running a config reproduces the
files byte for byte.

Exit codes: 0 success, 1 evaluator or I/O error, 2 solvability violation,
3 config validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .basis import CoefficientSet, TrigPolynomial, project
from .errors import DivisionError, FracmixError, SolvabilityError
from .solver import (
    FracProblem,
    ModeState,
    SolutionField,
    forward_state,
    solve_inverse,
)
from .specfun import MLArgs, e1, e1_via_integral, ml, unit_family_params
from .verify import DEFAULT_THRESHOLDS, full_report


class ConfigError(ValueError):
    pass


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _problem_from_config(cfg: dict, args) -> FracProblem:
    try:
        block = dict(cfg["problem"])
    except (KeyError, TypeError) as exc:
        raise ConfigError("config must contain a 'problem' object") from exc
    if args.modes is not None:
        block["K"] = args.modes
    if args.tol is not None:
        block["tol"] = args.tol
    try:
        return FracProblem(
            alpha=float(block["alpha"]), beta=float(block["beta"]),
            gamma=float(block["gamma"]), p=float(block["p"]),
            q=float(block["q"]), K=int(block.get("K", 16)),
            tol=float(block.get("tol", 1e-10)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid problem block: {exc}") from exc


def _atoms_from_list(atoms) -> TrigPolynomial:
    try:
        return TrigPolynomial.from_atoms(
            (a["kind"], a["k"], a["amplitude"]) for a in atoms)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid trig atom list: {exc}") from exc


def _read_samples_csv(path: Path):
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except OSError as exc:
        raise ConfigError(f"cannot read samples {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"malformed samples file {path}: {exc}") from exc
    if data.shape[1] != 2:
        raise ConfigError(f"{path} must have two columns (x,value)")
    return data[:, 0], data[:, 1]


def _boundary_from_config(cfg: dict, cfg_path: str):
    """Returns (phi, psi) as projectable objects."""
    try:
        block = cfg["boundary"]
        mode = block["mode"]
    except (KeyError, TypeError) as exc:
        raise ConfigError("config must contain a 'boundary' object "
                          "with a 'mode'") from exc
    if mode == "trig":
        return (_atoms_from_list(block["phi"]),
                _atoms_from_list(block["psi"]))
    if mode == "samples":
        base = Path(cfg_path).parent
        phi = _read_samples_csv(base / block["phi"])
        psi = _read_samples_csv(base / block["psi"])
        return phi, psi
    raise ConfigError(f"unknown boundary mode {mode!r}")


def _boundary_callable(data):
    if isinstance(data, TrigPolynomial):
        return data
    xs, vs = data
    return lambda x: np.interp(x, xs, vs)


def _state_to_dict(state: ModeState) -> dict:
    prob = state.problem
    return {
        "problem": {"alpha": prob.alpha, "beta": prob.beta,
                    "gamma": prob.gamma, "p": prob.p, "q": prob.q,
                    "K": prob.K, "tol": prob.tol},
        "state": {
            "f0": state.f0, "v0_0": state.v0_0, "w0p_0": state.w0p_0,
            "f1": state.f1.tolist(), "f2": state.f2.tolist(),
            "v1_0": state.v1_0.tolist(), "v2_0": state.v2_0.tolist(),
            "w1p_0": state.w1p_0.tolist(), "w2p_0": state.w2p_0.tolist(),
        },
        "source": {"c0": state.f0, "c1": state.f1.tolist(),
                   "c2": state.f2.tolist()},
    }


def _state_from_dict(doc: dict) -> ModeState:
    try:
        pb = doc["problem"]
        prob = FracProblem(alpha=pb["alpha"], beta=pb["beta"],
                           gamma=pb["gamma"], p=pb["p"], q=pb["q"],
                           K=int(pb["K"]), tol=pb.get("tol", 1e-10))
        st = doc["state"]
        return ModeState(prob, float(st["f0"]), float(st["v0_0"]),
                         float(st["w0p_0"]), np.asarray(st["f1"], dtype=float),
                         np.asarray(st["f2"], dtype=float),
                         np.asarray(st["v1_0"], dtype=float),
                         np.asarray(st["v2_0"], dtype=float),
                         np.asarray(st["w1p_0"], dtype=float),
                         np.asarray(st["w2p_0"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid coefficients document: {exc}") from exc


def _round17(obj):
    """Normalize every float in a JSON tree through 17 significant digits."""
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round17(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round17(v) for v in obj]
    return obj


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(_round17(doc), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _write_field_outputs(outdir: Path, fld: SolutionField, nx: int,
                         nt: int) -> None:
    prob = fld.problem
    xs = np.linspace(0.0, 1.0, nx)
    lines = ["x,f"]
    fvals = fld.eval_f(xs)
    for x, v in zip(xs, fvals):
        lines.append(f"{_fmt(x)},{_fmt(v)}")
    (outdir / "f.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    ts = np.linspace(-prob.p, prob.q, nt)
    lines = ["x,t,u"]
    for t in ts:
        uvals = np.atleast_1d(fld.eval_u(xs, float(t)))
        for x, u in zip(xs, uvals):
            lines.append(f"{_fmt(x)},{_fmt(t)},{_fmt(u)}")
    (outdir / "u.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    _write_json(outdir / "coefficients.json", _state_to_dict(fld.state))


def _report_block(cfg: dict) -> dict:
    block = cfg.get("report", {})
    return {"nx": int(block.get("nx", 20)), "nt": int(block.get("nt", 20))}


def _thresholds(cfg: dict) -> dict:
    th = dict(DEFAULT_THRESHOLDS)
    th.update(cfg.get("thresholds", {}))
    return th


def _emit_report(outdir: Path, fld: SolutionField, phi, psi, cfg: dict) -> list[str]:
    rb = _report_block(cfg)
    report = full_report(fld, _boundary_callable(phi), _boundary_callable(psi),
                         nx=rb["nx"], nt=rb["nt"])
    th = _thresholds(cfg)
    failures = report.failures(th)
    doc = {"residuals": report.to_dict(), "thresholds": th,
           "failures": failures, "passed": not failures}
    _write_json(outdir / "report.json", doc)
    return failures


def cmd_inverse(args) -> int:
    cfg = _load_config(args.config)
    prob = _problem_from_config(cfg, args)
    phi, psi = _boundary_from_config(cfg, args.config)
    phi_c = project(phi, prob.K)
    psi_c = project(psi, prob.K)
    try:
        fld = solve_inverse(phi_c, psi_c, prob)
    except SolvabilityError as exc:
        print(f"solvability violation: {exc} (k={exc.k}, Delta={exc.delta})",
              file=sys.stderr)
        return 2
    except DivisionError as exc:
        print(f"solvability violation: {exc} (k={exc.k}, value={exc.value})",
              file=sys.stderr)
        return 2
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_field_outputs(outdir, fld, args.grid_nx, args.grid_nt)
    failures = _emit_report(outdir, fld, phi, psi, cfg)
    for f in failures:
        print(f"residual threshold exceeded: {f}", file=sys.stderr)
    print(f"inverse solve written to {outdir}")
    return 0


def cmd_forward(args) -> int:
    cfg = _load_config(args.config)
    prob = _problem_from_config(cfg, args)
    try:
        block = cfg["forward"]
        source = _atoms_from_list(block["source"])
        interface = _atoms_from_list(block["interface"])
        slope = _atoms_from_list(block.get("slope", []))
    except (KeyError, TypeError) as exc:
        raise ConfigError("forward command needs a 'forward' object with "
                          "'source' and 'interface' atom lists") from exc
    state = forward_state(prob, project(source, prob.K),
                          project(interface, prob.K),
                          project(slope, prob.K))
    fld = SolutionField(state)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_field_outputs(outdir, fld, args.grid_nx, args.grid_nt)

    def atoms_of(c: CoefficientSet) -> list[dict]:
        atoms = [{"kind": "constant", "k": 0, "amplitude": float(_fmt(c.c0))}]
        for k in range(1, c.K + 1):
            atoms.append({"kind": "cosine", "k": k,
                          "amplitude": float(_fmt(c.c1[k - 1]))})
            atoms.append({"kind": "x-sine", "k": k,
                          "amplitude": float(_fmt(c.c2[k - 1]))})
        return atoms

    snapshots = {
        "mode": "trig",
        "phi": atoms_of(fld.mode_values(prob.q)),
        "psi": atoms_of(fld.mode_values(-prob.p)),
    }
    _write_json(outdir / "boundary.json", snapshots)
    print(f"forward field written to {outdir}")
    return 0


def cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    field_dir = Path(args.field)
    try:
        doc = json.loads((field_dir / "coefficients.json").read_text(
            encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read field coefficients: {exc}") from exc
    state = _state_from_dict(doc)
    fld = SolutionField(state)
    phi, psi = _boundary_from_config(cfg, args.config)
    outdir = Path(args.out) if args.out else field_dir
    outdir.mkdir(parents=True, exist_ok=True)
    failures = _emit_report(outdir, fld, phi, psi, cfg)
    report = json.loads((outdir / "report.json").read_text(encoding="utf-8"))
    for name, value in report["residuals"].items():
        if name != "tails":
            print(f"{name}: {value:.6e}")
    if failures:
        for f in failures:
            print(f"FAIL {f}")
        return 1
    print("all residuals within thresholds")
    return 0


def cmd_specfun_table(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "table.csv"
    n = args.n
    if args.function == "ml":
        lines = ["z,ml"]
        if n > 0:
            for z in np.linspace(args.z_min, args.z_max, n):
                v = ml(MLArgs(args.alpha, args.beta, float(z)))
                lines.append(f"{_fmt(z)},{_fmt(v)}")
    else:
        lines = ["w,e1_series,e1_integral,diff"]
        if n > 0:
            params = unit_family_params(args.nu, args.delta1)
            for w in np.linspace(args.z_min, args.z_max, n):
                s = e1(params, float(w), float(w))
                i = e1_via_integral(params, args.delta1 - 1.0, 1.0,
                                    float(w), float(w))
                lines.append(f"{_fmt(w)},{_fmt(s)},{_fmt(i)},{_fmt(s - i)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"table written to {path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fracmix",
        description="Inverse source solver for the two-branch time-fractional "
                    "equation on a rectangle")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--grid-nx", type=int, default=101,
                       help="x samples in the output grids")
        p.add_argument("--grid-nt", type=int, default=41,
                       help="t samples in u.csv")
        p.add_argument("--modes", type=int, default=None,
                       help="override problem truncation K")
        p.add_argument("--tol", type=float, default=None,
                       help="override solvability tolerance")

    p_inv = sub.add_parser("inverse", help="solve the inverse source problem")
    common(p_inv)
    p_inv.set_defaults(fn=cmd_inverse)

    p_fwd = sub.add_parser("forward", help="evolve a given source forward")
    common(p_fwd)
    p_fwd.set_defaults(fn=cmd_forward)

    p_ver = sub.add_parser("verify", help="re-check a solved field")
    p_ver.add_argument("--config", required=True)
    p_ver.add_argument("--field", required=True,
                       help="directory holding coefficients.json")
    p_ver.add_argument("--out", default=None,
                       help="report directory (defaults to the field dir)")
    p_ver.set_defaults(fn=cmd_verify)

    p_tab = sub.add_parser("specfun-table",
                           help="dump evaluator debug tables")
    p_tab.add_argument("--function", choices=("ml", "e1"), required=True)
    p_tab.add_argument("--out", required=True)
    p_tab.add_argument("--alpha", type=float, default=1.0)
    p_tab.add_argument("--beta", type=float, default=1.0)
    p_tab.add_argument("--nu", type=float, default=0.7)
    p_tab.add_argument("--delta1", type=float, default=1.7)
    p_tab.add_argument("--z-min", type=float, default=-10.0)
    p_tab.add_argument("--z-max", type=float, default=0.0)
    p_tab.add_argument("--n", type=int, default=21)
    p_tab.set_defaults(fn=cmd_specfun_table)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except (SolvabilityError, DivisionError) as exc:
        print(f"solvability violation: {exc}", file=sys.stderr)
        return 2
    except (FracmixError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
