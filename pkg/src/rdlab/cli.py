"""Command-line front end: experiments from JSON configs, CSV/JSON results.

Commands: classify, simulate, entropy (recompute functionals from stored
states), spectrum, instability, sweep.  Exit codes are stable across
commands: 0 success, 2 config or validation error, 3 solver failure,
4 regime mismatch.  Floats are written with 17 significant digits so CSVs
round-trip exactly; outputs carry no timestamps, making reruns with the
same seed bit-identical.
"""

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from .entropy import InsufficientData, fit_decay_rate, rate_certificate
from .grid import Mesh
from .instability import (
    PerturbationSpec,
    ProbeAfterEscape,
    RateNonPositive,
    deviation_scaling,
    run_instability,
)
from .model import (
    Masses,
    Params,
    ReactionSystem,
    RegimeMismatch,
    classify_equilibria,
    compute_masses,
)
from .sampling import random_smooth_field
from .solver import (
    LinearSolveFailure,
    PositivityFailure,
    Scheme,
    SolverConfig,
    State,
    Trajectory,
    diagnostics_sample,
    omega_threshold,
    simulate,
)
from .spectral import max_growth_rate, mode_spectra

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_REGIME = 4


class ConfigError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_csv(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path, payload) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def _load_config(path) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _require(cfg: dict, key: str):
    if key not in cfg:
        raise ConfigError(f"config misses required key {key!r}")
    return cfg[key]


def _parse_system(name) -> ReactionSystem:
    try:
        return ReactionSystem(str(name).lower())
    except ValueError as exc:
        raise ConfigError(f"unknown system {name!r} (expected p1 or p2)") from exc


def _parse_masses(system: ReactionSystem, blob) -> Masses:
    try:
        if system is ReactionSystem.P1:
            return Masses.p1(float(blob["m1"]), float(blob["m2"]))
        return Masses.p2(float(blob["mass"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad masses {blob!r}: {exc}") from exc


def _parse_scheme(name) -> Scheme:
    try:
        return Scheme(str(name))
    except ValueError as exc:
        raise ConfigError(f"unknown scheme {name!r}") from exc


def _masses_dict(masses: Masses) -> dict:
    if masses.system is ReactionSystem.P1:
        return {"m1": masses.m1, "m2": masses.m2}
    return {"mass": masses.total}


# ---------------------------------------------------------------------------
# classify


def cmd_classify(args) -> int:
    system = _parse_system(args.system)
    if system is ReactionSystem.P1:
        if args.m1 is None or args.m2 is None:
            raise ConfigError("p1 needs --m1 and --m2")
        masses = Masses.p1(args.m1, args.m2)
    else:
        if args.mass is None:
            raise ConfigError("p2 needs --mass")
        masses = Masses.p2(args.mass)
    eqs = classify_equilibria(system, masses)
    print(
        json.dumps(
            {
                "system": system.value,
                "masses": _masses_dict(masses),
                "regime": eqs.regime.value,
                "positive": list(eqs.positive) if eqs.positive else None,
                "boundary": [list(b) for b in eqs.boundary],
            },
            indent=2,
            sort_keys=True,
        )
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate


def _build_initial(cfg: dict, system: ReactionSystem, mesh: Mesh, seed: int) -> State:
    blob = _require(cfg, "initial")
    if "csv" in blob:
        fields = _read_states_csv(blob["csv"])
        if fields.shape[1] != 1 + 3 * mesh.n_cells:
            raise ConfigError("initial-data CSV does not match n_cells")
        n = mesh.n_cells
        row = fields[0]
        a, b, c = row[1 : n + 1], row[n + 1 : 2 * n + 1], row[2 * n + 1 :]
        return State(system, a.copy(), b.copy(), c.copy(), 0.0)
    if "constant" not in blob:
        raise ConfigError("initial needs either 'constant' or 'csv'")
    const = [float(v) for v in blob["constant"]]
    if len(const) != 3 or min(const) < 0:
        raise ConfigError("initial constants must be three non-negative values")
    rng = np.random.default_rng(seed)
    pert = blob.get("perturbation")
    fields = []
    for v in const:
        if pert:
            amp = float(pert.get("amplitude", 0.2))
            n_modes = int(pert.get("n_modes", 4))
            f = v * (1.0 + amp * random_smooth_field(rng, mesh, n_modes))
        else:
            f = np.full(mesh.n_cells, v)
        fields.append(f)
    state = State(system, fields[0], fields[1], fields[2], 0.0)
    if state.min_value() < 0:
        raise ConfigError("perturbation amplitude drives the initial data negative")
    return state


def _trajectory_header(system: ReactionSystem) -> list:
    mass_cols = ["mass1", "mass2"] if system is ReactionSystem.P1 else ["mass_total"]
    return (
        ["t"]
        + mass_cols
        + [
            "min_conc",
            "dist_pos_eq",
            "dist_bnd_eq",
            "entropy",
            "dissipation",
            "omega_measure",
        ]
    )


def _trajectory_rows(traj: Trajectory):
    for s in traj.samples:
        yield (
            [s.t]
            + list(s.masses)
            + [s.min_conc, s.dist_pos, s.dist_bnd, s.entropy, s.dissipation, s.omega_measure]
        )


def _states_header(system: ReactionSystem, n: int) -> list:
    return ["t"] + [f"{z}{i}" for z in "abc" for i in range(n)]


def _read_states_csv(path) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read states CSV {path}: {exc}") from exc
    return data


def _mass_drift(traj: Trajectory) -> float:
    drift = 0.0
    for i, m0 in enumerate(traj.masses0.values):
        col = np.array([s.masses[i] for s in traj.samples])
        scale = abs(m0) if m0 != 0 else 1.0
        drift = max(drift, float(np.max(np.abs(col - m0)) / scale))
    return drift


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    for key in ("t_end", "dt_init", "dt_min", "record_every", "n_cells", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val

    system = _parse_system(_require(cfg, "system"))
    mesh = Mesh(int(_require(cfg, "n_cells")))
    d = [float(v) for v in _require(cfg, "diffusion")]
    params = Params(*d)
    seed = int(cfg.get("seed", 0))
    initial = _build_initial(cfg, system, mesh, seed)
    solver_cfg = SolverConfig(
        params=params,
        scheme=_parse_scheme(cfg.get("scheme", "backward_euler")),
        dt_init=cfg.get("dt_init"),
        dt_min=cfg.get("dt_min"),
        t_end=float(_require(cfg, "t_end")),
        record_every=int(cfg.get("record_every", 10)),
    )
    outputs = _require(cfg, "outputs")
    summary_path = _require(outputs, "summary_json")

    try:
        traj = simulate(initial, mesh, solver_cfg)
    except (PositivityFailure, LinearSolveFailure) as exc:
        _write_json(
            summary_path,
            {"error": type(exc).__name__, "message": str(exc), "t": getattr(exc, "t", None)},
        )
        return EXIT_SOLVER

    _write_csv(
        _require(outputs, "trajectory_csv"),
        _trajectory_header(system),
        _trajectory_rows(traj),
    )
    if "states_csv" in outputs:
        n = mesh.n_cells
        rows = (
            [st.t] + list(st.a) + list(st.b) + list(st.c) for st in traj.states
        )
        _write_csv(outputs["states_csv"], _states_header(system, n), rows)

    k_emp = max(float(max(st.a.max(), st.b.max(), st.c.max())) for st in traj.states)
    fitted = None
    series = traj.column("entropy")
    if not np.all(np.isfinite(series)):
        series = traj.column("dist_bnd") ** 2
    try:
        fit = fit_decay_rate(traj.times, series)
        fitted = {
            "C": fit.C,
            "alpha": fit.alpha,
            "residual": fit.residual,
            "window": list(fit.window),
        }
    except InsufficientData:
        pass
    try:
        cert = rate_certificate(system, params, traj.masses0, traj.equilibria.regime, k_emp)
        cert_dict = {k: v for k, v in asdict(cert).items() if v is not None and k != "regime"}
        cert_dict["regime"] = cert.regime.value
    except (RegimeMismatch, ValueError):
        cert_dict = None

    last = traj.samples[-1]
    _write_json(
        summary_path,
        {
            "system": system.value,
            "n_cells": mesh.n_cells,
            "diffusion": d,
            "scheme": solver_cfg.scheme.value,
            "seed": seed,
            "masses": _masses_dict(traj.masses0),
            "regime": traj.equilibria.regime.value,
            "equilibria": {
                "positive": list(traj.equilibria.positive) if traj.equilibria.positive else None,
                "boundary": [list(b) for b in traj.equilibria.boundary],
            },
            "fitted": fitted,
            "fitted_alpha": fitted["alpha"] if fitted else None,
            "rate_certificate": cert_dict,
            "k_emp": k_emp,
            "mass_drift": _mass_drift(traj),
            "final": {
                "t": last.t,
                "dist_pos_eq": last.dist_pos,
                "dist_bnd_eq": last.dist_bnd,
                "min_conc": last.min_conc,
                "entropy": last.entropy,
            },
        },
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# entropy: recompute functionals from stored states


def cmd_entropy(args) -> int:
    system = _parse_system(args.system)
    data = _read_states_csv(args.states)
    if (data.shape[1] - 1) % 3 != 0:
        raise ConfigError("states CSV must hold three fields per record")
    n = (data.shape[1] - 1) // 3
    mesh = Mesh(n)
    params = Params(args.d1, args.d2, args.d3)

    def state_of(row) -> State:
        return State(system, row[1 : n + 1], row[n + 1 : 2 * n + 1], row[2 * n + 1 :], row[0])

    first = state_of(data[0])
    masses0 = compute_masses(first, mesh)
    eqs = classify_equilibria(system, masses0)
    thr = omega_threshold(system, masses0, eqs)
    rows = []
    for row in data:
        s = diagnostics_sample(state_of(row), mesh, params, eqs, thr)
        rows.append(
            [s.t]
            + list(s.masses)
            + [s.min_conc, s.dist_pos, s.dist_bnd, s.entropy, s.dissipation, s.omega_measure]
        )
    _write_csv(args.out, _trajectory_header(system), rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# spectrum


def cmd_spectrum(args) -> int:
    system = _parse_system(args.system)
    if system is ReactionSystem.P1:
        if args.m1 is None or args.m2 is None:
            raise ConfigError("p1 needs --m1 and --m2")
        masses = Masses.p1(args.m1, args.m2)
    else:
        if args.mass is None:
            raise ConfigError("p2 needs --mass")
        masses = Masses.p2(args.mass)
    params = Params(args.d1, args.d2, args.d3)
    eqs = classify_equilibria(system, masses)
    if not eqs.boundary:
        raise RegimeMismatch(f"no boundary equilibrium for masses {masses.values}")
    boundary = eqs.boundary[0]
    mesh = Mesh(args.n_cells) if args.n_cells else None
    rows = mode_spectra(system, params, boundary, args.n_modes, mesh)
    rate, mode = max_growth_rate(system, params, masses, boundary, args.n_modes, mesh)
    _write_csv(
        args.out,
        ["k", "laplacian_eigenvalue", "eig1", "eig2", "eig3"],
        ([r.mode_index, r.laplacian_eigenvalue, *r.operator_eigenvalues] for r in rows),
    )
    print(
        json.dumps(
            {
                "max_rate": rate,
                "attaining_mode": mode,
                "boundary": list(boundary),
                "n_modes": args.n_modes,
                "discrete": bool(args.n_cells),
            },
            indent=2,
            sort_keys=True,
        )
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# instability


def _parse_perturbation(blob, delta: float) -> PerturbationSpec:
    if not blob:
        return PerturbationSpec.uniform_depleted(delta)
    kind = blob.get("kind", "uniform_depleted")
    if kind == "uniform_depleted":
        return PerturbationSpec.uniform_depleted(delta)
    if kind == "mode":
        return PerturbationSpec.mode(delta, blob.get("k", 0), blob.get("weights", (0, 1, 0)))
    if kind == "csv":
        data = _read_states_csv(blob["path"])
        n = (data.shape[1] - 1) // 3
        row = data[0]
        return PerturbationSpec.from_fields(
            delta, [row[1 : n + 1], row[n + 1 : 2 * n + 1], row[2 * n + 1 :]]
        )
    raise ConfigError(f"unknown perturbation kind {kind!r}")


def cmd_instability(args) -> int:
    cfg = _load_config(args.config)
    for key in ("delta", "t_max", "seed", "n_cells"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val

    system = _parse_system(_require(cfg, "system"))
    mesh = Mesh(int(_require(cfg, "n_cells")))
    params = Params(*[float(v) for v in _require(cfg, "diffusion")])
    masses = _parse_masses(system, _require(cfg, "masses"))
    eqs = classify_equilibria(system, masses)
    boundary = tuple(cfg["boundary"]) if "boundary" in cfg else (
        eqs.boundary[0] if eqs.boundary else None
    )
    outputs = _require(cfg, "outputs")
    report_path = _require(outputs, "report_json")
    seed = int(cfg.get("seed", 0))
    delta = float(_require(cfg, "delta"))
    spec = _parse_perturbation(cfg.get("perturbation"), delta)
    solver_cfg = SolverConfig(
        params=params,
        scheme=_parse_scheme(cfg.get("scheme", "backward_euler")),
        dt_init=cfg.get("dt_init"),
        dt_min=cfg.get("dt_min"),
        t_end=1.0,
        record_every=int(cfg.get("record_every", 20)),
    )

    try:
        if boundary is None:
            raise RegimeMismatch(f"no boundary equilibrium for masses {masses.values}")
        report = run_instability(
            system,
            params,
            masses,
            boundary,
            spec,
            t_max=float(_require(cfg, "t_max")),
            mesh=mesh,
            config=solver_cfg,
            tau=cfg.get("tau"),
        )
        if "deviation" in cfg:
            dev = cfg["deviation"]
            dev_cfg = replace(
                solver_cfg,
                dt_init=dev.get("dt_init", solver_cfg.dt_init),
                record_every=int(dev.get("record_every", solver_cfg.record_every)),
            )
            report.deviation_scaling_exponent = deviation_scaling(
                system,
                params,
                masses,
                boundary,
                spec,
                [float(v) for v in _require(dev, "deltas")],
                float(_require(dev, "t_probe")),
                mesh=mesh,
                config=dev_cfg,
                tau=cfg.get("tau"),
            )
    except (RateNonPositive, RegimeMismatch) as exc:
        _write_json(report_path, {"error": type(exc).__name__, "message": str(exc)})
        return EXIT_REGIME
    except (PositivityFailure, LinearSolveFailure, ProbeAfterEscape) as exc:
        _write_json(
            report_path,
            {"error": type(exc).__name__, "message": str(exc), "t": getattr(exc, "t", None)},
        )
        return EXIT_SOLVER

    if "samples_csv" in outputs:
        _write_csv(
            outputs["samples_csv"],
            [
                "t",
                "y_norm",
                "y_norm_high",
                "dev_avg",
                "dist_eq",
                "min_conc",
                "nonlinear_norm",
                "ratio_energy",
                "ratio_nonlinear",
            ],
            (
                [
                    s.t,
                    s.y_low,
                    s.y_high,
                    s.dev_avg,
                    s.dist_eq,
                    s.min_conc,
                    s.nonlinear_norm,
                    s.ratio_energy,
                    s.ratio_nonlinear,
                ]
                for s in report.samples
            ),
        )
    fitted = None
    if report.fitted_rate is not None:
        fitted = {
            "C": report.fitted_rate.C,
            "alpha": report.fitted_rate.alpha,
            "residual": report.fitted_rate.residual,
            "window": list(report.fitted_rate.window),
        }
    _write_json(
        report_path,
        {
            "system": system.value,
            "n_cells": mesh.n_cells,
            "diffusion": list(params.diffusion),
            "seed": seed,
            "masses": _masses_dict(masses),
            "boundary_eq": list(report.boundary_eq),
            "delta": report.delta,
            "tau": report.tau,
            "rate_linear": report.rate_linear,
            "fitted": fitted,
            "growth_rate_fitted": report.growth_rate_fitted,
            "c_l_emp": report.c_l_emp,
            "escape_time_empirical": report.escape_time_empirical,
            "escape_time_theoretical": report.escape_time_theoretical,
            "deviation_scaling_exponent": report.deviation_scaling_exponent,
            "empirical_constants": report.empirical_constants,
        },
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


_SWEEP_KEYS = ("m1", "m2", "mass", "delta", "d1", "d2", "d3")


def _apply_grid_point(template: dict, command: str, point: dict) -> dict:
    cfg = json.loads(json.dumps(template))  # deep copy
    for key, value in point.items():
        if key in ("d1", "d2", "d3"):
            idx = int(key[1]) - 1
            d = list(cfg.get("diffusion", [1.0, 1.0, 1.0]))
            d[idx] = value
            cfg["diffusion"] = d
        elif key in ("m1", "m2", "mass"):
            if command != "instability":
                raise ConfigError(f"grid key {key!r} only applies to instability sweeps")
            cfg.setdefault("masses", {})[key] = value
        elif key == "delta":
            if command != "instability":
                raise ConfigError("grid key 'delta' only applies to instability sweeps")
            cfg["delta"] = value
        else:
            raise ConfigError(f"unsupported grid key {key!r}; supported: {_SWEEP_KEYS}")
    return cfg


def _sweep_cell(payload) -> tuple:
    idx, command, cfg, cell_dir = payload
    cell = Path(cell_dir)
    cfg = dict(cfg)
    outputs = {"summary_json" if command == "simulate" else "report_json": str(cell / "summary.json")}
    if command == "simulate":
        outputs["trajectory_csv"] = str(cell / "trajectory.csv")
        outputs["states_csv"] = str(cell / "states.csv")
    else:
        outputs["samples_csv"] = str(cell / "samples.csv")
    cfg["outputs"] = outputs
    cfg_path = cell / "config.json"
    _write_json(cfg_path, cfg)
    ns = argparse.Namespace(config=str(cfg_path))
    try:
        code = cmd_simulate(ns) if command == "simulate" else cmd_instability(ns)
        error = ""
    except ConfigError as exc:
        code, error = EXIT_CONFIG, str(exc)
    except Exception as exc:  # pragma: no cover - defensive
        code, error = EXIT_SOLVER, f"{type(exc).__name__}: {exc}"
    summary = None
    summary_path = cell / "summary.json"
    if summary_path.exists():
        with open(summary_path) as f:
            summary = json.load(f)
        if "error" in summary:
            error = error or summary.get("error", "")
    return idx, code, error, summary


_INDEX_FIELDS = {
    "simulate": ["fitted_alpha", "mass_drift"],
    "instability": [
        "growth_rate_fitted",
        "escape_time_empirical",
        "escape_time_theoretical",
        "deviation_scaling_exponent",
    ],
}


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    command = _require(cfg, "command")
    if command not in ("simulate", "instability"):
        raise ConfigError("sweep command must be 'simulate' or 'instability'")
    template = _require(cfg, "template")
    grid = _require(cfg, "grid")
    if not grid:
        raise ConfigError("grid must not be empty")
    out_dir = Path(_require(cfg, "out_dir"))
    out_dir.mkdir(parents=True, exist_ok=True)

    keys = list(grid.keys())
    value_lists = [grid[k] for k in keys]
    points = [{}]
    for k, vals in zip(keys, value_lists):
        points = [dict(p, **{k: v}) for p in points for v in vals]

    payloads = []
    for i, point in enumerate(points):
        cell_dir = out_dir / f"cell_{i:03d}"
        cell_dir.mkdir(parents=True, exist_ok=True)
        cell_cfg = _apply_grid_point(template, command, point)
        payloads.append((i, command, cell_cfg, str(cell_dir)))

    workers = cfg.get("max_workers") or min(len(payloads), 8)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_cell, payloads))
    else:
        results = [_sweep_cell(p) for p in payloads]

    fields = _INDEX_FIELDS[command]
    header = ["cell"] + keys + ["exit_code", "error"] + fields
    rows = []
    successes = 0
    for (idx, code, error, summary), point in zip(results, points):
        if code == EXIT_OK:
            successes += 1
        row = [f"cell_{idx:03d}"] + [point[k] for k in keys] + [code, error]
        for field in fields:
            val = summary.get(field) if summary and "error" not in summary else None
            row.append(math.nan if val is None else val)
        rows.append(row)
    _write_csv(out_dir / "index.csv", header, rows)
    print(json.dumps({"cells": len(points), "successes": successes, "out_dir": str(out_dir)}))
    return EXIT_OK if successes >= 1 else EXIT_SOLVER


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rdlab",
        description="Irreversible reaction-diffusion networks: simulation and stability lab",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="equilibria admissible for given masses")
    p.add_argument("--system", required=True)
    p.add_argument("--m1", type=float)
    p.add_argument("--m2", type=float)
    p.add_argument("--mass", type=float)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", help="run a config; write trajectory CSV + summary JSON")
    p.add_argument("--config", required=True)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--dt-init", dest="dt_init", type=float)
    p.add_argument("--dt-min", dest="dt_min", type=float)
    p.add_argument("--record-every", dest="record_every", type=int)
    p.add_argument("--n-cells", dest="n_cells", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("entropy", help="recompute functionals from a stored states CSV")
    p.add_argument("--states", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--d1", type=float, default=1.0)
    p.add_argument("--d2", type=float, default=1.0)
    p.add_argument("--d3", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("spectrum", help="per-mode eigenvalues and max growth rate")
    p.add_argument("--system", required=True)
    p.add_argument("--m1", type=float)
    p.add_argument("--m2", type=float)
    p.add_argument("--mass", type=float)
    p.add_argument("--d1", type=float, default=1.0)
    p.add_argument("--d2", type=float, default=1.0)
    p.add_argument("--d3", type=float, default=1.0)
    p.add_argument("--n-modes", dest="n_modes", type=int, default=8)
    p.add_argument("--n-cells", dest="n_cells", type=int, help="use the discrete stencil eigenvalues")
    p.add_argument("--out", default="spectrum.csv")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("instability", help="bootstrap-instability experiment from a config")
    p.add_argument("--config", required=True)
    p.add_argument("--delta", type=float)
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--n-cells", dest="n_cells", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_instability)

    p = sub.add_parser("sweep", help="grid of runs with an index.csv of results")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RegimeMismatch as exc:
        print(f"regime mismatch: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (PositivityFailure, LinearSolveFailure) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
