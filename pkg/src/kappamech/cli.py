"""Command-line interface.

Subcommands
-----------
simulate     integrate a configured system, writing CSV/JSON trajectories,
             a conservation summary, plot-data and figures
verify       run property suites (brackets, structure, independence,
             flat-limits, all) over the whole catalog
catalog      list every family with parameters, native chart and integrals
closure      closed-orbit detection for a list of frequency ratios
limit-sweep  trajectory deviation from the flat run over a curvature ladder

Exit codes: 0 success, 1 configuration error, 2 domain-boundary abort,
3 conservation drift above the configured threshold.

The environment variable KAPPA_MECH_LOG={error,info,debug} sets verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import charts, dynamics, verify
from .catalog import format_catalog
from .config import RunConfig, load_config
from .errors import ConfigError, KappaMechError
from .systems import SystemSpec, parse_gamma

log = logging.getLogger("kappamech")

_COLUMNS = {
    "ambient": ("x0", "x1", "x2", "pi0", "pi1", "pi2"),
    "parallel": ("x", "y", "px", "py"),
    "polar": ("r", "phi", "pr", "pphi"),
    "beltrami": ("q1", "q2", "p1", "p2"),
}

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BOUNDARY = 2
EXIT_DRIFT = 3


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _json_dump(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def write_trajectory_csv(traj: dynamics.Trajectory, path: Path) -> None:
    """Fixed column order: t, coordinates, momenta, H, integrals as declared."""
    states = traj.states
    if traj.chart == "mixed":
        states = [charts.to_ambient(s) for s in states]
    chart = states[0].chart
    names = [k for k in traj.conserved if k != "H"]
    header = ("t",) + _COLUMNS[chart] + ("H",) + tuple(names)
    lines = [",".join(header)]
    for i, state in enumerate(states):
        row = [_fmt(traj.times[i])]
        row += [_fmt(v) for v in state.coords]
        row += [_fmt(v) for v in state.momenta]
        row.append(_fmt(traj.conserved["H"][i]))
        row += [_fmt(traj.conserved[k][i]) for k in names]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def trajectory_to_dict(traj: dynamics.Trajectory) -> dict:
    out = {
        "metadata": traj.metadata,
        "times": [float(t) for t in traj.times],
        "states": [charts.state_to_dict(s) for s in traj.states],
        "conserved": {k: [float(v) for v in vals] for k, vals in traj.conserved.items()},
    }
    if traj.boundary_event is not None:
        out["boundary_event"] = {
            "time": traj.boundary_event.time,
            "state": charts.state_to_dict(traj.boundary_event.state),
            "reason": traj.boundary_event.reason,
        }
    return out


def _run_simulation(cfg: RunConfig):
    t_eval = None
    if cfg.outputs.sample_dt:
        n = int(math.floor(cfg.t_end / cfg.outputs.sample_dt))
        t_eval = [cfg.outputs.sample_dt * i for i in range(1, n + 1)]
    return dynamics.integrate(
        cfg.system, cfg.initial_state, cfg.t_end, cfg.integrator, cfg.integrals, t_eval,
        seed=cfg.seed,
    )


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.out:
        cfg.outputs.directory = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    if args.format:
        cfg.outputs.formats = (args.format,)
    if args.no_plot:
        cfg.outputs.plots = False

    out_dir = Path(cfg.outputs.directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        traj = _run_simulation(cfg)
    except KappaMechError as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if "csv" in cfg.outputs.formats:
        write_trajectory_csv(traj, out_dir / "trajectory.csv")
    if "json" in cfg.outputs.formats:
        _json_dump(trajectory_to_dict(traj), out_dir / "trajectory.json")

    drifts = {name: traj.drift(name) for name in traj.conserved}
    phase0 = np.array(list(traj.states[0].coords) + list(traj.states[0].momenta))
    final_state = traj.states[-1]
    summary = {
        "seed": cfg.seed,
        "t_final": float(traj.times[-1]),
        "final_state": charts.state_to_dict(final_state),
        "drift": drifts,
        "drift_threshold": cfg.drift_threshold,
        "boundary_event": None if traj.boundary_event is None else traj.boundary_event.reason,
    }
    if final_state.chart == traj.states[0].chart:
        phase1 = np.array(list(final_state.coords) + list(final_state.momenta))
        summary["final_distance_to_start"] = float(np.max(np.abs(phase1 - phase0)))
    _json_dump(summary, out_dir / "summary.json")

    from . import plotting

    _json_dump(plotting.plot_data(traj), out_dir / "plotdata.json")
    if cfg.outputs.plots:
        plotting.save_trajectory_figure(traj, out_dir / "trajectory.png")
        plotting.save_conservation_figure(traj, out_dir / "conservation.png")

    if traj.boundary_event is not None:
        print(f"domain boundary at t={traj.boundary_event.time:.6g}: {traj.boundary_event.reason}")
        return EXIT_BOUNDARY
    worst = max(drifts.values())
    if worst > cfg.drift_threshold:
        print(f"conservation drift {worst:.3e} above threshold {cfg.drift_threshold:.3e}")
        return EXIT_DRIFT
    log.info("simulation complete: %d steps to t=%g", len(traj.times) - 1, traj.times[-1])
    return EXIT_OK


def cmd_verify(args) -> int:
    kappas = [float(k) for k in args.kappa] or None
    report = verify.run_suite(args.suite, n=args.n, seed=args.seed, kappas=kappas)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"verify_{args.suite}.json").write_text(text, encoding="utf-8")
    _print_verify_table(report)
    return EXIT_OK if report["all_pass"] else EXIT_CONFIG


def _print_verify_table(report: dict) -> None:
    for suite, rows in report["results"].items():
        print(f"[{suite}]")
        for row in rows:
            verdict = "pass" if row["pass"] else "FAIL"
            extra = ""
            if "max_abs" in row:
                extra = f"max_abs={row['max_abs']:.3e}"
            elif "decade_ratios" in row:
                extra = "ratios=" + ",".join(f"{r:.2f}" for r in row["decade_ratios"])
            elif "rank3_fraction" in row:
                extra = f"rank3={row['rank3_fraction']:.2f} rank4_max={row['rank4_max']}"
            n = row.get("n", "-")
            print(f"  {row['pair']:<46} n={n:<5} {extra:<24} {verdict}")
    print("all_pass:", report["all_pass"])


def cmd_catalog(_args) -> int:
    print(format_catalog(), end="")
    return EXIT_OK


def cmd_closure(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.system.family != "aniso_oscillator":
        print("closure scans expect an aniso_oscillator base config", file=sys.stderr)
        return EXIT_CONFIG
    rows = []
    for raw in args.gamma:
        try:
            gamma = parse_gamma(raw)
        except (ValueError, ZeroDivisionError) as exc:
            print(f"bad gamma {raw!r}: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        system = SystemSpec(
            "aniso_oscillator", kappa=cfg.system.kappa, omega=cfg.system.omega, gamma=gamma
        )
        rational = system.is_rational_gamma
        if rational:
            t_end = args.horizon_periods * 2.0 * math.pi * system.gamma.denominator / system.omega
        else:
            t_end = 200.0 / system.omega
        t_eval = np.linspace(0.0, t_end, max(int(t_end * args.samples_per_time), 100))[1:]
        traj = dynamics.integrate(
            system, cfg.initial_state, t_end, cfg.integrator, (), t_eval
        )
        report = dynamics.closure_detect(traj, args.tol)
        rows.append(
            {
                "gamma": str(raw),
                "rational": rational,
                "closed": report.closed,
                "period": report.period,
                "min_distance": report.min_distance,
            }
        )
        period = f"{report.period:.8g}" if report.period else "-"
        print(
            f"gamma={raw!s:<10} rational={str(rational):<5} closed={str(report.closed):<5} "
            f"period={period} min_distance={report.min_distance:.3e}"
        )
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        _json_dump(rows, out_dir / "closure.json")
    return EXIT_OK


def cmd_limit_sweep(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    kappas = [float(k) for k in args.kappa] or [1e-2, 1e-3, 1e-4]
    try:
        result = dynamics.flat_limit_sweep(
            cfg.system, cfg.initial_state, kappas, cfg.t_end, cfg.integrator
        )
    except KappaMechError as exc:
        print(f"sweep failed: {exc}", file=sys.stderr)
        return EXIT_BOUNDARY
    for row in result.table():
        print(f"kappa={row['kappa']:<12g} sup_deviation={row['sup_deviation']:.6e}")
    print("monotone:", result.monotone)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        _json_dump({"table": result.table(), "monotone": result.monotone}, out_dir / "sweep.json")
        from . import plotting

        plotting.save_sweep_figure(result.kappas, result.deviations, out_dir / "sweep.png")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kappa-mech",
        description="integrable Hamiltonian systems on constant-curvature surfaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a configured system")
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--out", help="output directory (overrides config)")
    p.add_argument("--seed", type=int, default=None, help="override config seed")
    p.add_argument("--format", choices=("csv", "json"), help="restrict output format")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run catalog property suites")
    p.add_argument("suite", choices=verify.SUITES)
    p.add_argument("--n", type=int, default=200, help="states per check")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--kappa", action="append", default=[], help="structure-suite curvature (repeatable)")
    p.add_argument("--out", help="directory for the JSON report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="list the Hamiltonian families")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("closure", help="closed-orbit detection for frequency ratios")
    p.add_argument("--config", required=True, help="base oscillator config")
    p.add_argument("--gamma", action="append", required=True, help="ratio 'm/n' or decimal (repeatable)")
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--horizon-periods", type=float, default=1.3)
    p.add_argument("--samples-per-time", type=float, default=250.0)
    p.add_argument("--out", help="directory for the closure table")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("limit-sweep", help="trajectory flat-limit convergence")
    p.add_argument("--config", required=True)
    p.add_argument("--kappa", action="append", default=[], help="curvature value (repeatable)")
    p.add_argument("--out", help="directory for table and figure")
    p.set_defaults(func=cmd_limit_sweep)

    return parser


def main(argv=None) -> int:
    level = os.environ.get("KAPPA_MECH_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KappaMechError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
