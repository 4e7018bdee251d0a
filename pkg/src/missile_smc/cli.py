"""Command-line entry point.

Exit codes: 0 success, 2 invalid input (bad file, bad key, bad value),
3 simulation abort or output I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .aero import (PerturbationProfile, TableFormatError, default_mach_knots,
                   synthesize_truth_tables, table_divergence, write_tables)
from .harness.compare import compare_reaching_laws
from .harness.export import (ExportError, export_comparison_csv, export_metrics_csv,
                             export_trajectory_csv, trajectory_from_csv)
from .harness.metrics import Metrics, compute_metrics
from .harness.scenario import (Scenario, ScenarioError, apply_overrides, build_scenario,
                               load_scenario_file, parse_sections)
from .harness.simulation import run_simulation
from .smc import ReachingLaw

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILURE = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _fail(message: str, code: int) -> CliError:
    return CliError(message, code)


def _load(args: argparse.Namespace) -> Scenario:
    overrides = list(args.set or [])
    if getattr(args, "seed", None) is not None:
        overrides.append(f"scenario.seed={args.seed}")
    if getattr(args, "dt", None) is not None:
        overrides.append(f"scenario.dt={args.dt}")
    try:
        if args.scenario is None:
            return build_scenario(apply_overrides(parse_sections(""), overrides))
        path = Path(args.scenario)
        if not path.is_file():
            raise _fail(f"scenario file not found: {path}", EXIT_INVALID)
        return load_scenario_file(path, overrides)
    except ScenarioError as exc:
        where = args.scenario or "<defaults>"
        raise _fail(f"{where}: {exc}", EXIT_INVALID) from None


def _output_dir(args: argparse.Namespace) -> Path:
    out = Path(args.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise _fail(f"cannot create output directory {out}: {exc.strerror}", EXIT_FAILURE) from None
    return out


def _fmt(x: float, scale: float = 1.0, unit: str = "") -> str:
    if math.isnan(x):
        return "n/a"
    if math.isinf(x):
        return "never"
    return f"{x * scale:.3f}{unit}"


def format_summary(metrics: Metrics) -> str:
    lines = [f"{'edge t [s]':>10} {'from':>7} {'to':>7} {'settle':>8} {'overshoot':>10} "
             f"{'sse':>8} {'tau':>7} {'reach':>7}"]
    for e in metrics.edges:
        lines.append(
            f"{e.edge_time:>10.3f} {math.degrees(e.alpha_from):>6.1f}d {math.degrees(e.alpha_to):>6.1f}d "
            f"{_fmt(e.settling_time, unit='s'):>8} {_fmt(e.overshoot_fraction, 100, '%'):>10} "
            f"{_fmt(e.steady_state_error_fraction, 100, '%'):>8} {_fmt(e.time_constant, unit='s'):>7} "
            f"{_fmt(e.reaching_time, unit='s'):>7}"
        )
    lines.append(f"chattering_tv = {metrics.chattering_tv:.4f} rad/s, "
                 f"saturation = {metrics.actuator_saturation_fraction * 100:.2f}%, "
                 f"burnout Mach = {_fmt(metrics.extras.get('burnout_mach', math.nan))}")
    return "\n".join(lines)


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load(args)
    out = _output_dir(args)
    traj = run_simulation(scenario)
    metrics = compute_metrics(traj, scenario)
    try:
        tpath = export_trajectory_csv(traj, out / f"{args.prefix}trajectory.csv")
        mpath = export_metrics_csv(metrics, out / f"{args.prefix}metrics.csv")
    except ExportError as exc:
        raise _fail(str(exc), EXIT_FAILURE) from None
    print(f"law = {scenario.controller.reaching_law.value}, seed = {scenario.seed}, "
          f"noise = {'on' if scenario.noise_enabled else 'off'}")
    print(format_summary(metrics))
    print(f"wrote {tpath} and {mpath}")
    if traj.abort_reason is not None:
        print(f"simulation aborted: {traj.abort_reason}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def _parse_laws(text: str) -> list[ReachingLaw]:
    laws: list[ReachingLaw] = []
    for item in text.split(","):
        name = item.strip().lower()
        if not name:
            continue
        try:
            law = ReachingLaw(name)
        except ValueError:
            names = ", ".join(l.value for l in ReachingLaw)
            raise _fail(f"unknown reaching law {name!r} (expected one of {names})", EXIT_INVALID) from None
        if law in laws:
            print(f"warning: duplicate law {law.value!r} ignored", file=sys.stderr)
            continue
        laws.append(law)
    if len(laws) < 2:
        raise _fail("compare needs at least two distinct laws", EXIT_INVALID)
    return laws


def cmd_compare(args: argparse.Namespace) -> int:
    laws = _parse_laws(args.laws)
    scenario = _load(args)
    out = _output_dir(args)
    table = compare_reaching_laws(scenario, laws, workers=args.workers)
    try:
        path = export_comparison_csv(table, out / f"{args.prefix}comparison.csv")
    except ExportError as exc:
        raise _fail(str(exc), EXIT_FAILURE) from None
    print(f"{'law':>9} {'tv [rad/s]':>11} {'worst settle':>13} {'max overshoot':>14} {'max sse':>9}")
    for law, m in table.rows:
        settle = max(e.settling_time for e in m.edges) if m.edges else math.nan
        over = max(e.overshoot_fraction for e in m.edges) if m.edges else math.nan
        sse = max(e.steady_state_error_fraction for e in m.edges) if m.edges else math.nan
        print(f"{law.value:>9} {m.chattering_tv:>11.4f} {_fmt(settle, unit='s'):>13} "
              f"{_fmt(over, 100, '%'):>14} {_fmt(sse, 100, '%'):>9}")
    order = table.chattering_order()
    print("chattering order (least first): " + " < ".join(l.value for l in order))
    print(f"wrote {path}")
    aborted = [law.value for law, m in table.rows if m.extras.get("abort_reason")]
    if aborted:
        print(f"simulation aborted for: {', '.join(aborted)}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_gen_tables(args: argparse.Namespace) -> int:
    scenario = _load(args)
    geometry = scenario.geometry
    try:
        if args.zero:
            profile = PerturbationProfile.zero()
        else:
            t = scenario.truth
            profile = PerturbationProfile(
                t.cl_alpha_amplitude if args.cl_amplitude is None else args.cl_amplitude,
                t.cp_shift_amplitude if args.cp_shift is None else args.cp_shift,
                t.jitter if args.jitter is None else args.jitter,
            )
        station = scenario.truth.reference_station if args.reference_station is None else args.reference_station
        seed = scenario.truth.seed if args.table_seed is None else args.table_seed
        tables = synthesize_truth_tables(geometry, profile, seed=seed, reference_station=station,
                                         mach_knots=default_mach_knots())
    except (ValueError, TableFormatError) as exc:
        raise _fail(str(exc), EXIT_INVALID) from None
    path = Path(args.output)
    try:
        write_tables(tables, path)
    except OSError as exc:
        raise _fail(f"cannot write {path}: {exc.strerror or exc}", EXIT_FAILURE) from None
    div = table_divergence(tables, geometry)
    lo = geometry.supersonic_onset
    trans = table_divergence(tables, geometry, band=(0.85, max(lo, 0.86)))
    print(f"knots = {len(tables.mach_knots)}")
    print(f"max divergence: cl_alpha = {div['cl_alpha']:.3e}, cm_alpha = {div['cm_alpha']:.3e}")
    print(f"transonic max divergence: cm_alpha = {trans['cm_alpha']:.3e}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    scenario = _load(args)
    c = scenario.controller
    print(f"ok: duration {scenario.duration} s, dt {scenario.dt} s, {len(scenario.command_schedule)} edges, "
          f"law {c.reaching_law.value} (c={c.c}, eta={c.eta}, eta1={c.eta1}, a={c.exponent_a}, ki={c.ki})")
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace) -> int:
    scenario = _load(args)
    path = Path(args.trajectory)
    if not path.is_file():
        raise _fail(f"trajectory file not found: {path}", EXIT_INVALID)
    try:
        traj = trajectory_from_csv(path)
    except ValueError as exc:
        raise _fail(str(exc), EXIT_INVALID) from None
    lim = scenario.actuator.deflection_limit
    d = traj["delta"]
    traj.saturation_fraction = float(np.mean(np.abs(d) >= lim - 1e-12)) if len(d) else 0.0
    metrics = compute_metrics(traj, scenario)
    print(format_summary(metrics))
    print("(chattering from the sampled canard history)")
    if args.output:
        try:
            p = export_metrics_csv(metrics, args.output)
        except ExportError as exc:
            raise _fail(str(exc), EXIT_FAILURE) from None
        print(f"wrote {p}")
    return EXIT_OK


def _common(p: argparse.ArgumentParser, scenario_required: bool = False) -> None:
    if scenario_required:
        p.add_argument("scenario", help="scenario file")
    else:
        p.add_argument("scenario", nargs="?", default=None,
                       help="scenario file (omit to use the built-in defaults)")
    p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                   help="override one scenario field; may be repeated")
    p.add_argument("--seed", type=int, help="shorthand for --set scenario.seed=N")
    p.add_argument("--dt", type=float, help="shorthand for --set scenario.dt=X")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="missile-smc",
        description="Sliding-mode angle-of-attack autopilot simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("run", help="simulate one scenario and write trajectory and metrics CSV")
    _common(p)
    p.add_argument("--output-dir", default=".", help="directory for the CSV files (default: .)")
    p.add_argument("--prefix", default="", help="prefix for output file names")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="run the same scenario under several reaching laws")
    _common(p)
    p.add_argument("--laws", default="st_exp,tanh,power,sgn",
                   help="comma-separated laws (default: st_exp,tanh,power,sgn)")
    p.add_argument("--workers", type=int, default=1, help="parallel processes (default: 1)")
    p.add_argument("--output-dir", default=".", help="directory for comparison.csv (default: .)")
    p.add_argument("--prefix", default="", help="prefix for output file names")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen-tables", help="write synthetic truth tables")
    _common(p)
    p.add_argument("-o", "--output", required=True, help="table file to write")
    p.add_argument("--zero", action="store_true", help="no perturbation: truth equals design")
    p.add_argument("--table-seed", type=int, help="jitter seed (default: truth.seed)")
    p.add_argument("--cl-amplitude", type=float, help="peak relative lift-slope offset")
    p.add_argument("--cp-shift", type=float, help="peak centre-of-pressure shift, fraction of length")
    p.add_argument("--jitter", type=float, help="relative per-knot jitter")
    p.add_argument("--reference-station", type=float, help="moment reference, fraction of length")
    p.set_defaults(func=cmd_gen_tables)

    p = sub.add_parser("check", help="validate a scenario without simulating")
    _common(p, scenario_required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("metrics", help="recompute metrics from an exported trajectory CSV")
    p.add_argument("trajectory", help="trajectory CSV written by 'run'")
    p.add_argument("--scenario", default=None, help="scenario the trajectory came from")
    p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    p.add_argument("-o", "--output", default=None, help="metrics CSV to write")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
