"""CSV export of trajectories, metrics and law comparisons.

Every file starts with one header row of ``name [unit]`` cells. Numbers are
written as ``%.9e`` (scientific notation, nine digits after the point) so a
re-import reproduces each value to better than 1e-9 relative, and repeated
runs produce identical bytes.
"""

from __future__ import annotations

import csv
import math
import re
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .metrics import EdgeMetrics, Metrics
from .simulation import TRAJECTORY_FIELDS, Trajectory

NUMBER_FORMAT = "{:.9e}"

METRIC_FIELDS: tuple[tuple[str, str], ...] = (
    ("row", "-"),
    ("edge_time", "s"),
    ("alpha_from", "rad"),
    ("alpha_to", "rad"),
    ("settling_time", "s"),
    ("overshoot_fraction", "1"),
    ("steady_state_error_fraction", "1"),
    ("time_constant", "s"),
    ("reaching_time", "s"),
    ("chattering_tv", "rad/s"),
    ("actuator_saturation_fraction", "1"),
)

_HEADER_CELL = re.compile(r"^(?P<name>[^\[\]]+?)\s*\[(?P<unit>[^\]]*)\]$")


class ExportError(OSError):
    """I/O failure while writing or reading a CSV file; the message names the path."""


def format_number(x: float) -> str:
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return NUMBER_FORMAT.format(x)


def _header(fields: Sequence[tuple[str, str]]) -> list[str]:
    return [f"{name} [{unit}]" for name, unit in fields]


def _write_rows(path: Union[str, Path], header: list[str], rows: Iterable[Sequence]) -> Path:
    p = Path(path)
    try:
        with p.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_number(v) for v in row])
    except OSError as exc:
        raise ExportError(f"cannot write {p}: {exc.strerror or exc}") from None
    return p


def export_trajectory_csv(trajectory: Trajectory, path: Union[str, Path]) -> Path:
    """One record per sample; an empty trajectory gives a header-only file."""
    names = [name for name, _ in TRAJECTORY_FIELDS]
    cols = [trajectory[name] for name in names]
    n = len(cols[0]) if cols else 0
    return _write_rows(path, _header(TRAJECTORY_FIELDS),
                       ([c[i] for c in cols] for i in range(n)))


def _edge_row(e: EdgeMetrics) -> list:
    return ["edge", e.edge_time, e.alpha_from, e.alpha_to, e.settling_time,
            e.overshoot_fraction, e.steady_state_error_fraction, e.time_constant,
            e.reaching_time, math.nan, math.nan]


def _run_row(m: Metrics) -> list:
    nan = math.nan
    return ["run", nan, nan, nan, nan, nan, nan, nan, m.reaching_time, m.chattering_tv,
            m.actuator_saturation_fraction]


def metrics_rows(metrics: Metrics) -> list[list]:
    return [_edge_row(e) for e in metrics.edges] + [_run_row(metrics)]


def export_metrics_csv(metrics: Metrics, path: Union[str, Path]) -> Path:
    """One row per step edge plus a final whole-run row (``row`` column = edge | run)."""
    return _write_rows(path, _header(METRIC_FIELDS), metrics_rows(metrics))


def export_csv(obj: Union[Trajectory, Metrics], path: Union[str, Path]) -> Path:
    """Write a trajectory or a metrics object, whichever is given."""
    if isinstance(obj, Trajectory):
        return export_trajectory_csv(obj, path)
    if isinstance(obj, Metrics):
        return export_metrics_csv(obj, path)
    raise TypeError(f"cannot export {type(obj).__name__}")


def export_comparison_csv(comparison, path: Union[str, Path]) -> Path:
    """Metrics rows of every law, prefixed by a ``law`` column."""
    header = ["law [-]"] + _header(METRIC_FIELDS)
    rows = []
    for law, metrics in comparison.rows:
        for r in metrics_rows(metrics):
            rows.append([law.value] + r)
    return _write_rows(path, header, rows)


def parse_header(cells: Sequence[str]) -> list[tuple[str, str]]:
    out = []
    for i, cell in enumerate(cells):
        m = _HEADER_CELL.match(cell.strip())
        if not m:
            raise ValueError(f"header cell {i} {cell!r} is not of the form 'name [unit]'")
        out.append((m.group("name"), m.group("unit")))
    return out


def read_csv(path: Union[str, Path]) -> dict[str, np.ndarray]:
    """Read a file written by this module into ``{name: column}``.

    Numeric columns become float arrays, anything else (``row``, ``law``)
    stays an array of strings.
    """
    p = Path(path)
    try:
        with p.open(newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ExportError(f"cannot read {p}: {exc.strerror or exc}") from None
    if not rows:
        raise ValueError(f"{p}: empty file, expected a header row")
    fields = parse_header(rows[0])
    body = rows[1:]
    out: dict[str, np.ndarray] = {}
    for j, (name, _unit) in enumerate(fields):
        raw = [r[j] for r in body]
        try:
            out[name] = np.array([float(v) for v in raw], dtype=float)
        except ValueError:
            out[name] = np.array(raw, dtype=object)
    return out


def trajectory_from_csv(path: Union[str, Path]) -> Trajectory:
    """Rebuild a :class:`Trajectory` (sampled columns only) from its CSV export."""
    cols = read_csv(path)
    missing = [name for name, _ in TRAJECTORY_FIELDS if name not in cols]
    if missing:
        raise ValueError(f"{path}: missing trajectory columns {', '.join(missing)}")
    t = cols["time"]
    dt = float(t[1] - t[0]) if len(t) > 1 else 0.0
    traj = Trajectory({name: cols[name] for name, _ in TRAJECTORY_FIELDS}, dt)
    d = cols["delta"]
    traj.delta_total_variation = float(np.sum(np.abs(np.diff(d)))) if len(d) > 1 else 0.0
    traj.simulated_time = float(t[-1] - t[0]) if len(t) > 1 else 0.0
    return traj
