"""Step-response and chattering metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .scenario import Scenario

SETTLING_BAND = 0.05
S_BAND = 0.01
STEADY_STATE_FRACTION = 0.2
MIN_STEADY_SAMPLES = 5


@dataclass(frozen=True)
class EdgeMetrics:
    """Metrics for one command edge. ``nan`` marks a metric the data cannot support."""

    edge_time: float
    alpha_from: float
    alpha_to: float
    settling_time: float
    overshoot_fraction: float
    steady_state_error_fraction: float
    time_constant: float
    reaching_time: float

    @property
    def step(self) -> float:
        return self.alpha_to - self.alpha_from


@dataclass(frozen=True)
class Metrics:
    edges: tuple[EdgeMetrics, ...]
    chattering_tv: float  # rad/s
    actuator_saturation_fraction: float
    reaching_time: float  # worst edge
    extras: dict = field(default_factory=dict)


def _first_crossing(t: np.ndarray, x: np.ndarray, level: float) -> float:
    """Linearly interpolated first time ``x`` reaches ``level`` (x rising); nan if never."""
    idx = np.nonzero(x >= level)[0]
    if len(idx) == 0:
        return math.nan
    i = int(idx[0])
    if i == 0:
        return float(t[0])
    x0, x1 = x[i - 1], x[i]
    frac = (level - x0) / (x1 - x0) if x1 != x0 else 0.0
    return float(t[i - 1] + frac * (t[i] - t[i - 1]))


def edge_metrics(t: np.ndarray, alpha: np.ndarray, s: np.ndarray | None, edge_time: float,
                 alpha_from: float, alpha_to: float, window_end: float,
                 settle_band: float = SETTLING_BAND, s_band: float = S_BAND) -> EdgeMetrics:
    """Metrics of the response to a step from ``alpha_from`` to ``alpha_to`` at ``edge_time``.

    Only samples in ``[edge_time, window_end]`` are considered. Progress is
    measured from the previous command level, so a perfect response has
    zero overshoot, settling time, steady-state error and time constant.
    """
    mask = (t >= edge_time - 1e-12) & (t <= window_end + 1e-12)
    tw = t[mask] - edge_time
    aw = alpha[mask]
    step = alpha_to - alpha_from
    nan = math.nan
    if len(tw) < 2 or step == 0.0:
        return EdgeMetrics(edge_time, alpha_from, alpha_to, nan, nan, nan, nan, nan)

    progress = (aw - alpha_from) / step
    err = aw - alpha_to

    overshoot = max(float(np.max(err / step)), 0.0)

    outside = np.nonzero(np.abs(err) > settle_band * abs(step))[0]
    if len(outside) == 0:
        settling = 0.0
    elif outside[-1] == len(tw) - 1:
        settling = math.inf
    else:
        settling = float(tw[outside[-1] + 1])

    tau = _first_crossing(tw, progress, 1.0 - math.exp(-1.0))

    n_ss = int(math.floor(STEADY_STATE_FRACTION * len(tw)))
    if n_ss < MIN_STEADY_SAMPLES:
        sse = nan
    else:
        ref = abs(alpha_to) if alpha_to != 0.0 else abs(step)
        sse = float(np.mean(np.abs(err[-n_ss:]))) / ref

    reach = nan
    if s is not None:
        sw = s[mask]
        # s is continuous, so a sign change between samples also passes through the band
        inside = np.abs(sw) < s_band
        inside[1:] |= sw[1:] * sw[:-1] < 0.0
        hits = np.nonzero(inside)[0]
        reach = float(tw[hits[0]]) if len(hits) else math.inf

    return EdgeMetrics(edge_time, alpha_from, alpha_to, settling, overshoot, sse, tau, reach)


def compute_metrics(trajectory, scenario: Scenario, settle_band: float = SETTLING_BAND,
                    s_band: float = S_BAND) -> Metrics:
    """Per-edge step metrics plus whole-run chattering and saturation figures.

    ``chattering_tv`` uses the full-resolution canard total variation
    accumulated by the simulator, divided by the simulated time.
    """
    t = trajectory["time"]
    alpha = trajectory["alpha"]
    s = trajectory["s"]
    schedule = scenario.command_schedule
    end = float(t[-1]) if len(t) else 0.0
    edges = []
    prev = 0.0
    for i, (te, a_cmd) in enumerate(schedule):
        window_end = schedule[i + 1][0] if i + 1 < len(schedule) else scenario.duration
        if te <= end:
            edges.append(edge_metrics(t, alpha, s, te, prev, a_cmd, min(window_end, end),
                                      settle_band, s_band))
        prev = a_cmd
    sim_time = trajectory.simulated_time
    tv = trajectory.delta_total_variation / sim_time if sim_time > 0 else math.nan
    reach = [e.reaching_time for e in edges if not math.isnan(e.reaching_time)]
    return Metrics(
        edges=tuple(edges),
        chattering_tv=tv,
        actuator_saturation_fraction=trajectory.saturation_fraction,
        reaching_time=max(reach) if reach else math.nan,
        extras={"max_delta_rate": trajectory.max_delta_rate,
                "burnout_mach": trajectory.info.get("burnout_mach", math.nan),
                "abort_reason": trajectory.abort_reason},
    )


def chattering_tv_from_samples(delta: np.ndarray, duration: float) -> float:
    """``sum |d delta| / duration`` over a sampled canard history."""
    if len(delta) < 2 or duration <= 0.0:
        return 0.0
    return float(np.sum(np.abs(np.diff(delta)))) / duration
