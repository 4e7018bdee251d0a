"""Closed-loop simulation: sensors -> filter -> controller -> actuator -> plant.

The coupled state integrated by RK4 is::

    [u, w, q, theta, altitude, downrange, delta, delta_rate,
     alpha_f, alpha_f_rate, qbar_f, qbar_f_rate]

Sensors sample the truth at ``sensors.sample_rate`` and hold their output;
the controller runs every ``controller_every`` integration steps and its
canard command is held across the step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..aero import (AeroTables, design_cl, read_tables,
                    synthesize_truth_tables)
from ..atmosphere import GAMMA_AIR, MAX_ALTITUDE_M, R_AIR, temperature_pressure
from ..plant import SimulationAbort, actuator_clamp, sensor_sample
from ..propulsion import Propulsion
from ..smc import SlidingModeController
from .scenario import Scenario

TRAJECTORY_FIELDS: tuple[tuple[str, str], ...] = (
    ("time", "s"),
    ("alpha", "rad"),
    ("alpha_cmd", "rad"),
    ("s", "rad/s"),
    ("delta", "rad"),
    ("delta_cmd", "rad"),
    ("speed", "m/s"),
    ("mach", "1"),
    ("qbar", "Pa"),
    ("mass", "kg"),
    ("cog", "fraction of length"),
    ("lyapunov", "rad^2/s^2"),
    ("m_alpha_correction", "N m/rad"),
    ("altitude", "m"),
)


@dataclass
class Trajectory:
    """Uniformly sampled closed-loop history plus full-resolution run statistics."""

    columns: dict[str, np.ndarray]
    dt_sample: float
    abort_reason: str | None = None
    delta_total_variation: float = 0.0  # sum |d delta| over every integration step
    simulated_time: float = 0.0
    saturation_fraction: float = 0.0
    max_delta_rate: float = 0.0
    mach_clamp_count: int = 0
    authority_floor_steps: int = 0
    integrator_resets: int = 0
    info: dict = field(default_factory=dict)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def __len__(self) -> int:
        return len(self.columns["time"])

    @classmethod
    def empty(cls) -> Trajectory:
        return cls({name: np.empty(0) for name, _ in TRAJECTORY_FIELDS}, 0.0)


def resolve_tables(scenario: Scenario) -> AeroTables:
    truth = scenario.truth
    if truth.source in ("default", "zero"):
        return synthesize_truth_tables(scenario.geometry, truth.profile(), seed=truth.seed,
                                       reference_station=truth.reference_station)
    return read_tables(Path(truth.source))


def _design_table(geometry, mach_max: float = 6.0, step: float = 0.001):
    """Dense samples of ``design_cl`` for fast linear lookup inside the loop."""
    n = int(mach_max / step) + 1
    return [design_cl(geometry, i * step) for i in range(n)], step


def run_simulation(scenario: Scenario, tables: AeroTables | None = None,
                   observer_enabled: bool = True) -> Trajectory:
    """Integrate the closed loop for ``scenario.duration`` seconds.

    A plant abort (non-finite state, ``u <= 0``, altitude out of range)
    ends the run early; the partial trajectory carries ``abort_reason``.
    """
    tables = resolve_tables(scenario) if tables is None else tables
    geo = scenario.geometry
    act = scenario.actuator
    sen = scenario.sensors
    air = scenario.airframe
    prop = Propulsion(scenario.propulsion)
    pcfg = scenario.propulsion
    atm = scenario.atmosphere
    ccfg = scenario.controller
    controller = SlidingModeController(ccfg, i_yy=pcfg.pitch_inertia,
                                       observer_enabled=observer_enabled)
    rng = np.random.default_rng(scenario.seed) if scenario.noise_enabled else None

    dt = scenario.dt
    n_steps = int(round(scenario.duration / dt))
    decim = scenario.output_decimation
    ctrl_every = scenario.controller_every
    sample_period = 1.0 / sen.sample_rate

    # constants pulled out of the hot loop
    s_ref = geo.reference_area
    length = geo.reference_length
    canard_frac = geo.canard_fraction
    arm_a = geo.canard_area * geo.canard_arm - geo.tail_area * geo.tail_arm
    arm_d = geo.canard_area * geo.canard_arm
    cd_area = air.drag_coefficient * air.drag_area
    grav = air.gravity
    i_yy = pcfg.pitch_inertia
    wn = act.natural_frequency
    zeta = act.damping
    lim = act.deflection_limit
    omega_f = 2.0 * math.pi * sen.filter_cutoff
    zeta_f = sen.filter_damping
    t_sl = atm.sea_level_temperature_k
    h_layer = atm.layer_boundary_m
    ref_station = tables.reference_station
    interp = tables.interpolate
    m0 = pcfg.initial_mass
    m_fuel = pcfg.fuel_mass
    m_b = pcfg.burnout_mass
    x_body = pcfg.body_cog_fraction
    x_prop = pcfg.propellant_cog_fraction
    thrust_fn = prop.thrust
    burnt_fn = prop.burnt_fraction
    cl_grid, cl_step = _design_table(geo)
    cl_last = len(cl_grid) - 2
    clamp_counter = [0]

    def atmos(h: float, t: float, y) -> tuple[float, float, float]:
        if not 0.0 <= h <= MAX_ALTITUDE_M:
            raise SimulationAbort(f"altitude {h:.1f} m outside atmosphere range", t, y)
        temp, p_kpa = temperature_pressure(h, t_sl, h_layer)
        return p_kpa * 1000.0 / (R_AIR * temp), math.sqrt(GAMMA_AIR * R_AIR * temp), p_kpa * 1000.0

    def design_cl_fast(mach: float) -> float:
        x = mach / cl_step
        i = int(x)
        if i > cl_last:
            i = cl_last
        f = x - i
        return cl_grid[i] + f * (cl_grid[i + 1] - cl_grid[i])

    def mass_props(t: float) -> tuple[float, float, float]:
        m = m0 - m_fuel * burnt_fn(t)
        return m, (x_body * m_b + x_prop * (m - m_b)) / m, thrust_fn(t)

    def deriv(t, y, delta_cmd, alpha_meas, qbar_meas):
        u, w, q, th, h, _x, d, dr, af, afr, pf, pfr = y
        m, cog, thrust = mass_props(t)
        rho, a_snd, _p = atmos(h, t, y)
        v2 = u * u + w * w
        v = math.sqrt(v2)
        qbar = 0.5 * rho * v2
        alpha = math.atan2(w, u)
        cl, cm_ref, cm_q, cm_d, clamped = interp(v / a_snd)
        if clamped:
            clamp_counter[0] += 1
        shift = cog - ref_station
        cm_a = cm_ref + cl * shift
        cm_dd = cm_d + cl * canard_frac * shift
        lift = qbar * cl * alpha * s_ref
        drag = qbar * cd_area
        ca = math.cos(alpha)
        sa = math.sin(alpha)
        ct = math.cos(th)
        st = math.sin(th)
        mg = m * grav
        fx = thrust - drag * ca + lift * sa - mg * st
        fz = -lift * ca - drag * sa + mg * ct
        qsl = qbar * s_ref * length
        moment = qsl * (cm_a * alpha + cm_q * length / (2.0 * v) * q + cm_dd * d)
        # actuator with limits folded into the flow
        acc = wn * wn * (delta_cmd - d) - 2.0 * zeta * wn * dr
        if dr > wn:
            dr = wn
        elif dr < -wn:
            dr = -wn
        if (d >= lim and dr > 0.0) or (d <= -lim and dr < 0.0):
            dr = 0.0
        if (dr >= wn and acc > 0.0) or (dr <= -wn and acc < 0.0):
            acc = 0.0
        if (d >= lim and acc > 0.0) or (d <= -lim and acc < 0.0):
            acc = 0.0
        return (
            -q * w + fx / m,
            q * u + fz / m,
            moment / i_yy,
            q,
            u * st - w * ct,
            u * ct + w * st,
            dr,
            acc,
            afr,
            omega_f * omega_f * (alpha_meas - af) - 2.0 * zeta_f * omega_f * afr,
            pfr,
            omega_f * omega_f * (qbar_meas - pf) - 2.0 * zeta_f * omega_f * pfr,
        )

    # initial state: trimmed level flight, filters settled on the first reading
    h0 = scenario.launch_altitude
    v0 = scenario.launch_speed
    rho0, _a0, _p0 = atmos(h0, 0.0, ())
    qbar0 = 0.5 * rho0 * v0 * v0
    y = [v0, 0.0, 0.0, 0.0, h0, 0.0, 0.0, 0.0, 0.0, 0.0, qbar0, 0.0]

    n_rec = n_steps // decim + 1
    rec = {name: np.zeros(n_rec) for name, _ in TRAJECTORY_FIELDS}
    cols = [rec[name] for name, _ in TRAJECTORY_FIELDS]

    schedule = scenario.command_schedule
    edge_idx = -1
    alpha_cmd = 0.0
    next_sample = 0
    alpha_meas, qbar_meas = 0.0, qbar0
    delta_cmd = 0.0
    tv = 0.0
    sat_steps = 0
    max_rate = 0.0
    abort_reason = None
    floor_steps = 0
    n_rec_done = 0
    k = 0
    h2 = 0.5 * dt
    h6 = dt / 6.0
    cst = controller.state

    try:
        for k in range(n_steps + 1):
            t = k * dt
            u, w = y[0], y[1]
            # sensors (zero-order hold)
            if k >= next_sample * sample_period / dt - 1e-9:
                rho, a_snd, p_static = atmos(y[4], t, y)
                v = math.sqrt(u * u + w * w)
                alpha_meas, qbar_meas = sensor_sample(math.atan2(w, u), 0.5 * rho * v * v, sen, rng)
                next_sample += 1
            # command schedule
            while edge_idx + 1 < len(schedule) and schedule[edge_idx + 1][0] <= t + 1e-12:
                edge_idx += 1
                alpha_cmd = schedule[edge_idx][1]
                if ccfg.reaching_law.super_twisting:
                    controller.reset_integrator()
            # controller
            if k % ctrl_every == 0:
                af, afr, pf = y[8], y[9], y[10]
                _rho, _a, p_static = atmos(y[4], t, y)
                qf = pf if pf > 0.0 else 0.0
                mach_est = math.sqrt(2.0 * qf / (GAMMA_AIR * p_static))
                cl_d = design_cl_fast(mach_est)
                m_alpha_d = qf * cl_d * arm_a
                m_delta_d = qf * cl_d * arm_d
                raw = controller.step(alpha_cmd, 0.0, 0.0, af, afr, m_alpha_d, m_delta_d,
                                      dt * ctrl_every)
                if controller.authority_floor:
                    floor_steps += 1
                delta_cmd = lim if raw > lim else (-lim if raw < -lim else raw)
            # record
            if k % decim == 0:
                rho, a_snd, _p = atmos(y[4], t, y)
                v = math.sqrt(u * u + w * w)
                m, cog, _thr = mass_props(t)
                s_val = cst.last_s
                i = n_rec_done
                cols[0][i] = t
                cols[1][i] = math.atan2(w, u)
                cols[2][i] = alpha_cmd
                cols[3][i] = s_val
                cols[4][i] = y[6]
                cols[5][i] = delta_cmd
                cols[6][i] = v
                cols[7][i] = v / a_snd
                cols[8][i] = 0.5 * rho * v * v
                cols[9][i] = m
                cols[10][i] = cog
                cols[11][i] = 0.5 * s_val * s_val
                cols[12][i] = cst.m_alpha_correction
                cols[13][i] = y[4]
                n_rec_done += 1
            if k == n_steps:
                break
            # RK4 over the coupled state
            k1 = deriv(t, y, delta_cmd, alpha_meas, qbar_meas)
            y2 = [a + h2 * b for a, b in zip(y, k1)]
            k2 = deriv(t + h2, y2, delta_cmd, alpha_meas, qbar_meas)
            y3 = [a + h2 * b for a, b in zip(y, k2)]
            k3 = deriv(t + h2, y3, delta_cmd, alpha_meas, qbar_meas)
            y4 = [a + dt * b for a, b in zip(y, k3)]
            k4 = deriv(t + dt, y4, delta_cmd, alpha_meas, qbar_meas)
            d_old = y[6]
            y = [a + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
                 for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]
            y[6], y[7] = actuator_clamp(y[6], y[7], act)
            for val in y:
                if not math.isfinite(val):
                    raise SimulationAbort("non-finite state", t + dt, y)
            if y[0] <= 0.0:
                raise SimulationAbort("forward velocity u <= 0", t + dt, y)
            step_tv = abs(y[6] - d_old)
            tv += step_tv
            if step_tv / dt > max_rate:
                max_rate = step_tv / dt
            if abs(y[6]) >= lim - 1e-12:
                sat_steps += 1
    except SimulationAbort as exc:
        abort_reason = str(exc)

    columns = {name: rec[name][:n_rec_done].copy() for name, _ in TRAJECTORY_FIELDS}
    steps_done = k if abort_reason is not None else n_steps
    return Trajectory(
        columns=columns,
        dt_sample=dt * decim,
        abort_reason=abort_reason,
        delta_total_variation=tv,
        simulated_time=steps_done * dt,
        saturation_fraction=sat_steps / max(steps_done, 1),
        max_delta_rate=max_rate,
        mach_clamp_count=clamp_counter[0],
        authority_floor_steps=floor_steps,
        integrator_resets=cst.integrator_resets,
        info={"burnout_mach": _burnout_mach(columns, pcfg.burn_time)},
    )


def _burnout_mach(columns: dict[str, np.ndarray], burn_time: float) -> float:
    t = columns["time"]
    if len(t) == 0 or t[-1] < burn_time:
        return float("nan")
    return float(np.interp(burn_time, t, columns["mach"]))
