"""Truth-model plant: longitudinal rigid body, canard actuator, sensors and filter.

Body axes follow the usual flight-mechanics convention (x forward, z down),
so a positive normal velocity ``w`` means a positive angle of attack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .aero import AeroTables, WingGeometry, truth_coefficients
from .atmosphere import AtmoSample
from .propulsion import MassState

GRAVITY = 9.81


class SimulationAbort(RuntimeError):
    """Raised when the integrated state becomes invalid; carries a state dump."""

    def __init__(self, reason: str, time: float = float("nan"), state: Sequence[float] = ()):
        self.reason = reason
        self.time = time
        self.state = tuple(state)
        dump = ", ".join(f"{v:.6g}" for v in self.state)
        super().__init__(f"{reason} at t={time:.6f} s; state=[{dump}]")


@dataclass(frozen=True)
class PlantState:
    u: float = 250.0  # m/s
    w: float = 0.0  # m/s
    q: float = 0.0  # rad/s
    theta: float = 0.0  # rad
    altitude: float = 1000.0  # m
    downrange: float = 0.0  # m
    actuator_pos: float = 0.0  # rad
    actuator_rate: float = 0.0  # rad/s
    time: float = 0.0  # s

    @property
    def alpha(self) -> float:
        return math.atan2(self.w, self.u)

    @property
    def speed(self) -> float:
        return math.hypot(self.u, self.w)

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))


@dataclass(frozen=True)
class AirframeConfig:
    """Pitch-irrelevant airframe constants: zero-lift drag and gravity."""

    drag_coefficient: float = 0.4
    drag_area: float = 0.008  # m^2
    gravity: float = GRAVITY


@dataclass(frozen=True)
class ActuatorConfig:
    natural_frequency: float = 500.0  # rad/s, also the rate limit
    damping: float = 0.7
    deflection_limit: float = 0.3  # rad

    def __post_init__(self) -> None:
        if not self.natural_frequency > 0.0:
            raise ValueError("actuator.natural_frequency must be positive")
        if not 0.0 < self.damping <= 2.0:
            raise ValueError("actuator.damping must lie in (0, 2]")
        if not self.deflection_limit > 0.0:
            raise ValueError("actuator.deflection_limit must be positive")


@dataclass(frozen=True)
class SensorConfig:
    aoa_noise_half_width: float = math.radians(2.0)  # rad
    dyn_pressure_noise_fraction: float = 0.10
    sample_rate: float = 200.0  # Hz
    filter_cutoff: float = 100.0  # Hz
    filter_damping: float = 1.0
    noise_domain: str = "dynamic_pressure"  # or "velocity"

    def __post_init__(self) -> None:
        if self.aoa_noise_half_width < 0.0 or self.dyn_pressure_noise_fraction < 0.0:
            raise ValueError("sensors: noise widths must be non-negative")
        if not self.sample_rate > 0.0:
            raise ValueError("sensors.sample_rate must be positive")
        if not self.filter_cutoff > 0.0:
            raise ValueError("sensors.filter_cutoff must be positive")
        if not self.filter_damping > 0.0:
            raise ValueError("sensors.filter_damping must be positive")
        if self.noise_domain not in ("dynamic_pressure", "velocity"):
            raise ValueError("sensors.noise_domain must be 'dynamic_pressure' or 'velocity'")


# ---------------------------------------------------------------- rigid body


def body_rates(u: float, w: float, q: float, theta: float, mass: float, thrust: float,
               qbar: float, cl_alpha: float, cm_alpha: float, cm_q: float, cm_delta: float,
               delta: float, geometry: WingGeometry, airframe: AirframeConfig,
               i_yy: float) -> tuple[float, float, float, float, float, float]:
    """Time derivatives of ``(u, w, q, theta, altitude, downrange)``."""
    alpha = math.atan2(w, u)
    v = math.sqrt(u * u + w * w)
    s_ref = geometry.reference_area
    length = geometry.reference_length
    lift = qbar * cl_alpha * alpha * s_ref
    drag = qbar * airframe.drag_coefficient * airframe.drag_area
    ca = math.cos(alpha)
    sa = math.sin(alpha)
    ct = math.cos(theta)
    st = math.sin(theta)
    mg = mass * airframe.gravity
    fx = thrust - drag * ca + lift * sa - mg * st
    fz = -lift * ca - drag * sa + mg * ct
    qsl = qbar * s_ref * length
    m_q = qsl * cm_q * length / (2.0 * v) if v > 0.0 else 0.0
    moment = qsl * cm_alpha * alpha + m_q * q + qsl * cm_delta * delta
    return (
        -q * w + fx / mass,
        q * u + fz / mass,
        moment / i_yy,
        q,
        u * st - w * ct,
        u * ct + w * st,
    )


def state_derivative(state: PlantState, mass_state: MassState, tables: AeroTables,
                     atmo: AtmoSample, geometry: WingGeometry,
                     airframe: AirframeConfig = AirframeConfig(), i_yy: float = 1.0,
                     thrust: float | None = None) -> PlantState:
    """Rigid-body derivative of ``state`` as a :class:`PlantState` of rates.

    The actuator channels carry ``d(actuator_pos)/dt = actuator_rate`` and a
    zero rate derivative (the actuator is driven by its command, see
    :func:`actuator_derivative`); ``time`` carries 1.
    """
    thrust = mass_state.thrust if thrust is None else thrust
    v = state.speed
    qbar = 0.5 * atmo.density * v * v
    mach = v / atmo.speed_of_sound
    coeffs = truth_coefficients(tables, mach, mass_state.cog_fraction, geometry.canard_fraction)
    du, dw, dq, dth, dh, dx = body_rates(
        state.u, state.w, state.q, state.theta, mass_state.mass, thrust, qbar,
        coeffs.cl_alpha, coeffs.cm_alpha, coeffs.cm_q, coeffs.cm_delta, state.actuator_pos,
        geometry, airframe, i_yy,
    )
    rates = (du, dw, dq, dth, dh, dx)
    if not all(math.isfinite(r) for r in rates):
        raise SimulationAbort("non-finite state derivative", state.time, state.as_tuple())
    return PlantState(du, dw, dq, dth, dh, dx, state.actuator_rate, 0.0, 1.0)


# ---------------------------------------------------------------- actuator


class ActuatorState(NamedTuple):
    position: float
    rate: float


def actuator_derivative(position: float, rate: float, command: float,
                        config: ActuatorConfig) -> tuple[float, float]:
    """Second-order servo with rate and position limits folded into the flow."""
    wn = config.natural_frequency
    lim = config.deflection_limit
    acc = wn * wn * (command - position) - 2.0 * config.damping * wn * rate
    if rate > wn:
        rate = wn
    elif rate < -wn:
        rate = -wn
    if (position >= lim and rate > 0.0) or (position <= -lim and rate < 0.0):
        rate = 0.0
    if (rate >= wn and acc > 0.0) or (rate <= -wn and acc < 0.0):
        acc = 0.0
    if (position >= lim and acc > 0.0) or (position <= -lim and acc < 0.0):
        acc = 0.0
    return rate, acc


def actuator_clamp(position: float, rate: float, config: ActuatorConfig) -> tuple[float, float]:
    wn = config.natural_frequency
    lim = config.deflection_limit
    if rate > wn:
        rate = wn
    elif rate < -wn:
        rate = -wn
    if position >= lim:
        position = lim
        if rate > 0.0:
            rate = 0.0
    elif position <= -lim:
        position = -lim
        if rate < 0.0:
            rate = 0.0
    return position, rate


def actuator_step(state: ActuatorState | tuple[float, float], command: float, dt: float,
                  config: ActuatorConfig = ActuatorConfig()) -> ActuatorState:
    """Advance the servo one RK4 step with a held command, then enforce the limits."""
    if not dt > 0.0:
        raise ValueError("dt must be positive")

    def f(_t: float, y: list[float]) -> list[float]:
        return list(actuator_derivative(y[0], y[1], command, config))

    y = rk4_step(f, 0.0, [float(state[0]), float(state[1])], dt)
    return ActuatorState(*actuator_clamp(y[0], y[1], config))


# ---------------------------------------------------------------- sensors


def sensor_sample(alpha: float, qbar: float, config: SensorConfig,
                  rng: np.random.Generator | None) -> tuple[float, float]:
    """One raw measurement of angle of attack and dynamic pressure.

    Noise is uniform: ``alpha + U(-w, w)`` and either ``qbar * (1 + U(-f, f))``
    or, in the velocity domain, ``qbar * (1 + U(-f, f))**2``.
    """
    w = config.aoa_noise_half_width
    f = config.dyn_pressure_noise_fraction
    if rng is None or (w == 0.0 and f == 0.0):
        return alpha, qbar
    na, nq = rng.uniform(-1.0, 1.0, size=2)
    alpha_m = alpha + w * float(na)
    scale = 1.0 + f * float(nq)
    if config.noise_domain == "velocity":
        scale *= scale
    return alpha_m, qbar * scale


class FilterState(NamedTuple):
    alpha: float
    alpha_rate: float
    qbar: float
    qbar_rate: float


@dataclass(frozen=True)
class SensedState:
    alpha_measured: float
    alpha_filtered: float
    alpha_rate_filtered: float
    dyn_pressure_measured: float
    dyn_pressure_filtered: float


def filter_derivative(x: float, xdot: float, target: float, omega: float,
                      damping: float) -> tuple[float, float]:
    return xdot, omega * omega * (target - x) - 2.0 * damping * omega * xdot


def sensor_filter_step(state: FilterState, alpha_measured: float, qbar_measured: float,
                       dt: float, config: SensorConfig = SensorConfig()) -> FilterState:
    """Advance both second-order low-pass channels one RK4 step with held inputs."""
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    omega = 2.0 * math.pi * config.filter_cutoff
    z = config.filter_damping

    def f(_t: float, y: list[float]) -> list[float]:
        a, ad = filter_derivative(y[0], y[1], alpha_measured, omega, z)
        p, pd = filter_derivative(y[2], y[3], qbar_measured, omega, z)
        return [a, ad, p, pd]

    return FilterState(*rk4_step(f, 0.0, list(state), dt))


def sensed(state: FilterState, alpha_measured: float, qbar_measured: float) -> SensedState:
    return SensedState(alpha_measured, state.alpha, state.alpha_rate, qbar_measured, state.qbar)


# ---------------------------------------------------------------- integrator


def rk4_step(f: Callable[[float, list[float]], Sequence[float]], t: float,
             y: Sequence[float], dt: float) -> list[float]:
    """Classical fourth-order Runge-Kutta step for ``y' = f(t, y)``.

    Raises :class:`SimulationAbort` if the result contains NaN or Inf.
    """
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    h2 = 0.5 * dt
    k1 = f(t, list(y))
    k2 = f(t + h2, [a + h2 * b for a, b in zip(y, k1)])
    k3 = f(t + h2, [a + h2 * b for a, b in zip(y, k2)])
    k4 = f(t + dt, [a + dt * b for a, b in zip(y, k3)])
    h6 = dt / 6.0
    out = [a + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]
    for v in out:
        if not math.isfinite(v):
            raise SimulationAbort("non-finite value after RK4 step", t + dt, out)
    return out
