"""Sliding-mode angle-of-attack control.

The controller inverts the design-model pitch dynamics

    alpha'' = (M_alpha / I_yy) alpha + (M_delta / I_yy) delta + d

on the surface ``s = e' + c e`` with ``e = alpha_cmd - alpha``. Closing the
loop with :func:`auxiliary_control` gives ``s' = -u_r - d``, so every
reaching law below drives ``s`` toward zero whenever it dominates ``d``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np


class ReachingLaw(str, enum.Enum):
    SGN = "sgn"
    TANH = "tanh"
    POWER = "power"
    ST_POWER = "st_power"
    ST_EXP = "st_exp"

    @property
    def super_twisting(self) -> bool:
        return self in (ReachingLaw.ST_POWER, ReachingLaw.ST_EXP)

    @property
    def default_exponent(self) -> float:
        return 1.2 if self is ReachingLaw.ST_EXP else 0.5


@dataclass(frozen=True)
class ControllerConfig:
    c: float = 20.0
    eta: float = 100.0
    eta1: float = 1000.0
    exponent_a: Optional[float] = None  # None -> law default (1.2 for st_exp, 0.5 otherwise)
    ki: float = 50.0
    reaching_law: ReachingLaw = ReachingLaw.ST_EXP
    tanh_boundary: float = 0.5
    observer_clamp_fraction: float = 0.5
    m_delta_floor: float = 1e-3

    def __post_init__(self) -> None:
        object.__setattr__(self, "reaching_law", ReachingLaw(self.reaching_law))
        if self.exponent_a is None:
            object.__setattr__(self, "exponent_a", self.reaching_law.default_exponent)
        if not self.c > 0.0:
            raise ValueError("controller.c must be positive")
        if not self.eta > 0.0:
            raise ValueError("controller.eta must be positive")
        if not self.eta1 >= 0.0:
            raise ValueError("controller.eta1 must be non-negative")
        if not self.tanh_boundary > 0.0:
            raise ValueError("controller.tanh_boundary must be positive")
        if not self.observer_clamp_fraction >= 0.0:
            raise ValueError("controller.observer_clamp_fraction must be non-negative")
        if not self.m_delta_floor > 0.0:
            raise ValueError("controller.m_delta_floor must be positive")
        a = self.exponent_a
        law = self.reaching_law
        if law in (ReachingLaw.POWER, ReachingLaw.ST_POWER) and not 0.0 < a < 1.0:
            raise ValueError(f"controller.exponent_a must lie in (0, 1) for {law.value}, got {a}")
        if law is ReachingLaw.ST_EXP and not a > 1.0:
            raise ValueError(f"controller.exponent_a must exceed 1 for st_exp, got {a}")

    def with_law(self, law: ReachingLaw | str) -> ControllerConfig:
        """Same gains under another law, with the exponent reset to that law's default."""
        return replace(self, reaching_law=ReachingLaw(law), exponent_a=None)


@dataclass
class ControllerState:
    b: float = 0.0
    m_alpha_correction: float = 0.0
    last_s: float = 0.0
    authority_floor_hits: int = 0
    integrator_resets: int = 0


def sgn(x: float) -> float:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


def sliding_surface(e: float, e_dot: float, c: float) -> float:
    return e_dot + c * e


def reaching_term(s: float, config: ControllerConfig, state: ControllerState | None = None,
                  dt: float = 0.0) -> float:
    """Reaching-law output ``u_r`` for surface value ``s``.

    For the super-twisting laws the integral state ``state.b`` is added to the
    output and then advanced by explicit Euler, ``b += eta1 * sgn(s) * dt``.
    """
    law = config.reaching_law
    eta = config.eta
    if law is ReachingLaw.SGN:
        return eta * sgn(s)
    if law is ReachingLaw.TANH:
        return eta * math.tanh(s / config.tanh_boundary)
    u = eta * abs(s) ** config.exponent_a * sgn(s)
    if law is ReachingLaw.POWER:
        return u
    if state is None:
        return u
    u += state.b
    state.b += config.eta1 * sgn(s) * dt
    return u


def auxiliary_control(e_dot: float, alpha_cmd_ddot: float, c: float, u_r: float) -> float:
    """Desired angular acceleration ``v = c e' + alpha_cmd'' + u_r``."""
    return c * e_dot + alpha_cmd_ddot + u_r


def control_deflection(v: float, alpha: float, m_alpha_est: float, m_delta_est: float,
                       i_yy: float, m_delta_floor: float = 1e-3) -> float:
    """Canard command that realises ``v`` on the design model.

    Returns 0 when ``|m_delta_est|`` is below ``m_delta_floor`` (no control
    authority, e.g. near-zero dynamic pressure).
    """
    if abs(m_delta_est) < m_delta_floor:
        return 0.0
    return (i_yy * v - m_alpha_est * alpha) / m_delta_est


def observer_update(state: ControllerState, s: float, ki: float, dt: float,
                    clamp: float = math.inf, regressor: float = 1.0) -> float:
    """Integrate the ``M_alpha`` correction: ``+= ki * s * regressor * dt``, clamped.

    The closed loop passes ``regressor = -alpha``, which makes the update the
    gradient step of ``s**2 / 2 + error**2 / (2 ki)``.
    """
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    x = state.m_alpha_correction + ki * s * regressor * dt
    bound = abs(clamp)
    if x > bound:
        x = bound
    elif x < -bound:
        x = -bound
    state.m_alpha_correction = x
    return x


def lyapunov_value(s: float) -> float:
    return 0.5 * s * s


def stability_margin(eta: float, d_max: float) -> float:
    """``eta - d_max``; non-negative certifies decrease of ``s**2/2`` for the sgn law."""
    if d_max < 0.0:
        raise ValueError("d_max must be non-negative")
    return eta - d_max


class SlidingModeController:
    """Stateful controller: surface, reaching law, observer and inversion.

    ``step`` takes filtered measurements and the current design derivatives
    and returns the unsaturated canard command.
    """

    def __init__(self, config: ControllerConfig, i_yy: float = 1.0,
                 observer_enabled: bool = True):
        self.config = config
        self.i_yy = i_yy
        self.observer_enabled = observer_enabled and config.ki != 0.0
        self.state = ControllerState()
        self.authority_floor = False

    def reset_integrator(self) -> None:
        self.state.b = 0.0
        self.state.integrator_resets += 1

    def step(self, alpha_cmd: float, alpha_cmd_dot: float, alpha_cmd_ddot: float,
             alpha: float, alpha_rate: float, m_alpha_design: float, m_delta_design: float,
             dt: float) -> float:
        cfg = self.config
        st = self.state
        e = alpha_cmd - alpha
        e_dot = alpha_cmd_dot - alpha_rate
        s = e_dot + cfg.c * e
        st.last_s = s
        u_r = reaching_term(s, cfg, st, dt)
        v = cfg.c * e_dot + alpha_cmd_ddot + u_r
        if self.observer_enabled:
            observer_update(st, s, cfg.ki, dt, cfg.observer_clamp_fraction * abs(m_alpha_design),
                            regressor=-alpha)
        m_alpha_est = m_alpha_design + st.m_alpha_correction
        if abs(m_delta_design) < cfg.m_delta_floor:
            self.authority_floor = True
            st.authority_floor_hits += 1
            return 0.0
        self.authority_floor = False
        return (self.i_yy * v - m_alpha_est * alpha) / m_delta_design


# ---------------------------------------------------------------- design-model check


@dataclass
class DesignModelRun:
    time: np.ndarray
    s: np.ndarray
    lyapunov: np.ndarray
    alpha: np.ndarray
    delta: np.ndarray
    disturbance: np.ndarray


def run_design_model(config: ControllerConfig, m_alpha: float, m_delta: float,
                     i_yy: float = 1.0, alpha_cmd: float = math.radians(10.0),
                     duration: float = 0.3, dt: float = 1e-6,
                     disturbance: Callable[[float], float] | None = None,
                     alpha0: float = 0.0, alpha_rate0: float = 0.0) -> DesignModelRun:
    """Close the loop on the design model itself, with exact state feedback.

    The command is held as a step at ``alpha_cmd``; the controller output is
    held over each step of ``dt`` (zero-order hold) and the plant
    ``alpha'' = (M_alpha alpha + M_delta delta)/I_yy + d(t)`` is advanced
    with RK4. No actuator, sensor or observer is involved.
    """
    n = int(round(duration / dt))
    ctrl_state = ControllerState()
    t_out = np.empty(n + 1)
    s_out = np.empty(n + 1)
    a_out = np.empty(n + 1)
    d_out = np.empty(n + 1)
    dist_out = np.empty(n + 1)
    a, ad = alpha0, alpha_rate0
    ka = m_alpha / i_yy
    kd = m_delta / i_yy
    dist = disturbance if disturbance is not None else (lambda _t: 0.0)
    h2 = 0.5 * dt
    h6 = dt / 6.0
    for k in range(n + 1):
        t = k * dt
        e = alpha_cmd - a
        s = -ad + config.c * e
        t_out[k] = t
        s_out[k] = s
        a_out[k] = a
        dist_out[k] = dist(t)
        u_r = reaching_term(s, config, ctrl_state, dt)
        v = auxiliary_control(-ad, 0.0, config.c, u_r)
        delta = control_deflection(v, a, m_alpha, m_delta, i_yy, config.m_delta_floor)
        d_out[k] = delta
        if k == n:
            break
        u = kd * delta

        def acc(tt: float, x: float) -> float:
            return ka * x + u + dist(tt)

        k1a, k1v = ad, acc(t, a)
        k2a, k2v = ad + h2 * k1v, acc(t + h2, a + h2 * k1a)
        k3a, k3v = ad + h2 * k2v, acc(t + h2, a + h2 * k2a)
        k4a, k4v = ad + dt * k3v, acc(t + dt, a + dt * k3a)
        a += h6 * (k1a + 2 * k2a + 2 * k3a + k4a)
        ad += h6 * (k1v + 2 * k2v + 2 * k3v + k4v)
    return DesignModelRun(t_out, s_out, 0.5 * s_out**2, a_out, d_out, dist_out)
