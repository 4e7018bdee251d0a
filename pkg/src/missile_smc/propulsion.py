"""Boost-phase thrust, mass depletion and centre-of-gravity travel."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional


@dataclass(frozen=True)
class PropulsionConfig:
    initial_mass: float = 10.0  # kg
    fuel_fraction: float = 0.4
    burn_time: float = 5.0  # s
    peak_thrust: float = 3000.0  # N
    pitch_inertia: float = 1.0  # kg m^2
    body_cog_fraction: float = 0.35
    propellant_cog_fraction: float = 0.8

    def __post_init__(self) -> None:
        if not 0.0 < self.fuel_fraction < 1.0:
            raise ValueError("propulsion.fuel_fraction must lie in (0, 1)")
        if not self.burn_time > 0.0:
            raise ValueError("propulsion.burn_time must be positive")
        if not self.peak_thrust >= 0.0:
            raise ValueError("propulsion.peak_thrust must be non-negative")
        if not self.pitch_inertia > 0.0:
            raise ValueError("propulsion.pitch_inertia must be positive")
        if not self.initial_mass > 0.0:
            raise ValueError("propulsion.initial_mass must be positive")
        if not self.body_cog_fraction < self.propellant_cog_fraction:
            raise ValueError("propulsion.body_cog_fraction must be ahead of propellant_cog_fraction")

    @property
    def fuel_mass(self) -> float:
        return self.initial_mass * self.fuel_fraction

    @property
    def burnout_mass(self) -> float:
        return self.initial_mass * (1.0 - self.fuel_fraction)


@dataclass(frozen=True)
class MassState:
    mass: float  # kg
    cog_fraction: float
    thrust: float  # N


def thrust_at(config: PropulsionConfig, t: float) -> float:
    """Half-sine boost: ``T_peak * sin(pi t / t_b)`` during the burn, zero afterwards."""
    if t < 0.0 or t > config.burn_time:
        return 0.0
    return config.peak_thrust * math.sin(math.pi * t / config.burn_time)


def burnt_fraction(config: PropulsionConfig, t: float) -> float:
    """Fraction of total impulse delivered by time ``t`` (closed form for the half-sine)."""
    if t <= 0.0:
        return 0.0
    if t >= config.burn_time:
        return 1.0
    return 0.5 * (1.0 - math.cos(math.pi * t / config.burn_time))


def mass_at(config: PropulsionConfig, t: float) -> float:
    return config.initial_mass - config.fuel_mass * burnt_fraction(config, t)


def cog_at(config: PropulsionConfig, t: float) -> float:
    """CoG as a fraction of body length; the body stays put, the propellant burns off aft."""
    m = mass_at(config, t)
    mb = config.burnout_mass
    return (config.body_cog_fraction * mb + config.propellant_cog_fraction * (m - mb)) / m


def mass_state_at(config: PropulsionConfig, t: float) -> MassState:
    return MassState(mass=mass_at(config, t), cog_fraction=cog_at(config, t),
                     thrust=thrust_at(config, t))


class Propulsion:
    """Pairs a config with an optional custom thrust profile.

    A custom ``profile(t) -> N`` replaces the half-sine; its impulse is
    integrated numerically (trapezoid, ``samples`` intervals over the burn)
    so mass and CoG stay consistent with it.
    """

    def __init__(self, config: PropulsionConfig,
                 profile: Optional[Callable[[float], float]] = None, samples: int = 20_000):
        self.config = config
        self.profile = profile
        if profile is not None:
            tb = config.burn_time
            h = tb / samples
            vals = [profile(i * h) for i in range(samples + 1)]
            cum = [0.0]
            for a, b in zip(vals, vals[1:]):
                cum.append(cum[-1] + 0.5 * (a + b) * h)
            if cum[-1] <= 0.0:
                raise ValueError("custom thrust profile delivers no impulse")
            self._h = h
            self._cum = [c / cum[-1] for c in cum]

    def thrust(self, t: float) -> float:
        if self.profile is None:
            return thrust_at(self.config, t)
        if t < 0.0 or t > self.config.burn_time:
            return 0.0
        return self.profile(t)

    def burnt_fraction(self, t: float) -> float:
        if self.profile is None:
            return burnt_fraction(self.config, t)
        if t <= 0.0:
            return 0.0
        if t >= self.config.burn_time:
            return 1.0
        x = t / self._h
        i = int(x)
        f = x - i
        return self._cum[i] + f * (self._cum[i + 1] - self._cum[i])

    def state(self, t: float) -> MassState:
        c = self.config
        m = c.initial_mass - c.fuel_mass * self.burnt_fraction(t)
        mb = c.burnout_mass
        cog = (c.body_cog_fraction * mb + c.propellant_cog_fraction * (m - mb)) / m
        return MassState(mass=m, cog_fraction=cog, thrust=self.thrust(t))
