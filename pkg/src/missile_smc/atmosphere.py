"""Two-layer atmosphere: troposphere (linear lapse) and lower stratosphere.

Pressure is carried in kPa to match the layer constants; every consumer
that needs force units converts to Pa through :func:`dynamic_pressure`,
which takes density directly.

The default sea-level temperature constant (252.14 K) is historical and
produces a temperature jump at the layer boundary; pass
``sea_level_temperature_k=288.14`` for the standard-day value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

R_AIR = 287.05  # J/(kg K)
GAMMA_AIR = 1.4

SEA_LEVEL_TEMPERATURE_K = 252.14
LAPSE_RATE_K_PER_M = 0.00649
LAYER_BOUNDARY_M = 11_000.0
MAX_ALTITUDE_M = 25_000.0

_P_SEA_LEVEL_KPA = 101.29
_T_PRESSURE_REF_K = 288.08
_PRESSURE_EXPONENT = 5.256
_T_STRATOSPHERE_K = 216.64
_P_STRAT_KPA = 22.65


class AtmosphereDomainError(ValueError):
    """Altitude outside the supported band."""


@dataclass(frozen=True)
class AtmoSample:
    temperature: float  # K
    pressure: float  # kPa
    density: float  # kg/m^3
    speed_of_sound: float  # m/s


def _check_altitude(altitude: float) -> None:
    if not altitude >= 0.0:
        raise AtmosphereDomainError(f"altitude {altitude!r} m is below the lower bound of 0 m")
    if altitude > MAX_ALTITUDE_M:
        raise AtmosphereDomainError(
            f"altitude {altitude!r} m is above the upper bound of {MAX_ALTITUDE_M:g} m"
        )


def temperature_pressure(
    altitude: float,
    sea_level_temperature_k: float = SEA_LEVEL_TEMPERATURE_K,
    layer_boundary_m: float = LAYER_BOUNDARY_M,
) -> tuple[float, float]:
    """Return ``(temperature [K], pressure [kPa])`` without range checks."""
    if altitude < layer_boundary_m:
        t = sea_level_temperature_k - LAPSE_RATE_K_PER_M * altitude
        p = _P_SEA_LEVEL_KPA * (t / _T_PRESSURE_REF_K) ** _PRESSURE_EXPONENT
    else:
        t = _T_STRATOSPHERE_K
        p = _P_STRAT_KPA * math.exp(1.73 - 0.000157 * altitude)
    return t, p


def atmo_at(
    altitude: float,
    sea_level_temperature_k: float = SEA_LEVEL_TEMPERATURE_K,
    layer_boundary_m: float = LAYER_BOUNDARY_M,
) -> AtmoSample:
    """Atmospheric state at ``altitude`` metres (0 to 25 km).

    The troposphere branch applies strictly below ``layer_boundary_m``; the
    isothermal branch applies at and above it.

    Raises
    ------
    AtmosphereDomainError
        If the altitude is negative, NaN, or above 25 km.
    """
    _check_altitude(altitude)
    t, p = temperature_pressure(altitude, sea_level_temperature_k, layer_boundary_m)
    if t <= 0.0:
        raise AtmosphereDomainError(
            f"temperature {t:.3f} K at altitude {altitude} m is non-physical; "
            "check sea_level_temperature_k"
        )
    rho = p * 1000.0 / (R_AIR * t)
    a = math.sqrt(GAMMA_AIR * R_AIR * t)
    return AtmoSample(temperature=t, pressure=p, density=rho, speed_of_sound=a)


def boundary_jump(
    sea_level_temperature_k: float = SEA_LEVEL_TEMPERATURE_K,
    layer_boundary_m: float = LAYER_BOUNDARY_M,
) -> tuple[float, float]:
    """Temperature and pressure discontinuity (upper minus lower) at the layer boundary."""
    t_lo, p_lo = temperature_pressure(
        math.nextafter(layer_boundary_m, 0.0), sea_level_temperature_k, layer_boundary_m
    )
    t_hi, p_hi = temperature_pressure(layer_boundary_m, sea_level_temperature_k, layer_boundary_m)
    return t_hi - t_lo, p_hi - p_lo


def dynamic_pressure(density: float, speed: float) -> float:
    """Dynamic pressure ``0.5 * rho * V**2`` in Pa."""
    if density <= 0.0:
        raise ValueError(f"density must be positive, got {density}")
    if speed < 0.0:
        raise ValueError(f"speed must be non-negative, got {speed}")
    return 0.5 * density * speed * speed


def mach_number(speed: float, speed_of_sound: float) -> float:
    if speed_of_sound <= 0.0:
        raise ValueError(f"speed of sound must be positive, got {speed_of_sound}")
    return abs(speed) / speed_of_sound
