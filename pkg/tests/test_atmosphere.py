import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from missile_smc.atmosphere import (GAMMA_AIR, R_AIR, AtmosphereDomainError, atmo_at,
                                    boundary_jump, dynamic_pressure, mach_number)


def test_sea_level_temperature_as_printed():
    assert atmo_at(0.0).temperature == pytest.approx(252.14, abs=1e-12)


def test_stratosphere_temperature():
    assert atmo_at(15_000.0).temperature == pytest.approx(216.64, abs=1e-12)


def test_sea_level_pressure_hand_value():
    expected = 101.29 * (252.14 / 288.08) ** 5.256
    p = atmo_at(0.0).pressure
    assert p == pytest.approx(expected, rel=1e-12)
    assert p == pytest.approx(50.3, abs=0.05)


def test_troposphere_branch_matches_hand_formula():
    h = 5000.0
    t = 252.14 - 0.00649 * h
    p = 101.29 * (t / 288.08) ** 5.256
    s = atmo_at(h)
    assert s.temperature == pytest.approx(t, rel=1e-9)
    assert s.pressure == pytest.approx(p, rel=1e-9)


def test_stratosphere_branch_matches_hand_formula():
    h = 20_000.0
    p = 22.65 * math.exp(1.73 - 0.000157 * h)
    assert atmo_at(h).pressure == pytest.approx(p, rel=1e-9)


def test_boundary_uses_stratosphere_branch():
    assert atmo_at(11_000.0).temperature == 216.64
    assert atmo_at(10_999.999).temperature == pytest.approx(252.14 - 0.00649 * 10_999.999)


def test_boundary_jump_is_reported_not_smoothed():
    dt, dp = boundary_jump()
    assert dt == pytest.approx(216.64 - (252.14 - 0.00649 * 11_000.0), abs=1e-6)
    assert dt != 0.0
    assert dp != 0.0


def test_standard_day_override_removes_most_of_the_jump():
    dt, _ = boundary_jump(sea_level_temperature_k=288.14)
    assert abs(dt) < 1.0


@pytest.mark.parametrize("h", [-1.0, 25_000.1, float("nan")])
def test_domain_errors_name_the_bound(h):
    with pytest.raises(AtmosphereDomainError, match="bound"):
        atmo_at(h)


def test_dynamic_pressure_examples():
    assert dynamic_pressure(1.0, 0.0) == 0.0
    assert dynamic_pressure(1.225, 340.0) == pytest.approx(70_805.0, rel=1e-12)
    assert dynamic_pressure(1.2, 200.0) == pytest.approx(4 * dynamic_pressure(1.2, 100.0))


def test_dynamic_pressure_rejects_bad_inputs():
    with pytest.raises(ValueError):
        dynamic_pressure(0.0, 10.0)
    with pytest.raises(ValueError):
        dynamic_pressure(1.0, -1.0)


def test_mach_number_examples():
    assert mach_number(340.0, 340.0) == 1.0
    assert mach_number(0.0, 340.0) == 0.0
    assert mach_number(680.0, 340.0) == 2.0
    with pytest.raises(ValueError):
        mach_number(100.0, 0.0)


altitudes = st.floats(min_value=0.0, max_value=25_000.0, allow_nan=False)


@given(altitudes)
def test_state_is_positive_and_consistent(h):
    s = atmo_at(h)
    assert s.temperature > 0 and s.pressure > 0 and s.density > 0 and s.speed_of_sound > 0
    assert s.density == pytest.approx(s.pressure * 1000.0 / (R_AIR * s.temperature), rel=1e-12)
    assert s.speed_of_sound == pytest.approx(math.sqrt(GAMMA_AIR * R_AIR * s.temperature), rel=1e-12)


troposphere = st.floats(min_value=0.0, max_value=10_999.0)
stratosphere = st.floats(min_value=11_000.0, max_value=25_000.0)


@pytest.mark.parametrize("band", [troposphere, stratosphere], ids=["troposphere", "stratosphere"])
def test_pressure_strictly_decreasing_within_each_branch(band):
    @given(band, band)
    def check(h1, h2):
        if abs(h1 - h2) < 1e-6:
            return
        lo, hi = sorted((h1, h2))
        assert atmo_at(lo).pressure > atmo_at(hi).pressure

    check()


def test_pressure_jumps_up_at_the_boundary_with_printed_constants():
    # 252.14 K at sea level leaves the troposphere branch at 8.7 kPa, below the
    # stratosphere branch's 22.7 kPa, so pressure cannot decrease across 11 km.
    _, dp = boundary_jump()
    assert dp == pytest.approx(22.718 - 8.741, abs=1e-2)


def test_standard_day_pressure_nearly_continuous():
    _, dp = boundary_jump(sea_level_temperature_k=288.14)
    assert abs(dp) < 0.05


@given(altitudes)
def test_pure_and_deterministic(h):
    assert atmo_at(h) == atmo_at(h)


@given(st.floats(0.01, 2.0), st.one_of(st.just(0.0), st.floats(1e-3, 2000.0)))
def test_dynamic_pressure_nonnegative_zero_iff_still(rho, v):
    q = dynamic_pressure(rho, v)
    assert q >= 0.0
    assert (q == 0.0) == (v == 0.0)
