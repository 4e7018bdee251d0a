import bisect
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from missile_smc.aero import (SUBSONIC_LIMIT, TABLE_MACH_RANGE, AeroTables, PerturbationProfile,
                              RegimeError, TableFormatError, WingGeometry, cl2d_subsonic,
                              cl2d_supersonic, cl_subsonic, cl_supersonic, design_cl,
                              design_derivatives, design_moment_coefficient, format_tables,
                              parse_tables, read_tables, supersonic_junction,
                              synthesize_truth_tables, table_divergence, truth_coefficients,
                              write_tables)

GEO = WingGeometry()


def flat(**kw):
    """Unswept geometry for the closed-form lift examples."""
    base = dict(leading_edge_sweep=0.0, thickness_to_chord=0.04)
    base.update(kw)
    return WingGeometry(**base)


# ---------------------------------------------------------------- lift slopes


def test_cl2d_subsonic_examples():
    # t/c = 0 is outside the open interval (0, 0.3); 1e-15 is indistinguishable from it
    assert cl2d_subsonic(flat(thickness_to_chord=1e-15)) == pytest.approx(1.8 * math.pi, rel=1e-12)
    assert cl2d_subsonic(flat(thickness_to_chord=0.05)) == pytest.approx(5.9376, abs=1e-4)
    swept = flat(thickness_to_chord=0.05, leading_edge_sweep=math.pi / 3)
    assert cl2d_subsonic(swept) == pytest.approx(0.5 * cl2d_subsonic(flat(thickness_to_chord=0.05)),
                                                 rel=1e-12)


def test_cl_subsonic_hand_example():
    g = flat(thickness_to_chord=1e-15, aspect_ratio=2.0)
    assert cl_subsonic(g, 0.5) == pytest.approx(1.1547 * 5.655 / 1.900, rel=2e-4)
    assert cl_subsonic(g, 0.5) == pytest.approx(3.436, abs=1e-3)


def test_cl_subsonic_infinite_span_limit():
    g = flat(aspect_ratio=1e9)
    assert cl_subsonic(g, 0.0) == pytest.approx(cl2d_subsonic(g), rel=1e-8)


def test_cl_subsonic_increasing_in_mach():
    m = np.linspace(0.0, SUBSONIC_LIMIT, 200)
    vals = [cl_subsonic(GEO, x) for x in m]
    assert np.all(np.diff(vals) > 0)


def test_cl_subsonic_regime_error():
    with pytest.raises(RegimeError):
        cl_subsonic(GEO, 0.9)


def test_ackeret_examples():
    g = flat(aspect_ratio=1e9)
    assert cl_supersonic(g, 2.0) == pytest.approx(4.0 / math.sqrt(3.0), rel=1e-8)
    assert cl_supersonic(g, 2.0) == pytest.approx(2.3094, abs=1e-4)
    assert cl2d_supersonic(flat(), math.sqrt(2.0)) == pytest.approx(4.0, rel=1e-12)


@given(st.floats(1.01, 6.0), st.floats(0.5, 10.0))
def test_finite_span_factor_below_one(mach, ar):
    g = flat(aspect_ratio=ar)
    assert cl_supersonic(g, mach) < cl2d_supersonic(g, mach)


def test_supersonic_regime_error():
    with pytest.raises(RegimeError):
        cl_supersonic(GEO, GEO.supersonic_onset)
    with pytest.raises(RegimeError):
        cl2d_supersonic(GEO, 1.5)


# ---------------------------------------------------------------- design lift


def test_design_cl_dispatch():
    assert design_cl(GEO, 0.5) == cl_subsonic(GEO, 0.5)
    m1 = supersonic_junction(GEO)
    assert design_cl(GEO, m1 + 0.5) == cl_supersonic(GEO, m1 + 0.5)


def test_bridge_endpoint_values():
    m1 = supersonic_junction(GEO)
    eps = 1e-13
    assert abs(design_cl(GEO, SUBSONIC_LIMIT + eps) - cl_subsonic(GEO, SUBSONIC_LIMIT)) < 1e-12
    assert abs(design_cl(GEO, m1 - eps) - cl_supersonic(GEO, m1)) < 1e-12


def test_supersonic_junction_lies_beyond_onset():
    assert supersonic_junction(GEO) > GEO.supersonic_onset > SUBSONIC_LIMIT


def test_design_cl_dense_scan_continuity():
    m = np.arange(0.0, TABLE_MACH_RANGE[1], 1e-4)
    vals = np.array([design_cl(GEO, x) for x in m])
    assert np.max(np.abs(np.diff(vals))) < 1e-3
    assert np.all(vals > 0)


@pytest.mark.parametrize("which", ["subsonic", "supersonic"])
def test_design_cl_c1_at_junctions(which):
    x = SUBSONIC_LIMIT if which == "subsonic" else supersonic_junction(GEO)
    h = 1e-5
    f = lambda m: design_cl(GEO, m)  # noqa: E731
    # second-order one-sided differences
    left = (3 * f(x) - 4 * f(x - h) + f(x - 2 * h)) / (2 * h)
    right = (-3 * f(x) + 4 * f(x + h) - f(x + 2 * h)) / (2 * h)
    # the supersonic junction sits on the slope peak, so both sides are ~0 there
    assert right == pytest.approx(left, rel=1e-3, abs=1e-6 * f(x))


def test_design_cl_rejects_negative_mach():
    with pytest.raises(RegimeError):
        design_cl(GEO, -0.1)


# ---------------------------------------------------------------- design derivatives


def test_design_derivatives_formulae():
    q, m = 5e4, 2.5
    d = design_derivatives(GEO, q, m)
    cl = design_cl(GEO, m)
    g = GEO
    assert d.lift_coefficient_slope == cl
    assert d.m_alpha == pytest.approx(q * cl * (g.canard_area * g.canard_arm - g.tail_area * g.tail_arm))
    assert d.m_delta == pytest.approx(q * cl * g.canard_area * g.canard_arm)
    assert d.l_alpha == pytest.approx(q * cl * (g.canard_area + g.tail_area))


def test_design_derivatives_zero_qbar():
    d = design_derivatives(GEO, 0.0, 1.5)
    assert d.m_alpha == 0 and d.m_delta == 0 and d.l_alpha == 0


@given(st.floats(1.0, 2e6), st.floats(0.0, 4.63), st.floats(0.1, 10.0))
def test_design_signs_and_homogeneity(q, mach, k):
    d = design_derivatives(GEO, q, mach)
    assert d.m_alpha < 0 < d.m_delta
    d2 = design_derivatives(GEO, k * q, mach)
    for a, b in ((d.m_alpha, d2.m_alpha), (d.m_delta, d2.m_delta), (d.l_alpha, d2.l_alpha)):
        assert b == pytest.approx(k * a, rel=1e-12)


def test_unstable_geometry_rejected():
    with pytest.raises(ValueError, match="statically unstable"):
        WingGeometry(canard_area=0.03, tail_area=0.01)


@pytest.mark.parametrize("kw", [dict(canard_area=0.0), dict(aspect_ratio=-1.0),
                                dict(leading_edge_sweep=math.pi / 2), dict(thickness_to_chord=0.3)])
def test_geometry_invariants(kw):
    with pytest.raises(ValueError):
        WingGeometry(**kw)


# ---------------------------------------------------------------- truth tables


@pytest.fixture(scope="module")
def tables():
    return synthesize_truth_tables(GEO)


@pytest.fixture(scope="module")
def zero_tables():
    return synthesize_truth_tables(GEO, PerturbationProfile.zero())


def test_knots_cover_data_range(tables):
    lo, hi = tables.mach_range
    assert lo <= 0.2 and hi >= 4.63


def test_zero_profile_reproduces_design(zero_tables):
    for i, m in enumerate(zero_tables.mach_knots):
        assert abs(zero_tables.cl_alpha[i] - design_cl(GEO, m)) < 1e-9
        assert abs(zero_tables.cm_alpha_ref[i] - design_moment_coefficient(GEO, m)) < 1e-9
    div = table_divergence(zero_tables, GEO)
    assert div["cl_alpha"] < 1e-9 and div["cm_alpha"] < 1e-9


def test_zero_profile_moments_match_design_derivatives(zero_tables):
    q, m = 3e4, 1.2
    tc = truth_coefficients(zero_tables, m, zero_tables.reference_station, GEO.canard_fraction)
    k = q * GEO.reference_area * GEO.reference_length
    d = design_derivatives(GEO, q, m)
    assert k * tc.cm_alpha == pytest.approx(d.m_alpha, rel=1e-6)
    assert k * tc.cm_delta == pytest.approx(d.m_delta, rel=1e-6)


def test_same_seed_same_tables():
    a = synthesize_truth_tables(GEO, seed=7)
    b = synthesize_truth_tables(GEO, seed=7)
    c = synthesize_truth_tables(GEO, seed=8)
    assert a == b
    assert a != c


def test_default_profile_diverges_at_mach_1_1(tables):
    i = min(range(len(tables.mach_knots)), key=lambda j: abs(tables.mach_knots[j] - 1.1))
    assert tables.mach_knots[i] == pytest.approx(1.1)
    cm_d = design_moment_coefficient(GEO, 1.1)
    assert abs(tables.cm_alpha_ref[i] - cm_d) / abs(cm_d) >= 0.10


def test_divergence_concentrated_in_transonic_band():
    t = synthesize_truth_tables(GEO, PerturbationProfile(jitter=0.0))
    band = (SUBSONIC_LIMIT, GEO.supersonic_onset)
    inside = table_divergence(t, GEO, band=band)["cm_alpha"]
    outside_pts = [m for m in t.mach_knots if not band[0] < m < band[1]]
    assert inside >= 0.10
    for m in outside_pts:
        i = t.mach_knots.index(m)
        assert t.cm_alpha_ref[i] == pytest.approx(design_moment_coefficient(GEO, m), rel=1e-12)


def test_exact_at_knots(tables):
    for i, m in enumerate(tables.mach_knots):
        cl, cm, cq, cd, clamped = tables.interpolate(m)
        assert not clamped
        assert cl == pytest.approx(tables.cl_alpha[i], rel=1e-12, abs=1e-14)
        assert cm == pytest.approx(tables.cm_alpha_ref[i], rel=1e-12, abs=1e-14)
        assert cq == pytest.approx(tables.cm_q[i], rel=1e-12, abs=1e-14)
        assert cd == pytest.approx(tables.cm_delta[i], rel=1e-12, abs=1e-14)


_T = synthesize_truth_tables(GEO)


@given(st.floats(_T.mach_knots[0], _T.mach_knots[-1]))
def test_interpolation_bounded_by_bracketing_knots(mach):
    knots = _T.mach_knots
    i = min(max(bisect.bisect_right(knots, mach) - 1, 0), len(knots) - 2)
    vals = _T.interpolate(mach)[:4]
    for v, col in zip(vals, (_T.cl_alpha, _T.cm_alpha_ref, _T.cm_q, _T.cm_delta)):
        lo, hi = sorted((col[i], col[i + 1]))
        tol = 1e-12 * max(abs(lo), abs(hi))
        assert lo - tol <= v <= hi + tol


def test_interpolation_continuous(tables):
    m = np.arange(tables.mach_knots[0], tables.mach_knots[-1], 1e-4)
    cl = np.array([tables.interpolate(x)[0] for x in m])
    assert np.max(np.abs(np.diff(cl))) < 1e-2


def test_clamping_outside_range(tables):
    lo, hi = tables.mach_range
    assert tables.interpolate(0.05)[:4] == tables.interpolate(lo)[:4]
    assert tables.interpolate(0.05)[4] is True
    assert tables.interpolate(9.0)[:4] == tables.interpolate(hi)[:4]
    assert truth_coefficients(tables, 5.0, 0.4, GEO.canard_fraction).clamped


def test_no_transfer_at_reference_station(tables):
    cl, cm, cq, cd, _ = tables.interpolate(2.0)
    tc = truth_coefficients(tables, 2.0, tables.reference_station, GEO.canard_fraction)
    assert (tc.cl_alpha, tc.cm_alpha, tc.cm_q, tc.cm_delta) == (cl, cm, cq, cd)


@given(st.floats(0.3, 0.6))
def test_cog_transfer_is_moment_arm_shift(cog):
    cl, cm, _, cd, _ = _T.interpolate(1.5)
    tc = truth_coefficients(_T, 1.5, cog, GEO.canard_fraction)
    shift = cog - _T.reference_station
    assert tc.cm_alpha == pytest.approx(cm + cl * shift, rel=1e-12, abs=1e-15)
    assert tc.cm_delta == pytest.approx(cd + cl * GEO.canard_fraction * shift, rel=1e-12, abs=1e-15)


def test_forward_cog_is_more_stable(tables):
    aft = truth_coefficients(tables, 2.0, 0.53, GEO.canard_fraction)
    fwd = truth_coefficients(tables, 2.0, 0.35, GEO.canard_fraction)
    assert fwd.cm_alpha < aft.cm_alpha < 0


def test_empty_tables_rejected():
    with pytest.raises(ValueError):
        AeroTables((), (), (), (), (), 0.5)


# ---------------------------------------------------------------- file format


def test_table_file_round_trip(tables, tmp_path):
    p = tmp_path / "t.tbl"
    write_tables(tables, p)
    assert read_tables(p) == tables
    assert p.read_text().splitlines()[0] == "# mach cl_alpha cm_alpha_ref cm_q cm_delta"


def test_table_file_bytes_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    write_tables(synthesize_truth_tables(GEO, seed=3), a)
    write_tables(synthesize_truth_tables(GEO, seed=3), b)
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "mutate, line",
    [
        (lambda ls: ls[:3] + ["0.3 1 2 3"] + ls[4:], 4),
        (lambda ls: ls[:4] + ["0.3 1 2 x 4"] + ls[5:], 5),
        (lambda ls: ls[:4] + [ls[2]] + ls[5:], 5),
    ],
    ids=["columns", "non-numeric", "not-increasing"],
)
def test_malformed_row_reports_line(tables, mutate, line):
    lines = format_tables(tables).splitlines()
    with pytest.raises(TableFormatError, match=f"line {line}"):
        parse_tables("\n".join(mutate(lines)))


def test_bad_header_rejected(tables):
    text = format_tables(tables).replace("cm_q", "cmq", 1)
    with pytest.raises(TableFormatError, match="line 1"):
        parse_tables(text)
