"""Aerodynamic providers.

Two independent sources of stability derivatives live here:

* the *design* model, closed-form wing-and-tube estimates the controller
  is allowed to know about (:func:`design_cl`, :func:`design_derivatives`);
* the *truth* model, Mach-indexed lookup tables used only by the plant
  (:class:`AeroTables`, :func:`truth_coefficients`).

Table coefficients are non-dimensional, referenced to the combined lifting
area ``S_ref = S_c + S_t`` and the body length ``l``::

    L_alpha = qbar * S_ref * cl_alpha
    M_alpha = qbar * S_ref * l * cm_alpha
    M_delta = qbar * S_ref * l * cm_delta
    M_q     = qbar * S_ref * l * cm_q * l / (2 V)
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

SUBSONIC_LIMIT = 0.85
TABLE_MACH_RANGE = (0.20, 4.63)


class RegimeError(ValueError):
    """Mach number outside the validity band of a lift estimate."""


class TableFormatError(ValueError):
    """Malformed aerodynamic table file."""


@dataclass(frozen=True)
class WingGeometry:
    leading_edge_sweep: float = math.radians(60.0)  # rad
    aspect_ratio: float = 2.0
    thickness_to_chord: float = 0.04
    canard_area: float = 0.010  # m^2
    tail_area: float = 0.0116  # m^2
    canard_arm: float = 0.672  # m, ahead of the reference station
    tail_arm: float = 0.638  # m, behind the reference station
    reference_length: float = 1.4  # m

    def __post_init__(self) -> None:
        for name in ("canard_area", "tail_area", "canard_arm", "tail_arm", "reference_length",
                     "aspect_ratio"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"geometry.{name} must be positive, got {getattr(self, name)}")
        if not 0.0 <= self.leading_edge_sweep < math.pi / 2:
            raise ValueError("geometry.leading_edge_sweep must lie in [0, pi/2)")
        if not 0.0 < self.thickness_to_chord < 0.3:
            raise ValueError("geometry.thickness_to_chord must lie in (0, 0.3)")
        if not self.canard_area * self.canard_arm < self.tail_area * self.tail_arm:
            raise ValueError(
                "geometry is statically unstable: canard_area*canard_arm must be below "
                "tail_area*tail_arm"
            )

    @property
    def reference_area(self) -> float:
        return self.canard_area + self.tail_area

    @property
    def canard_fraction(self) -> float:
        return self.canard_area / self.reference_area

    @property
    def supersonic_onset(self) -> float:
        """Mach number ``sec(sweep)`` above which the supersonic estimate applies."""
        return 1.0 / math.cos(self.leading_edge_sweep)


@dataclass(frozen=True)
class DesignAero:
    lift_coefficient_slope: float  # 1/rad
    m_alpha: float  # N m / rad
    m_delta: float  # N m / rad
    l_alpha: float  # N / rad


# ---------------------------------------------------------------- design lift


def cl2d_subsonic(geometry: WingGeometry) -> float:
    return 1.8 * math.pi * (1.0 + geometry.thickness_to_chord) * math.cos(geometry.leading_edge_sweep)


def _finite_span_subsonic(geometry: WingGeometry) -> float:
    cl2d = cl2d_subsonic(geometry)
    return cl2d / (1.0 + cl2d / (math.pi * geometry.aspect_ratio))


def cl_subsonic(geometry: WingGeometry, mach: float) -> float:
    """Compressible, finite-span lift slope for ``0 <= mach <= 0.85``."""
    if not 0.0 <= mach <= SUBSONIC_LIMIT:
        raise RegimeError(f"subsonic estimate valid on [0, {SUBSONIC_LIMIT}], got M={mach}")
    c = math.cos(geometry.leading_edge_sweep)
    radicand = 1.0 - (mach * c) ** 2
    if radicand <= 0.0:
        raise RegimeError(f"Prandtl-Glauert singularity at M={mach}")
    return _finite_span_subsonic(geometry) / math.sqrt(radicand)


def _cl_subsonic_slope(geometry: WingGeometry, mach: float) -> float:
    c2 = math.cos(geometry.leading_edge_sweep) ** 2
    return _finite_span_subsonic(geometry) * mach * c2 / (1.0 - mach * mach * c2) ** 1.5


def cl2d_supersonic(geometry: WingGeometry, mach: float) -> float:
    """Ackeret two-dimensional slope ``4 cos(sweep) / sqrt(M^2 cos^2(sweep) - 1)``."""
    c = math.cos(geometry.leading_edge_sweep)
    radicand = (mach * c) ** 2 - 1.0
    if radicand <= 0.0:
        raise RegimeError(
            f"supersonic estimate requires M > sec(sweep) = {1.0 / c:.6g}, got M={mach}"
        )
    return 4.0 * c / math.sqrt(radicand)


def cl_supersonic(geometry: WingGeometry, mach: float) -> float:
    """Supersonic lift slope with the finite-span correction.

    Valid only for ``mach > sec(sweep)``; the result is negative close to the
    singular onset, which is why :func:`design_cl` joins it further out.
    """
    cl2d = cl2d_supersonic(geometry, mach)
    beta = math.sqrt((mach * math.cos(geometry.leading_edge_sweep)) ** 2 - 1.0)
    return cl2d * (1.0 - 1.0 / (2.0 * geometry.aspect_ratio * beta))


def _cl_supersonic_slope(geometry: WingGeometry, mach: float) -> float:
    c = math.cos(geometry.leading_edge_sweep)
    beta = math.sqrt((mach * c) ** 2 - 1.0)
    dcl_dbeta = 4.0 * c * (-1.0 / beta**2 + 1.0 / (geometry.aspect_ratio * beta**3))
    return dcl_dbeta * mach * c * c / beta


def supersonic_junction(geometry: WingGeometry) -> float:
    """Mach number where the transonic bridge hands over to the supersonic estimate.

    The supersonic estimate is singular at ``sec(sweep)``, so the bridge ends
    at ``sqrt(M^2 cos^2 - 1) = max(1/AR, 0.5)``: the lift-slope peak of the
    finite-span formula for AR <= 2 and a fixed offset otherwise.
    """
    beta = max(1.0 / geometry.aspect_ratio, 0.5)
    return math.sqrt(1.0 + beta * beta) / math.cos(geometry.leading_edge_sweep)


def _hermite(x: float, x0: float, x1: float, y0: float, y1: float, m0: float, m1: float) -> float:
    h = x1 - x0
    t = (x - x0) / h
    t2 = t * t
    t3 = t2 * t
    return ((2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0
            + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * m1)


def design_cl(geometry: WingGeometry, mach: float) -> float:
    """Design lift slope over the whole Mach range.

    Subsonic estimate up to 0.85, supersonic estimate beyond
    :func:`supersonic_junction`, and a cubic Hermite bridge in between that
    matches values and slopes at both ends.
    """
    if mach < 0.0:
        raise RegimeError(f"mach must be non-negative, got {mach}")
    if mach <= SUBSONIC_LIMIT:
        return cl_subsonic(geometry, mach)
    m1 = supersonic_junction(geometry)
    if mach >= m1:
        return cl_supersonic(geometry, mach)
    m0 = SUBSONIC_LIMIT
    return _hermite(
        mach, m0, m1,
        cl_subsonic(geometry, m0), cl_supersonic(geometry, m1),
        _cl_subsonic_slope(geometry, m0), _cl_supersonic_slope(geometry, m1),
    )


def design_derivatives(geometry: WingGeometry, dynamic_pressure: float, mach: float) -> DesignAero:
    if dynamic_pressure < 0.0:
        raise ValueError(f"dynamic pressure must be non-negative, got {dynamic_pressure}")
    cl = design_cl(geometry, mach)
    k = dynamic_pressure * cl
    g = geometry
    return DesignAero(
        lift_coefficient_slope=cl,
        m_alpha=k * (g.canard_area * g.canard_arm - g.tail_area * g.tail_arm),
        m_delta=k * g.canard_area * g.canard_arm,
        l_alpha=k * (g.canard_area + g.tail_area),
    )


# ---------------------------------------------------------------- truth tables


@dataclass(frozen=True)
class TruthCoefficients:
    """Non-dimensional truth coefficients at the instantaneous CoG."""

    cl_alpha: float
    cm_alpha: float
    cm_q: float
    cm_delta: float
    clamped: bool = False


class _Pchip:
    """Scalar evaluator over the piecewise cubic built by scipy's PCHIP."""

    __slots__ = ("x", "c", "n")

    def __init__(self, x: np.ndarray, y: np.ndarray) -> None:
        pp = PchipInterpolator(x, y, extrapolate=False)
        self.x = [float(v) for v in pp.x]
        self.c = [tuple(float(v) for v in pp.c[:, i]) for i in range(pp.c.shape[1])]
        self.n = len(self.x) - 1

    def __call__(self, xq: float) -> float:
        i = bisect.bisect_right(self.x, xq) - 1
        if i < 0:
            i = 0
        elif i >= self.n:
            i = self.n - 1
        d = xq - self.x[i]
        c3, c2, c1, c0 = self.c[i]
        return ((c3 * d + c2) * d + c1) * d + c0


@dataclass(frozen=True)
class AeroTables:
    mach_knots: tuple[float, ...]
    cl_alpha: tuple[float, ...]
    cm_alpha_ref: tuple[float, ...]
    cm_q: tuple[float, ...]
    cm_delta: tuple[float, ...]
    reference_station: float
    _interp: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.mach_knots)
        if n == 0:
            raise ValueError("aerodynamic tables are empty")
        for name in ("cl_alpha", "cm_alpha_ref", "cm_q", "cm_delta"):
            col = getattr(self, name)
            if len(col) != n:
                raise ValueError(f"column {name} has {len(col)} rows, expected {n}")
            object.__setattr__(self, name, tuple(float(v) for v in col))
        knots = tuple(float(v) for v in self.mach_knots)
        object.__setattr__(self, "mach_knots", knots)
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise ValueError("mach_knots must be strictly increasing")
        if n < 2:
            raise ValueError("aerodynamic tables need at least two Mach knots")
        if not 0.0 <= self.reference_station <= 1.0:
            raise ValueError("reference_station must be a fraction of body length")
        x = np.asarray(knots)
        interp = tuple(_Pchip(x, np.asarray(getattr(self, name)))
                       for name in ("cl_alpha", "cm_alpha_ref", "cm_q", "cm_delta"))
        object.__setattr__(self, "_interp", interp)

    @property
    def mach_range(self) -> tuple[float, float]:
        return self.mach_knots[0], self.mach_knots[-1]

    def interpolate(self, mach: float) -> tuple[float, float, float, float, bool]:
        """Raw ``(cl_alpha, cm_alpha_ref, cm_q, cm_delta, clamped)`` at ``mach``."""
        lo = self.mach_knots[0]
        hi = self.mach_knots[-1]
        clamped = False
        if mach < lo:
            mach, clamped = lo, True
        elif mach > hi:
            mach, clamped = hi, True
        f_cl, f_cm, f_q, f_d = self._interp
        return f_cl(mach), f_cm(mach), f_q(mach), f_d(mach), clamped


def truth_coefficients(
    tables: AeroTables, mach: float, cog_fraction: float, canard_fraction: float
) -> TruthCoefficients:
    """Interpolate the truth tables and move the moment reference to the CoG.

    ``canard_fraction`` is ``S_c / S_ref``; the canard lift it implies
    sets how much the control moment arm changes as the CoG travels.
    Mach values outside the knot range are clamped (``clamped=True``).
    """
    cl, cm_ref, cm_q, cm_d, clamped = tables.interpolate(mach)
    shift = cog_fraction - tables.reference_station
    return TruthCoefficients(
        cl_alpha=cl,
        cm_alpha=cm_ref + cl * shift,
        cm_q=cm_q,
        cm_delta=cm_d + cl * canard_fraction * shift,
        clamped=clamped,
    )


@dataclass(frozen=True)
class PerturbationProfile:
    """Mach-dependent departure of the truth tables from the design model.

    Inside the transonic band both perturbations follow a ``sin^2`` bump
    peaking mid-band. ``cp_shift_amplitude`` is the centre-of-lift shift in
    body lengths, positive aft. ``jitter`` is the standard deviation of a
    seeded per-knot multiplicative noise on ``cl_alpha``.
    """

    cl_alpha_amplitude: float = 0.25
    cp_shift_amplitude: float = 0.10
    jitter: float = 0.02
    band: tuple[float, float] | None = None  # defaults to (0.85, sec(sweep))

    @classmethod
    def zero(cls) -> PerturbationProfile:
        return cls(cl_alpha_amplitude=0.0, cp_shift_amplitude=0.0, jitter=0.0)

    def bump(self, mach: float, geometry: WingGeometry) -> float:
        m0, m1 = self.band if self.band is not None else (SUBSONIC_LIMIT, geometry.supersonic_onset)
        if mach <= m0 or mach >= m1:
            return 0.0
        return math.sin(math.pi * (mach - m0) / (m1 - m0)) ** 2


def default_mach_knots() -> tuple[float, ...]:
    lo, hi = TABLE_MACH_RANGE
    knots = [round(lo + 0.05 * i, 10) for i in range(int(round((hi - lo) / 0.05)) + 1)]
    if knots[-1] < hi:
        knots.append(hi)
    return tuple(knots)


def synthesize_truth_tables(
    geometry: WingGeometry,
    profile: PerturbationProfile | None = None,
    seed: int = 0,
    reference_station: float = 0.53,
    mach_knots: tuple[float, ...] | None = None,
) -> AeroTables:
    """Build synthetic truth tables around the design model.

    With :meth:`PerturbationProfile.zero` the tables reproduce the design
    lift slope exactly and the design moments about ``reference_station``.
    """
    profile = PerturbationProfile() if profile is None else profile
    knots = default_mach_knots() if mach_knots is None else tuple(mach_knots)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(len(knots))

    g = geometry
    s_ref, l = g.reference_area, g.reference_length
    arm_alpha = (g.canard_area * g.canard_arm - g.tail_area * g.tail_arm) / (s_ref * l)
    arm_delta = g.canard_area * g.canard_arm / (s_ref * l)
    damping = -2.0 * (g.canard_area * g.canard_arm**2 + g.tail_area * g.tail_arm**2) / (s_ref * l * l)

    cl_col, cm_col, cq_col, cd_col = [], [], [], []
    for mach, n in zip(knots, noise):
        bump = profile.bump(mach, g)
        cl_design = design_cl(g, mach)
        cl = cl_design * (1.0 + profile.cl_alpha_amplitude * bump)
        if profile.jitter:
            cl *= 1.0 + profile.jitter * float(n)
        cp_shift = profile.cp_shift_amplitude * bump
        cl_col.append(cl)
        cm_col.append(cl * (arm_alpha - cp_shift))
        cq_col.append(cl * damping)
        cd_col.append(cl * arm_delta)
    return AeroTables(knots, tuple(cl_col), tuple(cm_col), tuple(cq_col), tuple(cd_col),
                      reference_station)


def design_moment_coefficient(geometry: WingGeometry, mach: float) -> float:
    """Design-model ``cm_alpha`` in table units, for divergence reports."""
    g = geometry
    arm = (g.canard_area * g.canard_arm - g.tail_area * g.tail_arm) / (g.reference_area * g.reference_length)
    return design_cl(g, mach) * arm


def table_divergence(tables: AeroTables, geometry: WingGeometry,
                     band: tuple[float, float] | None = None) -> dict[str, float]:
    """Maximum relative truth/design divergence at the knots (optionally within ``band``)."""
    max_cl = 0.0
    max_cm = 0.0
    for i, mach in enumerate(tables.mach_knots):
        if band is not None and not band[0] < mach < band[1]:
            continue
        cl_d = design_cl(geometry, mach)
        cm_d = design_moment_coefficient(geometry, mach)
        max_cl = max(max_cl, abs(tables.cl_alpha[i] - cl_d) / abs(cl_d))
        max_cm = max(max_cm, abs(tables.cm_alpha_ref[i] - cm_d) / abs(cm_d))
    return {"cl_alpha": max_cl, "cm_alpha": max_cm}


# ---------------------------------------------------------------- file format

_HEADER = "# mach cl_alpha cm_alpha_ref cm_q cm_delta"


def format_tables(tables: AeroTables) -> str:
    lines = [_HEADER, f"# reference_station {tables.reference_station!r}"]
    for row in zip(tables.mach_knots, tables.cl_alpha, tables.cm_alpha_ref, tables.cm_q,
                   tables.cm_delta):
        lines.append(" ".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def write_tables(tables: AeroTables, path: str | Path) -> None:
    Path(path).write_text(format_tables(tables))


def parse_tables(text: str) -> AeroTables:
    lines = text.splitlines()
    if not lines or lines[0].split() != _HEADER.split():
        raise TableFormatError(f"line 1: expected header {_HEADER!r}")
    if len(lines) < 2:
        raise TableFormatError("line 2: missing '# reference_station <fraction>' line")
    meta = lines[1].split()
    if len(meta) != 3 or meta[:2] != ["#", "reference_station"]:
        raise TableFormatError("line 2: expected '# reference_station <fraction>'")
    try:
        station = float(meta[2])
    except ValueError:
        raise TableFormatError(f"line 2: reference_station {meta[2]!r} is not a number") from None

    cols: list[list[float]] = [[], [], [], [], []]
    for lineno, raw in enumerate(lines[2:], start=3):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 5:
            raise TableFormatError(f"line {lineno}: expected 5 columns, found {len(parts)}")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise TableFormatError(f"line {lineno}: non-numeric value in {raw!r}") from None
        if not all(math.isfinite(v) for v in vals):
            raise TableFormatError(f"line {lineno}: non-finite value")
        if cols[0] and vals[0] <= cols[0][-1]:
            raise TableFormatError(f"line {lineno}: Mach {vals[0]} not above previous row")
        for c, v in zip(cols, vals):
            c.append(v)
    if len(cols[0]) < 2:
        raise TableFormatError("table needs at least two data rows")
    return AeroTables(*(tuple(c) for c in cols), reference_station=station)


def read_tables(path: str | Path) -> AeroTables:
    return parse_tables(Path(path).read_text())
