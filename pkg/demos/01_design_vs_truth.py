"""Design model against the synthetic truth tables.

The controller only knows the closed-form lift estimates; the plant flies on
Mach-indexed tables that drift away from them in the transonic band. This
walk-through prints both so the size of the mismatch is visible.

Run:  python3 demos/01_design_vs_truth.py
"""

import numpy as np

from missile_smc.aero import (SUBSONIC_LIMIT, PerturbationProfile, WingGeometry, design_cl,
                              design_moment_coefficient, supersonic_junction,
                              synthesize_truth_tables, table_divergence, truth_coefficients)

geo = WingGeometry()
print(f"sweep {np.degrees(geo.leading_edge_sweep):.0f} deg, AR {geo.aspect_ratio}, "
      f"S_ref {geo.reference_area:.4f} m^2, l {geo.reference_length} m")

# The subsonic estimate stops at 0.85; the supersonic one is singular at
# sec(sweep) and is only used beyond the junction, where its slope peaks.
m1 = supersonic_junction(geo)
print(f"bridge: M {SUBSONIC_LIMIT} -> {m1:.3f} (sec(sweep) = {geo.supersonic_onset:.3f})")

truth = synthesize_truth_tables(geo)
flat = synthesize_truth_tables(geo, PerturbationProfile.zero())

print("\n  Mach   design CL   truth CL   design cm   truth cm   diff")
for mach in (0.3, 0.6, 0.85, 1.1, 1.4, 1.7, 2.0, 2.3, 3.0, 4.0, 4.6):
    cl_t, cm_t, *_ = truth.interpolate(mach)
    cl_d = design_cl(geo, mach)
    cm_d = design_moment_coefficient(geo, mach)
    print(f"  {mach:4.2f}  {cl_d:9.4f}  {cl_t:9.4f}  {cm_d:10.5f}  {cm_t:9.5f}  "
          f"{100 * (cm_t - cm_d) / abs(cm_d):+6.1f}%")

div = table_divergence(truth, geo, band=(SUBSONIC_LIMIT, geo.supersonic_onset))
print(f"\nmax transonic divergence: cl {100 * div['cl_alpha']:.1f}%, cm {100 * div['cm_alpha']:.1f}%")
print(f"zero profile divergence: {table_divergence(flat, geo)}")

# Moving the CoG forward during the burn makes the truth airframe stiffer
# than the design model, which keeps its arms about the launch CoG.
print("\n  CoG    cm_alpha(M=2)   cm_delta(M=2)")
for cog in (0.53, 0.47, 0.41, 0.35):
    tc = truth_coefficients(flat, 2.0, cog, geo.canard_fraction)
    print(f"  {cog:.2f}   {tc.cm_alpha:12.5f}   {tc.cm_delta:12.5f}")
