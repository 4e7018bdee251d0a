"""Three-step command on the default scenario with the super-twisting law.

Prints the step metrics, a coarse alpha trace and the boost history, and
writes the CSV files next to this script ("out/").

Run:  python3 demos/02_step_response.py
"""

import math
from pathlib import Path

import numpy as np

from missile_smc.cli import format_summary
from missile_smc.harness.export import export_metrics_csv, export_trajectory_csv
from missile_smc.harness.metrics import compute_metrics
from missile_smc.harness.scenario import Scenario
from missile_smc.harness.simulation import run_simulation

sc = Scenario()
traj = run_simulation(sc)
metrics = compute_metrics(traj, sc)
print(format_summary(metrics))

t = traj["time"]
print("\n   t [s]  cmd [deg]  alpha [deg]  delta [deg]   Mach   mass   CoG")
for tk in np.arange(0.0, sc.duration + 1e-9, 0.25):
    i = int(np.argmin(np.abs(t - tk)))
    print(f"  {t[i]:6.2f}  {math.degrees(traj['alpha_cmd'][i]):9.2f}  "
          f"{math.degrees(traj['alpha'][i]):11.3f}  {math.degrees(traj['delta'][i]):11.3f}  "
          f"{traj['mach'][i]:5.2f}  {traj['mass'][i]:5.2f}  {traj['cog'][i]:.3f}")

out = Path(__file__).resolve().parent / "out"
out.mkdir(exist_ok=True)
export_trajectory_csv(traj, out / "step_trajectory.csv")
export_metrics_csv(metrics, out / "step_metrics.csv")
print(f"\nCSV written to {out}")
