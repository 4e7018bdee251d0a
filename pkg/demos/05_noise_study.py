"""Sensor noise study.

+-2 deg uniform AoA noise sampled at 200 Hz goes through a 100 Hz critically
damped filter whose rate state is the controller's e-dot. This study shows
how much of that noise survives and what it does to tracking.

Run:  python3 demos/05_noise_study.py
"""

import math
from dataclasses import replace

import numpy as np

from missile_smc.harness.metrics import compute_metrics
from missile_smc.harness.scenario import Scenario
from missile_smc.harness.simulation import resolve_tables, run_simulation
from missile_smc.plant import FilterState, SensorConfig, sensor_filter_step, sensor_sample

# 1. Open loop: filter a constant AoA seen through the noisy sensor.
cfg = SensorConfig()
rng = np.random.default_rng(0)
dt = 1e-4
f = FilterState(0.0, 0.0, 0.0, 0.0)
meas = (0.0, 1.0)
alpha_f, rate_f = [], []
for k in range(int(2.0 / dt)):
    if k % int(1.0 / (cfg.sample_rate * dt)) == 0:
        meas = sensor_sample(0.0, 1.0, cfg, rng)
    f = sensor_filter_step(f, meas[0], meas[1], dt, cfg)
    if k * dt > 0.1:
        alpha_f.append(f.alpha)
        rate_f.append(f.alpha_rate)
print(f"filtered alpha noise std {math.degrees(np.std(alpha_f)):.2f} deg, "
      f"filtered rate noise std {np.std(rate_f):.2f} rad/s")
print("with c = 20 the rate noise dominates s = e' + c e by a factor of about",
      f"{np.std(rate_f) / (20 * np.std(alpha_f)):.0f}")

# 2. Closed loop: default gains over five seeds, and one lower-gain set.
base = replace(Scenario(), noise_enabled=True)
tables = resolve_tables(base)
for label, kw in (("default gains", {}), ("eta 20, eta1 2500, c 30", dict(eta=20.0, eta1=2500.0, c=30.0))):
    rows = []
    for seed in range(5):
        sc = replace(base, seed=seed, controller=replace(base.controller, **kw))
        m = compute_metrics(run_simulation(sc, tables=tables), sc)
        rows.append([e.steady_state_error_fraction for e in m.edges])
    mean = np.mean(rows, axis=0)
    print(f"{label:<26} mean sse per edge: " + " / ".join(f"{100 * x:.1f}%" for x in mean))

# The target is 5 % on every edge. The residual error is mostly alpha
# jitter near the lightly damped short-period frequency, which the noisy
# reaching term keeps exciting; lowering the gains trades it for a slower
# integral that lags the boost-phase mismatch.
