"""Gain tuning by trial runs.

No gains come with the control law, so they were picked by hand. This
script replays the main trials: the starting point, then each knob moved
one at a time, all on the ideal default scenario. Each run takes a few
seconds.

Run:  python3 demos/04_gain_tuning.py
"""

from dataclasses import replace

from missile_smc.harness.metrics import compute_metrics
from missile_smc.harness.scenario import Scenario
from missile_smc.harness.simulation import resolve_tables, run_simulation
from missile_smc.smc import ControllerConfig

base = Scenario()
tables = resolve_tables(base)

trials = [
    ("initial guess: eta 40, eta1 200, a 2", dict(eta=40.0, eta1=200.0, exponent_a=2.0)),
    ("a 2 -> 1.2 (steeper near s = 0)", dict(eta=40.0, eta1=200.0, exponent_a=1.2)),
    ("eta1 200 -> 1000", dict(eta=40.0, eta1=1000.0, exponent_a=1.2)),
    ("eta 40 -> 100 (shipped default)", dict()),
    ("c 20 -> 10", dict(c=10.0)),
    ("c 20 -> 40", dict(c=40.0)),
    ("ki 50 -> 0 (no observer)", dict(ki=0.0)),
]

print(f"{'trial':<38} {'settle [s]':>20} {'overshoot':>18} {'tv':>7}")
for label, kw in trials:
    cfg = replace(ControllerConfig(), **kw)
    sc = replace(base, controller=cfg)
    traj = run_simulation(sc, tables=tables)
    m = compute_metrics(traj, sc)
    settle = "/".join(f"{e.settling_time:.3f}" for e in m.edges)
    over = "/".join(f"{100 * e.overshoot_fraction:.1f}" for e in m.edges)
    print(f"{label:<38} {settle:>20} {over + '%':>18} {m.chattering_tv:7.3f}")

# Targets: settle within 0.25 s on the first two edges and 0.35 s on the
# third, overshoot at most 4 %. The exponent has to stay above 1 so that the
# reaching term is flat at s = 0, which is what keeps chattering low.
# The ki = 0 row matches the default to the printed digits: at ki = 50 the
# observer correction is too slow to matter inside one 3 s edge.
