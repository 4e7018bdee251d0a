import math

import pytest

from missile_smc.harness.compare import compare_reaching_laws
from missile_smc.harness.scenario import Scenario
from missile_smc.smc import ReachingLaw

SHORT = Scenario(duration=0.6, command_schedule=((0.1, math.radians(5.0)),))


def test_law_against_itself_gives_identical_rows():
    table = compare_reaching_laws(SHORT, ["tanh", "tanh"])
    assert repr(table.rows[0][1]) == repr(table.rows[1][1])


def test_needs_two_laws():
    with pytest.raises(ValueError):
        compare_reaching_laws(SHORT, ["tanh"])


def test_rows_keep_input_order_and_parallel_matches_serial():
    laws = ["power", "tanh", "sgn"]
    serial = compare_reaching_laws(SHORT, laws)
    parallel = compare_reaching_laws(SHORT, laws, workers=2)
    assert [lw.value for lw in serial.laws] == laws
    assert repr(serial.rows) == repr(parallel.rows)  # repr: nan extras compare unequal


def test_keep_trajectories():
    t = compare_reaching_laws(SHORT, ["tanh", "power"], keep_trajectories=True)
    assert len(t.trajectories) == 2
    assert not (t.trajectories[0]["delta"] == t.trajectories[1]["delta"]).all()


def test_only_the_law_changes(monkeypatch):
    from missile_smc.harness import compare as mod

    seen = []
    real = mod.run_simulation

    def spy(sc, tables=None):
        seen.append(sc)
        return real(sc, tables=tables)

    monkeypatch.setattr(mod, "run_simulation", spy)
    compare_reaching_laws(SHORT, ["tanh", "st_exp"])
    a, b = seen
    assert a.seed == b.seed
    assert a.controller.c == b.controller.c and a.controller.eta == b.controller.eta


def test_metrics_for_and_separations(default_comparison):
    t = default_comparison
    tv = [t.metrics_for(lw).chattering_tv for lw in ("st_exp", "tanh")]
    assert t.separations(["st_exp", "tanh"]) == [pytest.approx((tv[1] - tv[0]) / tv[1])]
    with pytest.raises(KeyError):
        t.metrics_for(ReachingLaw.ST_POWER)


def test_default_chattering_ordering(default_comparison):
    order = ("st_exp", "tanh", "power")
    assert default_comparison.ordering_holds(order)
    assert default_comparison.chattering_order()[:3] == tuple(ReachingLaw(x) for x in order)


@pytest.mark.xfail(strict=True, reason=(
    "only the super-twisting law rejects the boost-phase model mismatch; the single-surface "
    "laws settle into delay-limited limit cycles with 20-80% steady-state error"))
def test_all_laws_track_within_five_percent(default_comparison):
    for law, m in default_comparison.rows:
        assert all(e.steady_state_error_fraction < 0.05 for e in m.edges), law.value


def test_super_twisting_tracks_within_five_percent(default_comparison):
    m = default_comparison.metrics_for("st_exp")
    assert all(e.steady_state_error_fraction < 0.05 for e in m.edges)
