"""Run one scenario under several reaching laws and rank their chattering."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..aero import AeroTables
from ..smc import ReachingLaw
from .metrics import Metrics, compute_metrics
from .scenario import Scenario
from .simulation import Trajectory, resolve_tables, run_simulation


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[tuple[ReachingLaw, Metrics], ...]
    trajectories: tuple[Trajectory, ...] = ()

    @property
    def laws(self) -> tuple[ReachingLaw, ...]:
        return tuple(law for law, _ in self.rows)

    def metrics_for(self, law: ReachingLaw | str) -> Metrics:
        law = ReachingLaw(law)
        for lw, m in self.rows:
            if lw is law:
                return m
        raise KeyError(law.value)

    def chattering_order(self) -> tuple[ReachingLaw, ...]:
        """Laws sorted by increasing chattering; ties keep the input order."""
        seen = []
        for law, m in sorted(self.rows, key=lambda r: r[1].chattering_tv):
            if law not in seen:
                seen.append(law)
        return tuple(seen)

    def separations(self, order: Sequence[ReachingLaw | str]) -> list[float]:
        """Relative gaps ``(tv[i+1] - tv[i]) / tv[i+1]`` along ``order``."""
        tv = [self.metrics_for(law).chattering_tv for law in order]
        return [(b - a) / b if b > 0 else float("nan") for a, b in zip(tv, tv[1:])]

    def ordering_holds(self, order: Sequence[ReachingLaw | str], min_separation: float = 0.0) -> bool:
        """True when chattering strictly increases along ``order`` with every gap >= ``min_separation``."""
        gaps = self.separations(order)
        return all(g > 0.0 and g >= min_separation for g in gaps)


def _run_one(args: tuple[Scenario, AeroTables, ReachingLaw]) -> tuple[Trajectory, Metrics]:
    scenario, tables, law = args
    sc = scenario.with_law(law)
    traj = run_simulation(sc, tables=tables)
    return traj, compute_metrics(traj, sc)


def compare_reaching_laws(scenario: Scenario, laws: Iterable[ReachingLaw | str],
                          tables: AeroTables | None = None, workers: int = 1,
                          keep_trajectories: bool = False) -> ComparisonTable:
    """Run ``scenario`` once per law with the same seed and truth tables.

    Gains are shared; only the law changes (its exponent reverts to that
    law's default). A law listed twice is simulated once and reported twice.
    Rows come back in the order given, whatever ``workers`` is.
    """
    laws = [ReachingLaw(law) for law in laws]
    if len(laws) < 2:
        raise ValueError("compare_reaching_laws needs at least two laws")
    tables = resolve_tables(scenario) if tables is None else tables
    unique = list(dict.fromkeys(laws))
    jobs = [(scenario, tables, law) for law in unique]
    if workers > 1 and len(unique) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(unique))) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(job) for job in jobs]
    by_law = dict(zip(unique, results))
    rows = tuple((law, by_law[law][1]) for law in laws)
    trajs = tuple(by_law[law][0] for law in laws) if keep_trajectories else ()
    return ComparisonTable(rows, trajs)
