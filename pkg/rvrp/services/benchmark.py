from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache, partial
from typing import Iterable

import numpy as np

from rvrp.core.config import settings
from rvrp.core.logging import get_logger
from rvrp.errors import ParameterError
from rvrp.schemas.experiment import ExperimentConfig, SeriesRow, TrialOutcome
from rvrp.schemas.graph import TransportGraph
from rvrp.schemas.instance import Assignment
from rvrp.schemas.noise import NoiseKind, NoiseSpec
from rvrp.schemas.report import SolverMethod
from rvrp.services.graph import graph_service
from rvrp.services.instance import instance_service
from rvrp.services.results import results_service
from rvrp.services.solvers import solver_service
from rvrp.utils.seeds import derive_rng
from rvrp.utils.stats import mean_ci

log = get_logger(__name__)

BOUND = "bound"


@lru_cache(maxsize=8)
def _grid(rows: int, cols: int, spacing: float, speed: float) -> TransportGraph:
    return graph_service.build_grid(rows, cols, spacing, speed)


def realized_waits(true_times: np.ndarray, edges: Assignment, n_goals: int) -> list[float]:
    """Per goal, the true travel time of the fastest robot assigned to it."""
    waits = [np.inf] * n_goals
    for robot, goal in edges:
        waits[goal] = min(waits[goal], float(true_times[robot, goal]))
    return waits


class BenchmarkService:
    def sample_speeds(
        self, rng: np.random.Generator, n: int, mean: float, std: float
    ) -> np.ndarray:
        """Normal speeds truncated below at ``mean * SPEED_FLOOR_RATIO`` by resampling."""
        floor = mean * settings.SPEED_FLOOR_RATIO
        speeds = rng.normal(mean, std, size=n)
        low = speeds < floor
        while np.any(low):
            speeds[low] = rng.normal(mean, std, size=int(low.sum()))
            low = speeds < floor
        return speeds

    def run_trial(self, config: ExperimentConfig, trial_seed: int) -> list[TrialOutcome]:
        """
        One random scenario: true robot and goal nodes, robot speeds and,
        per noise model, one set of noisy reports shared by every method
        and deployment cap.
        """
        graph = _grid(config.rows, config.cols, config.spacing, config.speed_mean)
        N, M = config.n_robots, config.n_goals
        if N + M > graph.n_nodes:
            raise ParameterError(f"N + M = {N + M} exceeds the {graph.n_nodes} grid nodes")
        rng = derive_rng(config.seed, trial_seed)
        nodes = rng.choice(graph.n_nodes, size=N + M, replace=False)
        robots, goals = nodes[:N].tolist(), nodes[N:].tolist()
        speeds = self.sample_speeds(rng, N, config.speed_mean, config.speed_std)
        table = graph_service.shortest_travel_times(graph, goals)
        true_times = table.times[:, robots].T * (config.speed_mean / speeds[:, None])

        outcomes: list[TrialOutcome] = []
        for noise in config.noises:
            instance = instance_service.build_instance(
                graph, goals, robots, noise, max(config.caps), config.p_min, rng, table=table
            )
            O = instance_service.initial_assignment(instance)
            baseline = realized_waits(true_times, O, M)
            baseline_mean = float(np.mean(baseline))
            for cap in config.caps:
                capped = instance.with_cap(cap)
                reports = {}
                for method in config.methods:
                    report = solver_service.solve(
                        method, capped, O, rng_seed=int(rng.integers(2**31))
                    )
                    reports[method] = report
                    edges = report.O if method == SolverMethod.true_oracle else report.O.union(report.A)
                    waits = realized_waits(true_times, edges, M)
                    outcomes.append(
                        TrialOutcome(
                            method=method.value,
                            noise=str(noise),
                            deployment_cap=cap,
                            realized_wait_per_goal=waits,
                            normalized=float(np.mean(waits)) / baseline_mean,
                            expected_J=report.cost_J,
                            normalized_expected=report.normalized,
                        )
                    )
                if SolverMethod.optimal in reports:
                    optimal = reports[SolverMethod.optimal]
                    bound = 0.5 * (optimal.cost_J + optimal.J0)
                    outcomes.append(
                        TrialOutcome(
                            method=BOUND,
                            noise=str(noise),
                            deployment_cap=cap,
                            realized_wait_per_goal=[],
                            normalized=bound / optimal.J0,
                            expected_J=bound,
                            normalized_expected=bound / optimal.J0,
                        )
                    )
        return outcomes

    def run_series(
        self, config: ExperimentConfig, jobs: int = 1, series: str | None = None
    ) -> list[SeriesRow]:
        """Mean normalized waits with 95% intervals per (noise, N_d, method)."""
        log.info(
            f"Series {series or config.series}: N={config.n_robots} M={config.n_goals} "
            f"caps={config.caps} noises={[str(n) for n in config.noises]} "
            f"iterations={config.iterations} jobs={jobs}"
        )
        trials = range(config.iterations)
        if jobs > 1 and config.iterations > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(partial(self.run_trial, config), trials))
        else:
            results = [self.run_trial(config, t) for t in trials]
        return self.aggregate(config, (o for trial in results for o in trial), series)

    def run_noise_sweep(
        self,
        config: ExperimentConfig,
        scales: list[float],
        deployment_cap: int,
        jobs: int = 1,
    ) -> list[SeriesRow]:
        """Gaussian noise of each standard deviation in ``scales`` at one deployment cap."""
        noises = [
            NoiseSpec(kind=NoiseKind.gaussian, scale=s) if s > 0 else NoiseSpec()
            for s in scales
        ]
        swept = config.model_copy(update={"noises": noises, "caps": [deployment_cap]})
        return self.run_series(swept, jobs=jobs, series=f"{config.series}-sweep")

    def aggregate(
        self,
        config: ExperimentConfig,
        outcomes: Iterable[TrialOutcome],
        series: str | None = None,
    ) -> list[SeriesRow]:
        grouped: dict[tuple[str, int, str], list[TrialOutcome]] = defaultdict(list)
        for outcome in outcomes:
            grouped[(outcome.noise, outcome.deployment_cap, outcome.method)].append(outcome)
        order = [m.value for m in config.methods] + [BOUND]
        noise_order = [str(n) for n in config.noises]
        rows = []
        for (noise, cap, method), group in sorted(
            grouped.items(),
            key=lambda kv: (noise_order.index(kv[0][0]), kv[0][1], order.index(kv[0][2])),
        ):
            spec = NoiseSpec.parse(noise)
            mean, low, high = mean_ci([o.normalized for o in group])
            waits = [o.mean_wait for o in group if o.realized_wait_per_goal]
            rows.append(
                SeriesRow(
                    series=series or config.series,
                    noise_kind=spec.kind.value,
                    noise_scale=spec.scale,
                    N=config.n_robots,
                    M=config.n_goals,
                    N_d=cap,
                    method=method,
                    mean_norm_wait=mean,
                    ci_low=low,
                    ci_high=high,
                    mean_wait_s=float(np.mean(waits)) if waits else float("nan"),
                    iterations=len(group),
                    mean_norm_expected=float(np.mean([o.normalized_expected for o in group])),
                )
            )
        return rows

    def write_series(self, rows: list[SeriesRow], prefix: str, sweep: bool = False) -> list[str]:
        """Series CSV plus one gnuplot panel per noise model (or one for a sweep)."""
        paths = [f"{prefix}.csv"]
        results_service.write_csv(paths[0], SeriesRow.csv_header(), [r.csv_row() for r in rows])
        methods = list(dict.fromkeys(r.method for r in rows))
        columns = ["sigma" if sweep else "N_d"]
        for method in methods:
            columns += [f"{method}_mean", f"{method}_ci_low", f"{method}_ci_high"]

        panels: dict[str, list[SeriesRow]] = defaultdict(list)
        for row in rows:
            panels["sweep" if sweep else f"{row.noise_kind}_{row.noise_scale:g}"].append(row)
        for panel, panel_rows in panels.items():
            by_x: dict[float, dict[str, SeriesRow]] = defaultdict(dict)
            for row in panel_rows:
                by_x[row.noise_scale if sweep else row.N_d][row.method] = row
            data = []
            for x in sorted(by_x):
                line = [x]
                for method in methods:
                    r = by_x[x].get(method)
                    line += [r.mean_norm_wait, r.ci_low, r.ci_high] if r else [np.nan] * 3
                data.append(line)
            paths.append(results_service.write_plot_data(f"{prefix}_{panel}.dat", columns, data))
        return paths


benchmark_service = BenchmarkService()
