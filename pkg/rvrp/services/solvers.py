import time
from typing import Callable

import numpy as np

from rvrp.core.config import settings
from rvrp.core.logging import get_logger
from rvrp.errors import InputErrors, InstanceMismatchError, SizeGuardError
from rvrp.schemas.instance import Assignment, AssignmentInstance, Edge
from rvrp.schemas.report import BoundCertificate, SolverMethod, SolverReport
from rvrp.services.instance import instance_service
from rvrp.services.matroid import IndependenceContext
from rvrp.services.objective import GoalState, ObjectiveCache, merge, new_cache
from rvrp.utils.assignment import min_cost_matching
from rvrp.utils.seeds import as_rng

log = get_logger(__name__)


class SolverService:
    def greedy(self, instance: AssignmentInstance, O: Assignment | None = None) -> SolverReport:
        """
        Repeatedly commit the eligible edge with the largest marginal
        decrease; ties go to the lowest (robot, goal).
        """
        start = time.perf_counter()
        O, cache, ctx = self._prepare(instance, O)
        J0 = cache.total
        while len(ctx.selected) < ctx.rank:
            best, best_gain = None, -np.inf
            for edge in sorted(ctx.eligible_edges()):
                gain = cache.marginal_decrease(edge)
                if gain > best_gain:
                    best, best_gain = edge, gain
            cache.commit(best)
            ctx.add(best)
            log.debug(f"greedy picked {best} gain={best_gain:.6g} J={cache.total:.6g}")
        return self._report(SolverMethod.greedy, instance, O, cache, J0, start)

    def exhaustive_optimal(
        self, instance: AssignmentInstance, O: Assignment | None = None
    ) -> SolverReport:
        """
        Minimum J over every independent A of full rank. Per-goal costs of
        every subset of free robots are built incrementally from the subset
        without its lowest member; the split of a robot set among goals is
        then found goal by goal over its sub-subsets.
        """
        start = time.perf_counter()
        O, cache, ctx = self._prepare(instance, O)
        J0 = cache.total
        free = ctx.free_robots
        n, k, M = len(free), ctx.rank, instance.n_goals
        if n > settings.OPTIMAL_MAX_FREE:
            log.warning(f"optimal refused for {n} free robots")
            raise SizeGuardError("exhaustive optimal", M * 2.0**n, M * 2.0**settings.OPTIMAL_MAX_FREE)
        if k == 0:
            return self._report(SolverMethod.optimal, instance, O, cache, J0, start)

        masks = [m for m in range(1 << n) if bin(m).count("1") <= k]
        calls = 0
        goal_values: list[dict[int, float]] = []
        for goal in range(M):
            states: dict[int, GoalState] = {0: cache.states[goal]}
            values = {0: cache.per_goal_cost[goal]}
            for mask in masks[1:]:
                low = (mask & -mask).bit_length() - 1
                parent = states[mask & (mask - 1)]
                robot = free[low]
                belief = instance.beliefs[robot]
                state = merge(parent, belief.nodes, belief.probs, instance.goal_costs(robot, goal))
                calls += 1
                values[mask] = state.value
                if bin(mask).count("1") < k:
                    states[mask] = state
            goal_values.append(values)

        best = dict(goal_values[0])
        choices: list[dict[int, int]] = [{m: m for m in masks}]
        for goal in range(1, M):
            layer, choice = {}, {}
            for mask in masks:
                best_value, best_sub = np.inf, 0
                sub = mask
                while True:
                    value = best[mask & ~sub] + goal_values[goal][sub]
                    if value < best_value:
                        best_value, best_sub = value, sub
                    if sub == 0:
                        break
                    sub = (sub - 1) & mask
                layer[mask], choice[mask] = best_value, best_sub
            best = layer
            choices.append(choice)

        full = min((m for m in masks if bin(m).count("1") == k), key=lambda m: (best[m], m))
        edges: list[Edge] = []
        mask = full
        for goal in range(M - 1, -1, -1):
            sub = choices[goal][mask]
            edges += [(free[b], goal) for b in range(n) if sub >> b & 1]
            mask &= ~sub
        for edge in sorted(edges):
            cache.commit(edge)
        cache.calls += calls
        return self._report(SolverMethod.optimal, instance, O, cache, J0, start)

    def slice_greedy(
        self, instance: AssignmentInstance, O: Assignment | None = None
    ) -> SolverReport:
        """
        Round-robin redundancy: every goal in turn takes its best free
        robot while a full round fits in the budget; the last partial
        round goes to the goals with the largest marginal decrease.
        """
        start = time.perf_counter()
        O, cache, ctx = self._prepare(instance, O)
        J0 = cache.total
        M = instance.n_goals
        while ctx.rank - len(ctx.selected) >= M:
            for goal in range(M):
                edge, _ = self._best_edge(cache, ctx.free_robots, [goal])
                cache.commit(edge)
                ctx.add(edge)
        served: set[int] = set()
        while len(ctx.selected) < ctx.rank:
            goals = [j for j in range(M) if j not in served]
            edge, _ = self._best_edge(cache, ctx.free_robots, goals)
            cache.commit(edge)
            ctx.add(edge)
            served.add(edge[1])
        return self._report(SolverMethod.slice_greedy, instance, O, cache, J0, start)

    def random_assign(
        self,
        instance: AssignmentInstance,
        O: Assignment | None = None,
        rng_seed: int | np.random.Generator | None = None,
    ) -> SolverReport:
        start = time.perf_counter()
        O, cache, ctx = self._prepare(instance, O)
        J0 = cache.total
        rng = as_rng(rng_seed)
        robots = rng.choice(ctx.free_robots, size=ctx.rank, replace=False) if ctx.rank else []
        goals = rng.integers(0, instance.n_goals, size=ctx.rank)
        for robot, goal in zip(robots, goals):
            edge = (int(robot), int(goal))
            cache.commit(edge)
            ctx.add(edge)
        return self._report(SolverMethod.random, instance, O, cache, J0, start)

    def hungarian_only(
        self, instance: AssignmentInstance, O: Assignment | None = None
    ) -> SolverReport:
        start = time.perf_counter()
        O, cache, _ = self._prepare(instance, O)
        return self._report(SolverMethod.hungarian_only, instance, O, cache, cache.total, start)

    def true_oracle(
        self, instance: AssignmentInstance, O: Assignment | None = None
    ) -> SolverReport:
        """
        Hungarian on noise-free travel times. ``cost_J`` is the mean true
        travel time of that matching; ``J0`` is the mean true travel time
        of the noisy initial assignment.
        """
        start = time.perf_counter()
        if instance.truth is None:
            raise InputErrors("the noise-free oracle needs the true robot nodes")
        true_nodes = np.asarray(instance.truth.true_nodes, dtype=np.int64)
        true_cost = instance.table.times[:, true_nodes]
        matched = Assignment.of(
            (robot, goal) for goal, robot in min_cost_matching(true_cost)
        )
        O = instance_service.initial_assignment(instance) if O is None else O
        return SolverReport(
            method=SolverMethod.true_oracle,
            O=matched,
            cost_J=_mean_true_cost(true_cost, matched),
            J0=_mean_true_cost(true_cost, O),
            wall_time=time.perf_counter() - start,
            instance_key=instance_service.fingerprint(instance),
        )

    def verify_bound(
        self, report_greedy: SolverReport, report_optimal: SolverReport
    ) -> BoundCertificate:
        """Check J_greedy <= (J_opt + J_0) / 2."""
        if (
            report_greedy.instance_key != report_optimal.instance_key
            or report_greedy.O != report_optimal.O
        ):
            raise InstanceMismatchError("bound check needs reports on the same instance and O")
        rhs = 0.5 * (report_optimal.cost_J + report_optimal.J0)
        return BoundCertificate(
            holds=report_greedy.cost_J <= rhs + settings.TOLERANCE,
            lhs=report_greedy.cost_J,
            rhs=rhs,
        )

    @property
    def methods(self) -> dict[SolverMethod, Callable[..., SolverReport]]:
        return {
            SolverMethod.greedy: self.greedy,
            SolverMethod.optimal: self.exhaustive_optimal,
            SolverMethod.slice_greedy: self.slice_greedy,
            SolverMethod.random: self.random_assign,
            SolverMethod.hungarian_only: self.hungarian_only,
            SolverMethod.true_oracle: self.true_oracle,
        }

    def solve(
        self,
        method: SolverMethod | str,
        instance: AssignmentInstance,
        O: Assignment | None = None,
        rng_seed: int | np.random.Generator | None = None,
    ) -> SolverReport:
        method = SolverMethod(method)
        if method == SolverMethod.random:
            return self.random_assign(instance, O, rng_seed)
        return self.methods[method](instance, O)

    def _prepare(
        self, instance: AssignmentInstance, O: Assignment | None
    ) -> tuple[Assignment, ObjectiveCache, IndependenceContext]:
        O = instance_service.initial_assignment(instance) if O is None else O
        cache = new_cache(instance, O)
        ctx = IndependenceContext(O, instance.n_robots, instance.n_goals, instance.deployment_cap)
        return O, cache, ctx

    @staticmethod
    def _best_edge(
        cache: ObjectiveCache, robots: list[int], goals: list[int]
    ) -> tuple[Edge, float]:
        best, best_gain = None, -np.inf
        for robot in robots:
            for goal in goals:
                gain = cache.marginal_decrease((robot, goal))
                if gain > best_gain:
                    best, best_gain = (robot, goal), gain
        return best, best_gain

    @staticmethod
    def _report(
        method: SolverMethod,
        instance: AssignmentInstance,
        O: Assignment,
        cache: ObjectiveCache,
        J0: float,
        start: float,
    ) -> SolverReport:
        A = Assignment.of(e for e in cache.assigned.items() if e not in O.edges)
        report = SolverReport(
            method=method,
            A=A,
            O=O,
            cost_J=cache.total,
            J0=J0,
            objective_calls=cache.calls,
            wall_time=time.perf_counter() - start,
            instance_key=instance_service.fingerprint(instance),
        )
        log.debug(
            f"{method.value}: |A|={len(A)} J={report.cost_J:.6g} J0={J0:.6g} "
            f"calls={report.objective_calls}"
        )
        return report


def _mean_true_cost(true_cost: np.ndarray, assignment: Assignment) -> float:
    return float(np.mean([true_cost[goal, robot] for robot, goal in assignment]))


solver_service = SolverService()
