"""
Expected effective waiting time J_O(A) under first-come, first-to-serve.

``exact_cost`` enumerates the joint support of every goal's robot group and
is meant as a test oracle. ``ObjectiveCache`` keeps, per goal, the
distribution of the node where the currently fastest robot truly sits, so
adding a robot costs one pass over |support(goal)| x |support(robot)| pairs.
"""
import math
from functools import reduce
from typing import NamedTuple

import numpy as np

from rvrp.core.config import settings
from rvrp.errors import ConstraintError, SizeGuardError
from rvrp.schemas.instance import Assignment, AssignmentInstance, Edge


class GoalState(NamedTuple):
    """Where the fastest robot of one goal truly sits, and its expected travel time."""

    nodes: np.ndarray
    probs: np.ndarray
    costs: np.ndarray
    value: float

    @classmethod
    def of_robot(cls, instance: AssignmentInstance, robot: int, goal: int) -> "GoalState":
        belief = instance.beliefs[robot]
        costs = instance.goal_costs(robot, goal)
        return cls(belief.nodes, belief.probs, costs, float(belief.probs @ costs))


def expected_min(state: GoalState, probs: np.ndarray, costs: np.ndarray) -> float:
    """Expected travel time of the fastest robot once a robot with ``(probs, costs)`` joins."""
    return float(state.probs @ np.minimum.outer(state.costs, costs) @ probs)


def merge(state: GoalState, nodes: np.ndarray, probs: np.ndarray, costs: np.ndarray) -> GoalState:
    """
    Join a robot to the group. For each pair of locations the incumbent
    keeps the mass unless the newcomer is strictly faster.
    """
    mass = np.outer(state.probs, probs)
    incumbent_wins = state.costs[:, None] <= costs[None, :]
    to_incumbent = np.where(incumbent_wins, mass, 0.0).sum(axis=1)
    to_newcomer = np.where(incumbent_wins, 0.0, mass).sum(axis=0)
    value = float(to_incumbent @ state.costs + to_newcomer @ costs)

    all_nodes = np.concatenate([state.nodes, nodes])
    all_probs = np.concatenate([to_incumbent, to_newcomer])
    all_costs = np.concatenate([state.costs, costs])
    merged, first, inverse = np.unique(all_nodes, return_index=True, return_inverse=True)
    merged_probs = np.bincount(inverse, weights=all_probs, minlength=len(merged))
    keep = merged_probs > 0
    return GoalState(merged[keep], merged_probs[keep], all_costs[first][keep], value)


class ObjectiveCache:
    """
    Incremental evaluator of J over A ∪ O.

    ``marginal_decrease`` only reads the cache, ``commit`` mutates it; a
    frozen cache may be queried from several threads at once.
    """

    def __init__(self, instance: AssignmentInstance):
        self.instance = instance
        self.states: list[GoalState | None] = [None] * instance.n_goals
        self.per_goal_cost = np.zeros(instance.n_goals)
        self.total = 0.0
        self.assigned: dict[int, int] = {}
        self.calls = 0
        self.pairs = 0

    @property
    def per_goal_argmin(self) -> list[dict[int, float]]:
        return [
            {} if s is None else dict(zip(s.nodes.tolist(), s.probs.tolist()))
            for s in self.states
        ]

    def _check(self, edge: Edge) -> tuple[int, int]:
        robot, goal = int(edge[0]), int(edge[1])
        if not 0 <= robot < self.instance.n_robots or not 0 <= goal < self.instance.n_goals:
            raise ConstraintError(f"edge {edge} is outside the instance")
        if robot in self.assigned:
            raise ConstraintError(
                f"robot {robot} is already assigned to goal {self.assigned[robot]}"
            )
        return robot, goal

    def marginal_decrease(self, edge: Edge) -> float:
        """J(current) - J(current ∪ {edge}), without changing the cache."""
        robot, goal = self._check(edge)
        state = self.states[goal]
        if state is None:
            raise ConstraintError(f"goal {goal} has no initial robot")
        belief = self.instance.beliefs[robot]
        self.calls += 1
        self.pairs += len(state.nodes) * len(belief.nodes)
        joined = expected_min(state, belief.probs, self.instance.goal_costs(robot, goal))
        return (self.per_goal_cost[goal] - joined) / self.instance.n_goals

    def commit(self, edge: Edge) -> "ObjectiveCache":
        robot, goal = self._check(edge)
        state = self.states[goal]
        if state is None:
            updated = GoalState.of_robot(self.instance, robot, goal)
        else:
            belief = self.instance.beliefs[robot]
            self.pairs += len(state.nodes) * len(belief.nodes)
            updated = merge(
                state, belief.nodes, belief.probs, self.instance.goal_costs(robot, goal)
            )
        self.total += (updated.value - self.per_goal_cost[goal]) / self.instance.n_goals
        self.per_goal_cost[goal] = updated.value
        self.states[goal] = updated
        self.assigned[robot] = goal
        return self


def _check_initial(instance: AssignmentInstance, O: Assignment) -> None:
    covered = sorted(j for _, j in O.edges)
    if covered != list(range(instance.n_goals)):
        raise ConstraintError("the initial assignment must cover every goal exactly once")


def new_cache(instance: AssignmentInstance, O: Assignment) -> ObjectiveCache:
    """Cache seeded with the initial assignment; its total is J_0."""
    _check_initial(instance, O)
    cache = ObjectiveCache(instance)
    for edge in O:
        cache.commit(edge)
    return cache


def exact_cost(
    instance: AssignmentInstance,
    A: Assignment,
    O: Assignment,
    max_outcomes: int | None = None,
) -> float:
    """Mean over goals of E[min travel time], by enumerating every joint location tuple."""
    _check_initial(instance, O)
    edges = A.union(O)
    limit = settings.EXACT_MAX_OUTCOMES if max_outcomes is None else max_outcomes
    groups = [edges.robots_of(j) for j in range(instance.n_goals)]
    for robots in groups:
        size = math.prod(instance.beliefs[i].support_size for i in robots)
        if size > limit:
            raise SizeGuardError("exact objective", size, limit)

    total = 0.0
    for goal, robots in enumerate(groups):
        waits = reduce(np.minimum.outer, [instance.goal_costs(i, goal) for i in robots])
        weights = reduce(np.multiply.outer, [instance.beliefs[i].probs for i in robots])
        total += float(np.sum(waits * weights))
    return total / instance.n_goals
