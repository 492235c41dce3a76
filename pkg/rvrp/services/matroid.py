from typing import Iterable

from rvrp.errors import ConstraintError, InputErrors, ParameterError
from rvrp.schemas.instance import Assignment, Edge


class IndependenceContext:
    """
    Partition matroid with a cardinality cap over the edges outside ``O``:
    a set A is independent when |A| <= N_d - M and no robot appears twice
    in A ∪ O.

    ``add`` keeps the set of used robots up to date so that
    ``eligible_edges()`` needs no rescan of the selection.
    """

    def __init__(self, O: Assignment, n_robots: int, n_goals: int, deployment_cap: int):
        if not n_goals <= deployment_cap <= n_robots:
            raise ParameterError(
                f"deployment cap must satisfy M <= N_d <= N, got M={n_goals}, "
                f"N_d={deployment_cap}, N={n_robots}"
            )
        self.O = O
        self.n_robots = n_robots
        self.n_goals = n_goals
        self.deployment_cap = deployment_cap
        self.assigned_robots: set[int] = set(O.robots)
        self.selected: list[Edge] = []

    @property
    def rank(self) -> int:
        return self.deployment_cap - self.n_goals

    def is_independent(self, A: Iterable[Edge]) -> bool:
        edges = set(A)
        overlap = edges & self.O.edges
        if overlap:
            raise InputErrors(f"edges {sorted(overlap)} belong to the initial assignment")
        for robot, goal in edges:
            if not 0 <= robot < self.n_robots or not 0 <= goal < self.n_goals:
                raise InputErrors(f"edge {(robot, goal)} is outside the instance")
        if len(edges) > self.rank:
            return False
        robots = [robot for robot, _ in edges]
        if len(set(robots)) != len(robots):
            return False
        return not set(robots) & self.O.robots

    def eligible_edges(self, A: Iterable[Edge] | None = None) -> set[Edge]:
        """Edges x with A ∪ {x} independent; defaults to the current selection."""
        if A is None:
            size, used = len(self.selected), self.assigned_robots
        else:
            edges = set(A)
            size, used = len(edges), self.O.robots | {robot for robot, _ in edges}
        if size >= self.rank:
            return set()
        return {
            (robot, goal)
            for robot in range(self.n_robots)
            if robot not in used
            for goal in range(self.n_goals)
        }

    def add(self, edge: Edge) -> None:
        robot, goal = edge
        if len(self.selected) >= self.rank:
            raise ConstraintError("deployment cap reached")
        if robot in self.assigned_robots:
            raise ConstraintError(f"robot {robot} is already assigned")
        if not 0 <= robot < self.n_robots or not 0 <= goal < self.n_goals:
            raise ConstraintError(f"edge {edge} is outside the instance")
        self.assigned_robots.add(robot)
        self.selected.append((robot, goal))

    @property
    def free_robots(self) -> list[int]:
        return [i for i in range(self.n_robots) if i not in self.assigned_robots]
