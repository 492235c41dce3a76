from typing import Iterable, Iterator

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from rvrp.errors import ConstraintError, ParameterError
from rvrp.schemas.graph import TravelTimeTable
from rvrp.schemas.noise import NoiseSpec, PositionBelief

Edge = tuple[int, int]


class Assignment(BaseModel):
    """Set of (robot, goal) edges; each robot appears at most once."""

    model_config = ConfigDict(frozen=True)

    edges: frozenset[Edge] = frozenset()

    @model_validator(mode="after")
    def robots_validator(self) -> Self:
        robots = [i for i, _ in self.edges]
        if len(robots) != len(set(robots)):
            raise ConstraintError("a robot may be assigned to at most one goal")
        return self

    @classmethod
    def of(cls, edges: Iterable[Edge]) -> "Assignment":
        return cls(edges=frozenset((int(i), int(j)) for i, j in edges))

    @property
    def robots(self) -> set[int]:
        return {i for i, _ in self.edges}

    def robots_of(self, goal: int) -> list[int]:
        return sorted(i for i, j in self.edges if j == goal)

    def union(self, other: "Assignment") -> "Assignment":
        return Assignment(edges=self.edges | other.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.sorted_edges())

    def __contains__(self, edge: Edge) -> bool:
        return edge in self.edges


class GroundTruth(BaseModel):
    """
    True robot nodes, used only to score realized outcomes. Planning
    solvers never read it; only the noise-free oracle does.
    """

    model_config = ConfigDict(frozen=True)

    true_nodes: list[int]


class AssignmentInstance(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_robots: int = Field(..., gt=0)
    n_goals: int = Field(..., gt=0)
    deployment_cap: int
    beliefs: list[PositionBelief]
    table: TravelTimeTable
    goal_nodes: list[int]
    reported: list[tuple[float, float]] = Field(default_factory=list)
    noise: NoiseSpec = NoiseSpec()
    p_min: float = 0.0
    seed: int | None = None
    truth: GroundTruth | None = None

    @model_validator(mode="after")
    def cap_validator(self) -> Self:
        if not self.n_goals <= self.deployment_cap <= self.n_robots:
            raise ParameterError(
                "deployment cap must satisfy M <= N_d <= N, got "
                f"M={self.n_goals}, N_d={self.deployment_cap}, N={self.n_robots}"
            )
        if len(self.beliefs) != self.n_robots:
            raise ParameterError("one belief is required per robot")
        if len(self.goal_nodes) != self.n_goals or self.table.n_goals != self.n_goals:
            raise ParameterError("goal nodes and travel table must cover every goal")
        n_nodes = self.table.times.shape[1]
        for belief in self.beliefs:
            if belief.nodes.min() < 0 or belief.nodes.max() >= n_nodes:
                raise ParameterError(f"belief of robot {belief.robot_id} leaves the graph")
        if self.truth is not None and len(self.truth.true_nodes) != self.n_robots:
            raise ParameterError("one true node is required per robot")
        return self

    @property
    def rank(self) -> int:
        return self.deployment_cap - self.n_goals

    def goal_costs(self, robot: int, goal: int) -> np.ndarray:
        """Travel times to ``goal`` over the support of ``robot``'s belief."""
        return self.table.times[goal, self.beliefs[robot].nodes]

    def with_cap(self, deployment_cap: int) -> "AssignmentInstance":
        return self.model_copy(update={"deployment_cap": deployment_cap})


class InstanceRecord(BaseModel):
    """Self-contained replay description of an instance file."""

    graph_path: str
    true_nodes: list[int]
    goal_nodes: list[int]
    noise: NoiseSpec = NoiseSpec()
    deployment_cap: int
    p_min: float = 0.0
    seed: int = 0
