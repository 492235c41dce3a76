from functools import cached_property

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from typing_extensions import Self

from rvrp.errors import GraphValidationError


class TransportGraph(BaseModel):
    """
    Strongly connected weighted digraph with planar node coordinates.

    Node ids are the dense integers ``0..n_nodes-1``; ``xy[v]`` holds the
    position of node ``v`` in meters and ``edges[e] = (u, v)`` is traversed
    in ``travel_times[e]`` seconds.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    xy: np.ndarray
    edges: np.ndarray
    travel_times: np.ndarray

    @model_validator(mode="after")
    def validate_graph(self) -> Self:
        n = len(self.xy)
        if self.xy.ndim != 2 or self.xy.shape[1] != 2 or n == 0:
            raise GraphValidationError("node coordinates must be a non-empty (n, 2) array")
        if self.edges.ndim != 2 or self.edges.shape[1] != 2:
            raise GraphValidationError("edges must be an (m, 2) array")
        if len(self.travel_times) != len(self.edges):
            raise GraphValidationError("one travel time is required per edge")
        if len(self.edges) and (self.edges.min() < 0 or self.edges.max() >= n):
            raise GraphValidationError("edge references an unknown node id")
        if not np.all(np.isfinite(self.travel_times)) or np.any(self.travel_times <= 0):
            raise GraphValidationError("edge travel times must be positive and finite")

        if not nx.is_strongly_connected(self.digraph):
            source, target = unreachable_pair(self.digraph)
            raise GraphValidationError(
                f"graph is not strongly connected: node {target} "
                f"is unreachable from node {source}",
                pair=(source, target),
            )
        return self

    @cached_property
    def digraph(self) -> nx.DiGraph:
        digraph = nx.DiGraph()
        digraph.add_nodes_from(range(len(self.xy)))
        digraph.add_weighted_edges_from(
            (int(u), int(v), float(w))
            for (u, v), w in zip(self.edges, self.travel_times)
        )
        return digraph

    @property
    def n_nodes(self) -> int:
        return len(self.xy)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def nearest_node(self, position: tuple[float, float]) -> int:
        d2 = np.sum((self.xy - np.asarray(position, dtype=float)) ** 2, axis=1)
        return int(np.argmin(d2))


def unreachable_pair(digraph: nx.DiGraph) -> tuple[int, int]:
    """
    Return ``(u, v)`` such that no directed path leads from ``u`` to ``v``.

    A sink component of the condensation cannot reach anything outside it.
    """
    condensed = nx.condensation(digraph)
    sink = next(c for c in condensed.nodes if condensed.out_degree(c) == 0)
    members = condensed.nodes[sink]["members"]
    source = min(members)
    target = min(v for v in digraph.nodes if v not in members)
    return source, target


class TravelTimeTable(BaseModel):
    """``times[j, v]`` is the shortest travel time from node ``v`` to goal ``j``."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    goal_nodes: np.ndarray
    times: np.ndarray

    @property
    def n_goals(self) -> int:
        return len(self.goal_nodes)
