import time

import networkx as nx
import numpy as np

from rvrp.core.logging import get_logger
from rvrp.errors import ParameterError
from rvrp.protocols.files.repositories.base import RepositoryBase
from rvrp.schemas.graph import TransportGraph, TravelTimeTable
from rvrp.services.base import ServiceBase

log = get_logger(__name__)


class GraphService(ServiceBase[TransportGraph, RepositoryBase[TransportGraph]]):
    def build_grid(
        self, rows: int, cols: int, spacing: float, nominal_speed: float
    ) -> TransportGraph:
        """4-connected bidirectional lattice; node ``r * cols + c`` sits at ``(c, r) * spacing``."""
        if rows < 2 or cols < 2:
            raise ParameterError(f"grid needs at least 2x2 nodes, got {rows}x{cols}")
        if spacing <= 0 or nominal_speed <= 0:
            raise ParameterError("grid spacing and nominal speed must be positive")
        r, c = np.divmod(np.arange(rows * cols), cols)
        xy = np.column_stack([c * spacing, r * spacing]).astype(float)
        ids = np.arange(rows * cols).reshape(rows, cols)
        horizontal = np.column_stack([ids[:, :-1].ravel(), ids[:, 1:].ravel()])
        vertical = np.column_stack([ids[:-1, :].ravel(), ids[1:, :].ravel()])
        undirected = np.vstack([horizontal, vertical])
        edges = np.vstack([undirected, undirected[:, ::-1]])
        return TransportGraph(
            xy=xy,
            edges=edges.astype(np.int64),
            travel_times=np.full(len(edges), spacing / nominal_speed),
        )

    def load_graph(self, path: str) -> TransportGraph:
        start = time.perf_counter()
        graph = self.load(path=path)
        log.info(
            f"Loaded graph {path}: {graph.n_nodes} nodes, {graph.n_edges} edges "
            f"in {time.perf_counter() - start:.3f}s"
        )
        return graph

    def times_to(self, graph: TransportGraph, node: int) -> np.ndarray:
        """Shortest travel time from every node to ``node``."""
        if not 0 <= node < graph.n_nodes:
            raise ParameterError(f"unknown node id {node}")
        lengths = nx.single_source_dijkstra_path_length(
            graph.digraph.reverse(copy=False), node
        )
        times = np.empty(graph.n_nodes)
        times[list(lengths)] = list(lengths.values())
        return times

    def shortest_travel_times(
        self, graph: TransportGraph, goals: list[int]
    ) -> TravelTimeTable:
        goals = [int(g) for g in goals]
        times = np.vstack([self.times_to(graph, g) for g in goals]) if goals else (
            np.empty((0, graph.n_nodes))
        )
        return TravelTimeTable(goal_nodes=np.array(goals, dtype=np.int64), times=times)

    def canonical_path(
        self, graph: TransportGraph, source: int, target: int, times: np.ndarray
    ) -> list[int]:
        """
        Shortest path from ``source`` to ``target`` preferring the lowest
        node id among equally short continuations. ``times`` is
        ``times_to(graph, target)``.
        """
        path = [source]
        node = source
        while node != target:
            remaining = times[node]
            node = min(
                v
                for v, data in graph.digraph[node].items()
                if abs(data["weight"] + times[v] - remaining) <= 1e-9 * max(1.0, remaining)
            )
            path.append(node)
        return path

    def position_along(
        self, graph: TransportGraph, path: list[int], elapsed: float
    ) -> int:
        """Last node of ``path`` fully reached after travelling ``elapsed`` seconds."""
        reached = path[0]
        clock = 0.0
        for u, v in zip(path, path[1:]):
            clock += graph.digraph[u][v]["weight"]
            if clock > elapsed + 1e-9:
                break
            reached = v
        return reached


graph_service = GraphService()
