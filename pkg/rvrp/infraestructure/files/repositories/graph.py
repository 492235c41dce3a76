import numpy as np

from rvrp.errors import GraphValidationError, ParseError
from rvrp.infraestructure.files.repositories.base import RepositoryBase
from rvrp.schemas.graph import TransportGraph


class GraphRepository(RepositoryBase[TransportGraph]):
    """
    Text graph files: ``node <id> <x> <y>`` records followed by
    ``edge <from> <to> <seconds>`` records, ``#`` starts a comment.
    """

    def load(self, *, path: str) -> TransportGraph:
        coords: dict[int, tuple[float, float]] = {}
        edges: list[tuple[int, int]] = []
        weights: list[float] = []
        for number, line in self.read_lines(path):
            fields = line.split()
            kind = fields[0].lower()
            if kind == "node":
                node, x, y = self._fields(path, number, fields, (int, float, float))
                if node in coords:
                    raise ParseError(path, number, f"duplicate node id {node}")
                coords[node] = (x, y)
            elif kind == "edge":
                u, v, w = self._fields(path, number, fields, (int, int, float))
                for node in (u, v):
                    if node not in coords:
                        raise ParseError(path, number, f"unknown node id {node}")
                if not np.isfinite(w) or w <= 0:
                    raise ParseError(path, number, f"non-positive travel time {w}")
                edges.append((u, v))
                weights.append(w)
            else:
                raise ParseError(path, number, f"unknown record '{fields[0]}'")
        if sorted(coords) != list(range(len(coords))):
            raise GraphValidationError("node ids must be the dense range 0..|V|-1")
        return self.model(
            xy=np.array([coords[v] for v in range(len(coords))], dtype=float).reshape(-1, 2),
            edges=np.array(edges, dtype=np.int64).reshape(-1, 2),
            travel_times=np.array(weights, dtype=float),
        )

    def save(self, obj: TransportGraph, *, path: str) -> None:
        lines = [f"# {obj.n_nodes} nodes, {obj.n_edges} edges"]
        lines += [f"node {v} {x:.6f} {y:.6f}" for v, (x, y) in enumerate(obj.xy)]
        lines += [
            f"edge {u} {v} {w:.9g}"
            for (u, v), w in zip(obj.edges.tolist(), obj.travel_times.tolist())
        ]
        self.write_lines(path, lines)

    @staticmethod
    def _fields(path: str, number: int, fields: list[str], types: tuple) -> list:
        if len(fields) != len(types) + 1:
            raise ParseError(
                path, number, f"expected {len(types)} values after '{fields[0]}'"
            )
        try:
            return [cast(value) for cast, value in zip(types, fields[1:])]
        except ValueError as error:
            raise ParseError(path, number, str(error))


graph_repository = GraphRepository(TransportGraph)
