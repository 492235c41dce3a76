import numpy as np

from rvrp.errors import DegenerateBeliefError, ParameterError
from rvrp.schemas.graph import TransportGraph, TravelTimeTable
from rvrp.schemas.noise import NoiseKind, NoiseSpec, PositionBelief
from rvrp.utils.seeds import as_rng


class UncertaintyService:
    def sample_reported_position(
        self,
        true_position: tuple[float, float],
        noise: NoiseSpec,
        rng_seed: int | np.random.Generator | None = None,
    ) -> tuple[float, float]:
        x, y = self.sample_reported_positions(
            np.asarray([true_position], dtype=float), noise, rng_seed
        )[0]
        return float(x), float(y)

    def sample_reported_positions(
        self,
        true_positions: np.ndarray,
        noise: NoiseSpec,
        rng_seed: int | np.random.Generator | None = None,
    ) -> np.ndarray:
        """Add one independent noise draw to each row of ``true_positions``."""
        positions = np.asarray(true_positions, dtype=float).reshape(-1, 2)
        if noise.kind == NoiseKind.none or noise.scale == 0:
            return positions.copy()
        rng = as_rng(rng_seed)
        n = len(positions)
        if noise.kind == NoiseKind.gaussian:
            offsets = rng.normal(0.0, noise.scale, size=(n, 2))
        elif noise.kind == NoiseKind.laplace:
            offsets = rng.laplace(0.0, noise.scale, size=(n, 2))
        else:
            radius = noise.scale * np.sqrt(rng.uniform(size=n))
            angle = rng.uniform(0.0, 2 * np.pi, size=n)
            offsets = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
        return positions + offsets

    def node_belief(
        self,
        graph: TransportGraph,
        reported: tuple[float, float],
        noise: NoiseSpec,
        p_min: float,
        robot_id: int = 0,
    ) -> PositionBelief:
        """
        Reverse pmf of the true node: noise density centered at the report,
        evaluated at node coordinates, normalized over all nodes, truncated
        at ``p_min`` and renormalized.
        """
        if not 0.0 <= p_min < 1.0:
            raise ParameterError(f"p_min must lie in [0, 1), got {p_min}")
        if noise.kind == NoiseKind.none or noise.scale == 0:
            return PositionBelief.point_mass(robot_id, graph.nearest_node(reported))

        offset = graph.xy - np.asarray(reported, dtype=float)
        if noise.kind == NoiseKind.gaussian:
            log_density = -np.sum(offset**2, axis=1) / (2 * noise.scale**2)
        elif noise.kind == NoiseKind.laplace:
            log_density = -np.sum(np.abs(offset), axis=1) / noise.scale
        else:
            inside = np.sum(offset**2, axis=1) <= noise.scale**2
            log_density = np.where(inside, 0.0, -np.inf)
        if not np.any(np.isfinite(log_density)):
            raise DegenerateBeliefError(
                f"no node carries probability mass for robot {robot_id}"
            )
        mass = np.exp(log_density - log_density.max())
        probs = mass / mass.sum()
        keep = np.flatnonzero(probs > p_min)
        if keep.size == 0:
            raise DegenerateBeliefError(
                f"belief of robot {robot_id} is empty after truncation at {p_min}"
            )
        kept = probs[keep]
        return PositionBelief(robot_id=robot_id, nodes=keep, probs=kept / kept.sum())

    def expected_cost(
        self, belief: PositionBelief, table: TravelTimeTable, goal: int
    ) -> float:
        return float(belief.probs @ table.times[goal, belief.nodes])


uncertainty_service = UncertaintyService()
