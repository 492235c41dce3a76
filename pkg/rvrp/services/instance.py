import hashlib

import numpy as np

from rvrp.core.logging import get_logger
from rvrp.errors import ParameterError
from rvrp.protocols.files.repositories.base import RepositoryBase
from rvrp.schemas.graph import TransportGraph, TravelTimeTable
from rvrp.schemas.instance import (
    Assignment,
    AssignmentInstance,
    GroundTruth,
    InstanceRecord,
)
from rvrp.schemas.noise import NoiseSpec
from rvrp.services.base import ServiceBase
from rvrp.services.graph import graph_service
from rvrp.services.uncertainty import uncertainty_service
from rvrp.utils.assignment import min_cost_matching
from rvrp.utils.seeds import as_rng

log = get_logger(__name__)


class InstanceService(ServiceBase[InstanceRecord, RepositoryBase[InstanceRecord]]):
    def build_instance(
        self,
        graph: TransportGraph,
        goal_nodes: list[int],
        true_robot_nodes: list[int],
        noise: NoiseSpec,
        deployment_cap: int,
        p_min: float,
        rng_seed: int | np.random.Generator | None = None,
        table: TravelTimeTable | None = None,
    ) -> AssignmentInstance:
        """Sample noisy reports around the true nodes and assemble the instance."""
        for node in [*goal_nodes, *true_robot_nodes]:
            if not 0 <= node < graph.n_nodes:
                raise ParameterError(f"unknown node id {node}")
        if not len(goal_nodes) <= deployment_cap <= len(true_robot_nodes):
            raise ParameterError(
                f"deployment cap must satisfy M <= N_d <= N, got M={len(goal_nodes)}, "
                f"N_d={deployment_cap}, N={len(true_robot_nodes)}"
            )
        rng = as_rng(rng_seed)
        reported = uncertainty_service.sample_reported_positions(
            graph.xy[np.asarray(true_robot_nodes, dtype=np.int64)], noise, rng
        )
        return self.assemble(
            graph,
            goal_nodes,
            reported,
            noise,
            deployment_cap,
            p_min,
            table=table,
            truth=GroundTruth(true_nodes=[int(v) for v in true_robot_nodes]),
            seed=rng_seed if isinstance(rng_seed, int) else None,
        )

    def assemble(
        self,
        graph: TransportGraph,
        goal_nodes: list[int],
        reported: np.ndarray,
        noise: NoiseSpec,
        deployment_cap: int,
        p_min: float,
        *,
        table: TravelTimeTable | None = None,
        truth: GroundTruth | None = None,
        seed: int | None = None,
    ) -> AssignmentInstance:
        """Discretize the reported positions into beliefs and bundle everything."""
        if table is None:
            table = graph_service.shortest_travel_times(graph, goal_nodes)
        beliefs = [
            uncertainty_service.node_belief(graph, tuple(position), noise, p_min, robot_id=i)
            for i, position in enumerate(reported)
        ]
        return AssignmentInstance(
            n_robots=len(beliefs),
            n_goals=len(goal_nodes),
            deployment_cap=deployment_cap,
            beliefs=beliefs,
            table=table,
            goal_nodes=[int(g) for g in goal_nodes],
            reported=[(float(x), float(y)) for x, y in reported],
            noise=noise,
            p_min=p_min,
            seed=seed,
            truth=truth,
        )

    def expected_cost_matrix(self, instance: AssignmentInstance) -> np.ndarray:
        """``C[j, i] = E[C_ij]``, the expected travel time of robot ``i`` to goal ``j``."""
        cost = np.empty((instance.n_goals, instance.n_robots))
        for i, belief in enumerate(instance.beliefs):
            cost[:, i] = instance.table.times[:, belief.nodes] @ belief.probs
        return cost

    def initial_assignment(self, instance: AssignmentInstance) -> Assignment:
        """Hungarian matching of every goal to one distinct robot on expected costs."""
        pairs = min_cost_matching(self.expected_cost_matrix(instance))
        return Assignment.of((robot, goal) for goal, robot in pairs)

    def fingerprint(self, instance: AssignmentInstance) -> str:
        digest = hashlib.sha1()
        digest.update(np.asarray(instance.goal_nodes, dtype=np.int64).tobytes())
        digest.update(str(instance.deployment_cap).encode())
        for belief in instance.beliefs:
            digest.update(belief.nodes.tobytes())
            digest.update(belief.probs.tobytes())
        return digest.hexdigest()[:16]

    def from_record(self, record: InstanceRecord, graph: TransportGraph | None = None) -> AssignmentInstance:
        """Rebuild an instance from its replay record; the seed fixes the noisy reports."""
        if graph is None:
            graph = graph_service.load_graph(record.graph_path)
        instance = self.build_instance(
            graph,
            record.goal_nodes,
            record.true_nodes,
            record.noise,
            record.deployment_cap,
            record.p_min,
            rng_seed=record.seed,
        )
        log.debug(
            f"Instance N={instance.n_robots} M={instance.n_goals} "
            f"N_d={instance.deployment_cap} noise={record.noise}"
        )
        return instance


instance_service = InstanceService()
