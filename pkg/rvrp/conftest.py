import numpy as np
import pytest

from rvrp.infraestructure.files import init_files_infraestructure
from rvrp.schemas.graph import TransportGraph
from rvrp.schemas.instance import AssignmentInstance, GroundTruth
from rvrp.schemas.noise import NoiseSpec
from rvrp.services import graph_service, instance_service
from rvrp.tests.utils import data as test_data


@pytest.fixture(scope="session", autouse=True)
def infraestructure():
    init_files_infraestructure()


@pytest.fixture(scope="session")
def grid() -> TransportGraph:
    return graph_service.build_grid(16, 16, 50.0, 10.0)


@pytest.fixture(scope="session")
def small_grid() -> TransportGraph:
    return graph_service.build_grid(5, 5, 50.0, 10.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(test_data.seed)


@pytest.fixture(scope="session")
def random_instance():
    """Factory of small instances whose beliefs are random supports of the grid."""

    def build(
        rng: np.random.Generator,
        n_robots: int,
        n_goals: int,
        deployment_cap: int,
        graph: TransportGraph | None = None,
        max_support: int = 5,
    ) -> AssignmentInstance:
        graph = graph or graph_service.build_grid(5, 5, 50.0, 10.0)
        goals = rng.choice(graph.n_nodes, size=n_goals, replace=False).tolist()
        beliefs = []
        for robot in range(n_robots):
            size = int(rng.integers(1, max_support + 1))
            nodes = np.sort(rng.choice(graph.n_nodes, size=size, replace=False))
            probs = rng.dirichlet(np.ones(size))
            beliefs.append(test_data.belief(robot, nodes, probs))
        true_nodes = [int(rng.choice(b.nodes)) for b in beliefs]
        return AssignmentInstance(
            n_robots=n_robots,
            n_goals=n_goals,
            deployment_cap=deployment_cap,
            beliefs=beliefs,
            table=graph_service.shortest_travel_times(graph, goals),
            goal_nodes=goals,
            noise=NoiseSpec.parse("gaussian:100"),
            truth=GroundTruth(true_nodes=true_nodes),
        )

    return build


@pytest.fixture
def point_instance(small_grid):
    """Instance with point-mass beliefs at the given nodes."""

    def build(robot_nodes: list[int], goal_nodes: list[int], deployment_cap: int):
        return instance_service.build_instance(
            small_grid, goal_nodes, robot_nodes, NoiseSpec(), deployment_cap, 0.0, rng_seed=0
        )

    return build
