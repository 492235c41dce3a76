import numpy as np
import pytest

from rvrp.core import get_logger
from rvrp.errors import ParameterError
from rvrp.schemas.noise import NoiseKind, NoiseSpec
from rvrp.services import graph_service, uncertainty_service
from rvrp.tests.utils import data as test_data

log = get_logger(__name__)


def test_zero_noise_returns_true_position():
    assert uncertainty_service.sample_reported_position((0.0, 0.0), NoiseSpec(), 1) == (0.0, 0.0)


@pytest.mark.parametrize(
    "noise, std",
    [("gaussian:100", 100.0), ("laplace:70.7107", 100.0), ("uniform:200", 100.0)],
)
def test_sampler_per_axis_std(noise, std):
    spec = NoiseSpec.parse(noise)
    draws = uncertainty_service.sample_reported_positions(
        np.tile([100.0, 100.0], (100_000, 1)), spec, test_data.seed
    )
    empirical = draws.std(axis=0)
    log.debug(f"{noise}: {empirical}")
    assert np.all(np.abs(empirical - std) <= 3.0)
    assert spec.axis_std == pytest.approx(std, rel=1e-4)


def test_uniform_disk_radius():
    draws = uncertainty_service.sample_reported_positions(
        np.zeros((100_000, 2)), NoiseSpec.parse("circular_uniform:200"), test_data.seed
    )
    assert np.max(np.hypot(draws[:, 0], draws[:, 1])) <= 200.0


@pytest.mark.parametrize(
    "text, kind, scale",
    [
        ("gaussian", NoiseKind.gaussian, 100.0),
        ("laplace", NoiseKind.laplace, 100.0 / np.sqrt(2)),
        ("uniform", NoiseKind.uniform, 200.0),
        ("none", NoiseKind.none, 0.0),
        ("Gaussian:50", NoiseKind.gaussian, 50.0),
    ],
)
def test_parse_noise(text, kind, scale):
    spec = NoiseSpec.parse(text)
    assert spec.kind == kind
    assert spec.scale == pytest.approx(scale)


@pytest.mark.parametrize("text", ["cauchy:10", "gaussian:abc", "gaussian:-5"])
def test_parse_noise_invalid(text):
    with pytest.raises(ParameterError):
        NoiseSpec.parse(text)


def test_point_mass_belief(grid):
    belief = uncertainty_service.node_belief(grid, tuple(grid.xy[37]), NoiseSpec(), 1e-6)
    assert belief.nodes.tolist() == [37]
    assert belief.probs.tolist() == [1.0]


@pytest.mark.parametrize("noise", test_data.noises)
def test_belief_normalized(grid, noise):
    belief = uncertainty_service.node_belief(grid, (412.0, 377.0), NoiseSpec.parse(noise), 1e-6)
    log.debug(f"{noise}: support {belief.support_size}")
    assert 1 <= belief.support_size <= 256
    assert belief.probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(belief.probs > 1e-6)


def test_small_sigma_concentrates(grid):
    belief = uncertainty_service.node_belief(
        grid, (201.0, 149.0), NoiseSpec.parse("gaussian:0.5"), 1e-6
    )
    nearest = grid.nearest_node((201.0, 149.0))
    mass = dict(zip(belief.nodes.tolist(), belief.probs.tolist()))
    assert mass[nearest] >= 0.99


def test_p_min_out_of_range(grid):
    with pytest.raises(ParameterError):
        uncertainty_service.node_belief(grid, (0.0, 0.0), NoiseSpec.parse("gaussian"), 1.0)


def test_expected_cost_examples(small_grid):
    table = graph_service.shortest_travel_times(small_grid, [0])
    point = test_data.belief(0, [7], [1.0])
    assert uncertainty_service.expected_cost(point, table, 0) == table.times[0, 7]

    # nodes 2 and 4 are 10 s and 20 s away from node 0
    two = test_data.belief(1, [2, 4], [0.5, 0.5])
    assert uncertainty_service.expected_cost(two, table, 0) == pytest.approx(15.0)


def test_expected_cost_matches_naive_sum(small_grid, rng):
    table = graph_service.shortest_travel_times(small_grid, [3, 21])
    nodes = rng.choice(small_grid.n_nodes, size=10, replace=False)
    belief = test_data.belief(0, nodes, rng.random(10) + 0.1)
    for goal in range(2):
        naive = 0.0
        for v, p in zip(belief.nodes, belief.probs):
            naive += p * table.times[goal, v]
        assert uncertainty_service.expected_cost(belief, table, goal) == pytest.approx(naive, abs=1e-12)


def test_expected_cost_respects_dominance(grid, rng):
    table = graph_service.shortest_travel_times(grid, [0, 119])
    for _ in range(50):
        goal = int(rng.integers(2))
        times = table.times[goal]
        nodes = rng.choice(grid.n_nodes, size=6, replace=False)
        probs = rng.dirichlet(np.ones(6))
        # move every atom to a node at least as far from the goal
        moved: dict[int, float] = {}
        for v, p in zip(nodes.tolist(), probs.tolist()):
            farther = np.flatnonzero(times >= times[v])
            w = int(rng.choice(farther))
            moved[w] = moved.get(w, 0.0) + p
        near = test_data.belief(0, nodes, probs)
        far = test_data.belief(1, sorted(moved), [moved[w] for w in sorted(moved)])
        assert uncertainty_service.expected_cost(far, table, goal) >= (
            uncertainty_service.expected_cost(near, table, goal) - 1e-9
        )
