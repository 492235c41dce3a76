import numpy as np
import pytest

from rvrp.core import get_logger
from rvrp.errors import ConstraintError, SizeGuardError
from rvrp.schemas.instance import Assignment
from rvrp.services import instance_service
from rvrp.services.objective import exact_cost, new_cache
from rvrp.tests.utils import data as test_data

log = get_logger(__name__)


def _random_extra(rng, instance, O, size=None) -> list[tuple[int, int]]:
    free = [i for i in range(instance.n_robots) if i not in O.robots]
    k = int(rng.integers(0, instance.rank + 1)) if size is None else size
    robots = rng.choice(free, size=k, replace=False) if k else []
    return [(int(i), int(rng.integers(instance.n_goals))) for i in robots]


def test_cache_matches_enumeration(small_grid, random_instance, rng):
    for _ in range(200):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, min(n, 3) + 1))
        instance = random_instance(rng, n, m, int(rng.integers(m, n + 1)), small_grid)
        O = instance_service.initial_assignment(instance)
        cache = new_cache(instance, O)
        extra = _random_extra(rng, instance, O)
        for edge in extra:
            cache.commit(edge)
        oracle = exact_cost(instance, Assignment.of(extra), O)
        assert cache.total == pytest.approx(oracle, rel=1e-9)


def test_commit_order_does_not_matter(small_grid, random_instance, rng):
    for _ in range(100):
        instance = random_instance(rng, 8, 3, 8, small_grid)
        O = instance_service.initial_assignment(instance)
        extra = _random_extra(rng, instance, O, size=5)
        forward, backward = new_cache(instance, O), new_cache(instance, O)
        for edge in extra:
            forward.commit(edge)
        for edge in reversed(extra):
            backward.commit(edge)
        assert abs(forward.total - backward.total) <= 1e-9
        assert np.allclose(forward.per_goal_cost, backward.per_goal_cost, rtol=0, atol=1e-9)


def test_empty_redundancy_is_initial_cost(small_grid, random_instance, rng):
    instance = random_instance(rng, 5, 3, 3, small_grid)
    O = instance_service.initial_assignment(instance)
    costs = instance_service.expected_cost_matrix(instance)
    J0 = np.mean([costs[j, i] for i, j in O])
    assert exact_cost(instance, Assignment(), O) == pytest.approx(J0)
    assert new_cache(instance, O).total == pytest.approx(J0)


def test_point_masses_take_the_minimum(point_instance, small_grid):
    # goal at node 24; robots at nodes 0 (40 s) and 18 (10 s)
    instance = point_instance([0, 18], [24], 2)
    O = Assignment.of([(0, 0)])
    assert new_cache(instance, O).total == pytest.approx(40.0)
    assert exact_cost(instance, Assignment.of([(1, 0)]), O) == pytest.approx(10.0)
    assert new_cache(instance, O).commit((1, 0)).total == pytest.approx(10.0)


def test_two_node_beliefs_by_hand(random_instance, small_grid, rng):
    instance = random_instance(rng, 2, 1, 2, small_grid).model_copy(
        update={
            "beliefs": [
                test_data.belief(0, [0, 12], [0.25, 0.75]),
                test_data.belief(1, [4, 24], [0.5, 0.5]),
            ]
        }
    )
    f = instance.table.times[0]
    expected = sum(
        pa * pb * min(f[a], f[b])
        for a, pa in [(0, 0.25), (12, 0.75)]
        for b, pb in [(4, 0.5), (24, 0.5)]
    )
    O = Assignment.of([(0, 0)])
    assert exact_cost(instance, Assignment.of([(1, 0)]), O) == pytest.approx(expected)
    assert new_cache(instance, O).commit((1, 0)).total == pytest.approx(expected)


def test_identical_robots_copy_belief(random_instance, small_grid, rng):
    belief = [3, 7, 11], [0.2, 0.3, 0.5]
    instance = random_instance(rng, 2, 2, 2, small_grid).model_copy(
        update={"beliefs": [test_data.belief(0, *belief), test_data.belief(1, *belief)]}
    )
    cache = new_cache(instance, Assignment.of([(0, 0), (1, 1)]))
    expected = dict(zip(*belief))
    for argmin in cache.per_goal_argmin:
        assert argmin == pytest.approx(expected)


def test_tie_keeps_incumbent(point_instance):
    # nodes 4 and 20 are both 20 s from node 24
    instance = point_instance([4, 20], [24], 2)
    cache = new_cache(instance, Assignment.of([(0, 0)]))
    assert cache.marginal_decrease((1, 0)) == 0.0
    cache.commit((1, 0))
    assert cache.per_goal_argmin[0] == {4: 1.0}


def test_marginal_examples(point_instance):
    instance = point_instance([0, 24, 18, 1], [24, 0], 4)
    O = Assignment.of([(2, 0), (3, 1)])
    cache = new_cache(instance, O)
    # robot 1 sits on goal 0: waiting there drops to zero
    assert cache.marginal_decrease((1, 0)) * instance.n_goals == pytest.approx(cache.per_goal_cost[0])
    # robot 1 is farther from goal 1 than robot 3
    assert cache.marginal_decrease((1, 1)) == 0.0


def test_marginal_matches_enumeration(small_grid, random_instance, rng):
    for _ in range(50):
        instance = random_instance(rng, 6, 2, 6, small_grid)
        O = instance_service.initial_assignment(instance)
        extra = _random_extra(rng, instance, O, size=2)
        cache = new_cache(instance, O)
        for edge in extra:
            cache.commit(edge)
        used = O.robots | {i for i, _ in extra}
        robot = next(i for i in range(6) if i not in used)
        for goal in range(2):
            before = exact_cost(instance, Assignment.of(extra), O)
            after = exact_cost(instance, Assignment.of(extra + [(robot, goal)]), O)
            assert cache.marginal_decrease((robot, goal)) == pytest.approx(before - after, abs=1e-9)


def test_commit_then_query_rejected(small_grid, random_instance, rng):
    instance = random_instance(rng, 4, 2, 4, small_grid)
    O = instance_service.initial_assignment(instance)
    cache = new_cache(instance, O)
    robot = next(i for i in range(4) if i not in O.robots)
    cache.commit((robot, 0))
    with pytest.raises(ConstraintError):
        cache.marginal_decrease((robot, 1))
    with pytest.raises(ConstraintError):
        cache.commit((robot, 0))


def test_goals_are_independent(small_grid, random_instance, rng):
    instance = random_instance(rng, 6, 3, 6, small_grid)
    O = instance_service.initial_assignment(instance)
    cache = new_cache(instance, O)
    untouched = cache.per_goal_cost[2]
    for robot in [i for i in range(6) if i not in O.robots]:
        cache.commit((robot, 1))
    assert cache.per_goal_cost[2] == untouched


def test_supermodular_and_monotone(small_grid, random_instance, rng):
    for _ in range(1000):
        instance = random_instance(rng, 6, 2, 6, small_grid)
        O = instance_service.initial_assignment(instance)
        B = _random_extra(rng, instance, O, size=int(rng.integers(0, 4)))
        A = [e for e in B if rng.random() < 0.5]
        used = O.robots | {i for i, _ in B}
        x = (next(i for i in range(6) if i not in used), int(rng.integers(2)))
        cache_a, cache_b = new_cache(instance, O), new_cache(instance, O)
        for edge in A:
            cache_a.commit(edge)
        for edge in B:
            cache_b.commit(edge)
        assert cache_a.marginal_decrease(x) >= cache_b.marginal_decrease(x) - 1e-9
        assert cache_a.total >= cache_b.total - 1e-9


def test_exact_cost_guard(small_grid, random_instance, rng):
    instance = random_instance(rng, 4, 1, 4, small_grid, max_support=5)
    O = instance_service.initial_assignment(instance)
    extra = Assignment.of((i, 0) for i in range(4) if i not in O.robots)
    with pytest.raises(SizeGuardError) as error:
        exact_cost(instance, extra, O, max_outcomes=0)
    assert error.value.code == 2


def test_pair_counter(point_instance):
    instance = point_instance([0, 24, 18], [24], 3)
    cache = new_cache(instance, Assignment.of([(2, 0)]))
    cache.marginal_decrease((0, 0))
    cache.marginal_decrease((1, 0))
    assert cache.calls == 2
    assert cache.pairs == 2
