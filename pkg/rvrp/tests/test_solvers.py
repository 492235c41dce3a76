import itertools

import numpy as np
import pytest

from rvrp.core import get_logger
from rvrp.errors import InputErrors, InstanceMismatchError, SizeGuardError
from rvrp.schemas.instance import Assignment
from rvrp.schemas.report import SolverMethod
from rvrp.services import instance_service, solver_service
from rvrp.services.matroid import IndependenceContext
from rvrp.services.objective import exact_cost

log = get_logger(__name__)


@pytest.mark.parametrize("method", [m for m in SolverMethod if m != SolverMethod.true_oracle])
def test_no_budget_returns_initial(small_grid, random_instance, rng, method):
    instance = random_instance(rng, 5, 3, 3, small_grid)
    report = solver_service.solve(method, instance, rng_seed=1)
    assert len(report.A) == 0
    assert report.cost_J == pytest.approx(report.J0)


def test_greedy_picks_dominating_robot(point_instance):
    # goal at 24; O robot at node 0, free robots at node 23 (5 s) and node 2 (30 s)
    instance = point_instance([0, 2, 23], [24], 2)
    report = solver_service.greedy(instance, Assignment.of([(0, 0)]))
    assert report.A == Assignment.of([(2, 0)])
    assert report.cost_J == pytest.approx(5.0)


def test_greedy_respects_matroid(small_grid, random_instance, rng):
    for _ in range(20):
        instance = random_instance(rng, 7, 3, int(rng.integers(3, 8)), small_grid)
        report = solver_service.greedy(instance)
        ctx = IndependenceContext(report.O, 7, 3, instance.deployment_cap)
        assert len(report.A) == instance.rank
        assert ctx.is_independent(report.A.edges)
        assert report.cost_J == pytest.approx(exact_cost(instance, report.A, report.O), rel=1e-9)
        assert report.cost_J <= report.J0 + 1e-12


def test_greedy_call_budget(small_grid, random_instance, rng):
    for _ in range(30):
        n = int(rng.integers(2, 9))
        m = int(rng.integers(1, n + 1))
        cap = int(rng.integers(m, n + 1))
        report = solver_service.greedy(random_instance(rng, n, m, cap, small_grid))
        assert report.objective_calls <= (cap - m) * n * m


def test_bound_and_gap(small_grid, random_instance, rng):
    gaps = []
    for _ in range(50):
        instance = random_instance(rng, 8, 3, 6, small_grid)
        O = instance_service.initial_assignment(instance)
        greedy = solver_service.greedy(instance, O)
        optimal = solver_service.exhaustive_optimal(instance, O)
        certificate = solver_service.verify_bound(greedy, optimal)
        assert certificate.holds
        assert optimal.cost_J <= greedy.cost_J + 1e-9
        assert optimal.cost_J == pytest.approx(exact_cost(instance, optimal.A, O), rel=1e-9)
        gaps.append((greedy.cost_J - optimal.cost_J) / optimal.cost_J if optimal.cost_J else 0.0)
    log.info(f"mean greedy gap {np.mean(gaps):.4%}")
    assert np.mean(gaps) <= 0.02


def test_optimal_takes_robot_on_goal(point_instance):
    instance = point_instance([0, 12, 24, 3], [24], 2)
    report = solver_service.exhaustive_optimal(instance, Assignment.of([(0, 0)]))
    assert report.A == Assignment.of([(2, 0)])
    assert report.cost_J == 0.0


def test_optimal_matches_brute_force(small_grid, random_instance, rng):
    for _ in range(10):
        instance = random_instance(rng, 6, 2, 5, small_grid)
        O = instance_service.initial_assignment(instance)
        free = [i for i in range(6) if i not in O.robots]
        best = min(
            exact_cost(instance, Assignment.of(zip(robots, goals)), O)
            for robots in itertools.combinations(free, instance.rank)
            for goals in itertools.product(range(2), repeat=instance.rank)
        )
        assert solver_service.exhaustive_optimal(instance, O).cost_J == pytest.approx(best, rel=1e-9)


def test_optimal_guard(small_grid, random_instance, rng):
    instance = random_instance(rng, 23, 2, 10, small_grid, max_support=1)
    with pytest.raises(SizeGuardError) as error:
        solver_service.exhaustive_optimal(instance)
    assert error.value.code == 2


def test_bound_equal_at_zero_budget(small_grid, random_instance, rng):
    instance = random_instance(rng, 4, 2, 2, small_grid)
    certificate = solver_service.verify_bound(
        solver_service.greedy(instance), solver_service.exhaustive_optimal(instance)
    )
    assert certificate.holds
    assert certificate.lhs == pytest.approx(certificate.rhs)


def test_bound_needs_same_instance(small_grid, random_instance, rng):
    first = random_instance(rng, 4, 2, 3, small_grid)
    second = random_instance(rng, 4, 2, 3, small_grid)
    with pytest.raises(InstanceMismatchError):
        solver_service.verify_bound(solver_service.greedy(first), solver_service.exhaustive_optimal(second))


def test_slice_full_round(small_grid, random_instance, rng):
    instance = random_instance(rng, 9, 3, 6, small_grid)
    report = solver_service.slice_greedy(instance)
    assert sorted(j for _, j in report.A) == [0, 1, 2]


def test_slice_partial_round(small_grid, random_instance, rng):
    instance = random_instance(rng, 9, 3, 8, small_grid)
    report = solver_service.slice_greedy(instance)
    goals = [j for _, j in report.A]
    assert len(goals) == 5
    assert all(goals.count(j) in (1, 2) for j in range(3))


def test_greedy_not_worse_than_slice(small_grid, random_instance, rng):
    greedy, sliced = [], []
    for _ in range(30):
        instance = random_instance(rng, 10, 3, 8, small_grid)
        O = instance_service.initial_assignment(instance)
        greedy.append(solver_service.greedy(instance, O).cost_J)
        sliced.append(solver_service.slice_greedy(instance, O).cost_J)
    assert np.mean(greedy) <= np.mean(sliced) + 1e-9


def test_random_is_seeded(small_grid, random_instance, rng):
    instance = random_instance(rng, 8, 2, 6, small_grid)
    first = solver_service.random_assign(instance, rng_seed=11)
    second = solver_service.random_assign(instance, rng_seed=11)
    assert first.A == second.A
    assert len(first.A) == 4
    ctx = IndependenceContext(first.O, 8, 2, 6)
    assert ctx.is_independent(first.A.edges)


def test_greedy_not_worse_than_random(small_grid, random_instance, rng):
    greedy, random = [], []
    for seed in range(30):
        instance = random_instance(rng, 8, 2, 5, small_grid)
        O = instance_service.initial_assignment(instance)
        greedy.append(solver_service.greedy(instance, O).cost_J)
        random.append(solver_service.random_assign(instance, O, rng_seed=seed).cost_J)
    assert np.mean(greedy) <= np.mean(random)


def test_true_oracle(point_instance):
    instance = point_instance([0, 23, 12], [24], 1)
    report = solver_service.true_oracle(instance)
    assert report.O == Assignment.of([(1, 0)])
    assert report.cost_J == pytest.approx(5.0)

    no_noise = solver_service.hungarian_only(instance)
    assert report.J0 == pytest.approx(no_noise.cost_J)


def test_true_oracle_needs_truth(small_grid, random_instance, rng):
    instance = random_instance(rng, 3, 1, 1, small_grid).model_copy(update={"truth": None})
    with pytest.raises(InputErrors):
        solver_service.true_oracle(instance)
