"""
Batched ride-hailing replay: requests are collected in fixed windows and
assigned jointly, optionally with redundant vehicles whose first arrival
serves the passenger.
"""
import math
import time

import numpy as np
from scipy.stats import gaussian_kde

from rvrp.core.config import settings
from rvrp.core.logging import get_logger
from rvrp.errors import InstanceMismatchError, ParameterError
from rvrp.protocols.files.repositories.base import RepositoryBase
from rvrp.schemas.dispatch import (
    BatchRecord,
    DispatchStats,
    DispatchSummary,
    Policy,
    RequestEvent,
    RequestTrace,
    SegmentSummary,
    ServedRequest,
    Vehicle,
    VehicleStatus,
)
from rvrp.schemas.graph import TransportGraph, TravelTimeTable
from rvrp.schemas.instance import GroundTruth
from rvrp.schemas.noise import NoiseSpec
from rvrp.services.base import ServiceBase
from rvrp.services.graph import graph_service
from rvrp.services.instance import instance_service
from rvrp.services.solvers import solver_service
from rvrp.services.uncertainty import uncertainty_service
from rvrp.utils.seeds import derive_rng, resolve_seed
from rvrp.utils.stats import nearest_rank

log = get_logger(__name__)


class Fleet:
    """
    Vehicles by id plus a cache of shortest travel times towards nodes.

    Only occupied vehicles are unavailable: a vehicle re-routed towards a
    request another vehicle serves can take a new request from wherever it
    has got to.
    """

    def __init__(self, graph: TransportGraph):
        self.graph = graph
        self.vehicles: dict[int, Vehicle] = {}
        self.next_id = 0
        self._times: dict[int, np.ndarray] = {}

    def times_to(self, node: int) -> np.ndarray:
        if node not in self._times:
            self._times[node] = graph_service.times_to(self.graph, node)
        return self._times[node]

    def by_status(self, status: VehicleStatus) -> list[Vehicle]:
        return [v for _, v in sorted(self.vehicles.items()) if v.status == status]

    @property
    def available(self) -> list[Vehicle]:
        return [
            v for _, v in sorted(self.vehicles.items()) if v.status != VehicleStatus.occupied
        ]

    def release(self, now: float) -> None:
        """Free vehicles whose job ended by ``now`` and advance re-routed ones."""
        for vehicle in self.vehicles.values():
            if vehicle.status == VehicleStatus.idle:
                continue
            if vehicle.busy_until <= now:
                vehicle.node = vehicle.release_node
                vehicle.status = VehicleStatus.idle
                vehicle.request = None
                vehicle.release_node = None
                vehicle.route = []
            elif vehicle.status == VehicleStatus.assigned:
                vehicle.node = graph_service.position_along(
                    self.graph, vehicle.route, now - vehicle.route_start
                )

    def occupy(self, vehicle: Vehicle, request: int, until: float, dropoff: int) -> None:
        vehicle.status = VehicleStatus.occupied
        vehicle.request = request
        vehicle.busy_until = until
        vehicle.release_node = dropoff
        vehicle.route = []

    def reroute(
        self, vehicle: Vehicle, request: int, target: int, now: float, until: float
    ) -> None:
        """Send ``vehicle`` towards ``target`` until ``until``, when it stops where it got to."""
        route = graph_service.canonical_path(
            self.graph, vehicle.node, target, self.times_to(target)
        )
        vehicle.status = VehicleStatus.assigned
        vehicle.request = request
        vehicle.busy_until = until
        vehicle.route = route
        vehicle.route_start = now
        vehicle.release_node = graph_service.position_along(self.graph, route, until - now)

    def spawn(self, node: int) -> Vehicle:
        if not 0 <= node < self.graph.n_nodes:
            raise ParameterError(f"unknown node id {node}")
        vehicle = Vehicle(vehicle_id=self.next_id, node=node)
        self.vehicles[vehicle.vehicle_id] = vehicle
        self.next_id += 1
        return vehicle

    def resize(self, target: int, rng: np.random.Generator) -> None:
        """Spawn idle vehicles at random nodes or retire the highest-id idle ones."""
        size = len(self.vehicles)
        if size < target:
            for node in rng.integers(0, self.graph.n_nodes, size=target - size):
                self.spawn(int(node))
        elif size > target:
            idle = self.by_status(VehicleStatus.idle)
            for vehicle in idle[::-1][: size - target]:
                del self.vehicles[vehicle.vehicle_id]

    @property
    def occupation_ratio(self) -> float:
        """Share of the fleet carrying or driving to its own passenger."""
        if not self.vehicles:
            return 0.0
        return len(self.by_status(VehicleStatus.occupied)) / len(self.vehicles)


class DispatchService(ServiceBase[RequestTrace, RepositoryBase[RequestTrace]]):
    def load_trace(self, path: str, graph: TransportGraph | None = None) -> RequestTrace:
        trace = self.load(path=path)
        if graph is not None:
            self.check_trace(graph, trace)
        log.info(f"Loaded trace {path}: {len(trace)} requests")
        return trace

    def check_trace(self, graph: TransportGraph, trace: RequestTrace) -> None:
        for number, event in enumerate(trace.events):
            for node in (event.pickup, event.dropoff):
                if node >= graph.n_nodes:
                    raise InstanceMismatchError(
                        f"request {number} at {event.request_time}s references node {node}, "
                        f"the graph has {graph.n_nodes} nodes"
                    )

    def generate_synthetic_trace(
        self, graph: TransportGraph, rate: float, duration: float, seed: int | None = None
    ) -> RequestTrace:
        """Poisson arrivals over ``duration`` seconds with uniform, distinct pickup and dropoff."""
        if rate <= 0 or duration <= 0:
            raise ParameterError(f"rate and duration must be positive, got {rate} and {duration}")
        rng = derive_rng(resolve_seed(seed), 0)
        count = int(rng.poisson(rate * duration))
        times = np.sort(rng.uniform(0.0, duration, size=count))
        n = graph.n_nodes
        pickups = rng.integers(0, n, size=count)
        dropoffs = (pickups + rng.integers(1, n, size=count)) % n
        return RequestTrace(
            events=[
                RequestEvent(request_time=float(t), pickup=int(p), dropoff=int(d))
                for t, p, d in zip(times, pickups, dropoffs)
            ]
        )

    def replay(
        self,
        graph: TransportGraph,
        trace: RequestTrace,
        policy: Policy | str,
        noise: NoiseSpec,
        fleet_factor: float | None = None,
        seed: int | None = None,
        *,
        min_fleet: int | None = None,
        initial_nodes: list[int] | None = None,
    ) -> DispatchStats:
        """
        Replay ``trace`` in fixed batches. ``initial_nodes`` places idle
        vehicles before the first batch; the fleet never shrinks below
        ``min_fleet``.
        """
        policy = Policy(policy)
        fleet_factor = settings.FLEET_FACTOR if fleet_factor is None else fleet_factor
        if fleet_factor < 1:
            raise ParameterError(f"fleet factor must be at least 1, got {fleet_factor}")
        self.check_trace(graph, trace)
        seed = resolve_seed(seed)
        spawn_rng, noise_rng = derive_rng(seed, 1), derive_rng(seed, 2)
        if policy == Policy.noise_free:
            noise = NoiseSpec()

        stats = DispatchStats(policy=policy, n_requests=len(trace))
        events = trace.events
        if not events:
            return stats

        started = time.perf_counter()
        fleet = Fleet(graph)
        step = settings.BATCH_SECONDS
        now = math.ceil(events[0].request_time / step) * step
        floor = settings.MIN_FLEET if min_fleet is None else min_fleet
        for node in initial_nodes or []:
            fleet.spawn(node)
        pending: list[int] = []
        following, batch_index = 0, 0
        while following < len(events) or pending:
            fleet.release(now)
            while following < len(events) and events[following].request_time <= now:
                pending.append(following)
                following += 1
            expired = {r for r in pending if now - events[r].request_time > settings.MAX_WAIT_SECONDS}
            pending = [r for r in pending if r not in expired]
            stats.dropped += len(expired)

            occupied = len(fleet.by_status(VehicleStatus.occupied))
            fleet.resize(max(floor, math.ceil(fleet_factor * occupied)), spawn_rng)

            served = self._dispatch(fleet, events, pending, policy, noise, now, batch_index, noise_rng)
            stats.served += served
            done = {s.request for s in served}
            pending = [r for r in pending if r not in done]

            stats.batches.append(
                BatchRecord(
                    index=batch_index,
                    time=now,
                    fleet_size=len(fleet.vehicles),
                    occupation_ratio=fleet.occupation_ratio,
                    served=len(served),
                    dropped=len(expired),
                    pending=len(pending),
                    mean_wait=float(np.mean([s.wait for s in served])) if served else None,
                )
            )
            now += step
            batch_index += 1

        stats.pending = len(pending)
        log.info(
            f"Replay {policy.value}: {len(stats.served)} served, {stats.dropped} dropped "
            f"of {stats.n_requests} in {batch_index} batches "
            f"({time.perf_counter() - started:.1f}s)"
        )
        return stats

    def _dispatch(
        self,
        fleet: Fleet,
        events: list[RequestEvent],
        pending: list[int],
        policy: Policy,
        noise: NoiseSpec,
        now: float,
        batch_index: int,
        rng: np.random.Generator,
    ) -> list[ServedRequest]:
        available = fleet.available
        n_goals = min(len(available), len(pending))
        if n_goals == 0:
            return []
        requests = pending[:n_goals]
        extra = max(0, len(available) - n_goals - math.ceil(settings.UNASSIGNED_RATIO * len(pending)))
        cap = n_goals + extra if policy == Policy.redundant else n_goals

        graph = fleet.graph
        goal_nodes = [events[r].pickup for r in requests]
        true_nodes = [v.node for v in available]
        table = TravelTimeTable(
            goal_nodes=np.asarray(goal_nodes, dtype=np.int64),
            times=np.vstack([fleet.times_to(g) for g in goal_nodes]),
        )
        reported = uncertainty_service.sample_reported_positions(
            graph.xy[np.asarray(true_nodes, dtype=np.int64)], noise, rng
        )
        instance = instance_service.assemble(
            graph,
            goal_nodes,
            reported,
            noise,
            cap,
            settings.P_MIN,
            table=table,
            truth=GroundTruth(true_nodes=true_nodes),
        )
        O = instance_service.initial_assignment(instance)
        edges = O
        if cap > n_goals:
            edges = O.union(solver_service.greedy(instance, O).A)

        served = []
        for goal, request in enumerate(requests):
            event = events[request]
            group = [available[i] for i in edges.robots_of(goal)]
            arrivals = {v.vehicle_id: float(table.times[goal, v.node]) for v in group}
            winner = min(group, key=lambda v: (arrivals[v.vehicle_id], v.vehicle_id))
            pickup_at = arrivals[winner.vehicle_id]
            trip = float(fleet.times_to(event.dropoff)[event.pickup])

            for vehicle in group:
                if vehicle is winner:
                    fleet.occupy(vehicle, request, now + pickup_at + trip, event.dropoff)
                else:
                    fleet.reroute(vehicle, request, event.pickup, now, now + pickup_at)

            served.append(
                ServedRequest(
                    request=request,
                    request_time=event.request_time,
                    wait=now - event.request_time + pickup_at,
                    batch_index=batch_index,
                    vehicles_assigned=len(group),
                )
            )
        return served

    def summarize(
        self, stats: DispatchStats, segment_seconds: float | None = None
    ) -> DispatchSummary:
        """Wait statistics, redundancy and per-batch density inputs of one replay."""
        drop_rate = stats.dropped / stats.n_requests if stats.n_requests else 0.0
        if not stats.served:
            return DispatchSummary(
                policy=stats.policy,
                empty=True,
                n_requests=stats.n_requests,
                n_dropped=stats.dropped,
                drop_rate=drop_rate,
            )
        waits = np.array([s.wait for s in stats.served])
        redundancy = np.array([s.vehicles_assigned for s in stats.served], dtype=float)

        width = segment_seconds or settings.SEGMENT_SECONDS
        index = np.floor(np.array([s.request_time for s in stats.served]) / width).astype(int)
        segments = [
            SegmentSummary(
                start=k * width,
                end=(k + 1) * width,
                served=int(np.sum(index == k)),
                mean_wait=float(waits[index == k].mean()),
                mean_redundancy=float(redundancy[index == k].mean()),
            )
            for k in np.unique(index).tolist()
        ]
        return DispatchSummary(
            policy=stats.policy,
            n_requests=stats.n_requests,
            n_served=len(waits),
            n_dropped=stats.dropped,
            drop_rate=drop_rate,
            mean=float(waits.mean()),
            std=float(waits.std()),
            median=float(np.median(waits)),
            p95=nearest_rank(waits, 0.95),
            mean_redundancy=float(redundancy.mean()),
            segments=segments,
            batch_points=[
                (b.occupation_ratio, b.mean_wait) for b in stats.batches if b.mean_wait is not None
            ],
        )

    def compare(self, summaries: list[DispatchSummary]) -> list[DispatchSummary]:
        """Fill ``relative_to_noise_free`` when a non-empty noise-free run is present."""
        reference = next(
            (s for s in summaries if s.policy == Policy.noise_free and not s.empty), None
        )
        if reference is None or not reference.mean:
            return summaries
        return [
            s if s.empty else s.model_copy(update={"relative_to_noise_free": s.mean / reference.mean})
            for s in summaries
        ]

    def density_grid(
        self, summary: DispatchSummary, resolution: int = 50
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
        """
        Gaussian KDE of the (occupation ratio, mean wait) batch points on a
        ``resolution`` x ``resolution`` grid; ``None`` when the points do not
        span two dimensions.
        """
        points = np.asarray(summary.batch_points, dtype=float)
        if len(points) < 3:
            log.warning(f"{summary.policy.value}: too few batches for a density estimate")
            return None
        try:
            kde = gaussian_kde(points.T)
        except (np.linalg.LinAlgError, ValueError) as error:
            log.warning(f"{summary.policy.value}: density estimate failed ({error})")
            return None
        xs = np.linspace(0.0, 1.0, resolution)
        ys = np.linspace(0.0, max(float(points[:, 1].max()), 1.0), resolution)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        density = kde(np.vstack([gx.ravel(), gy.ravel()])).reshape(gx.shape)
        return xs, ys, density


dispatch_service = DispatchService()
