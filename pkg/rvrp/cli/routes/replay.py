import argparse
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from rvrp.cli.routes.base import Router
from rvrp.cli.utils import graph_of, parse_pairs, seed_of, write_manifest
from rvrp.core.config import settings
from rvrp.core.logging import get_logger
from rvrp.errors import ParameterError
from rvrp.schemas.dispatch import DispatchStats, DispatchSummary, Policy, RequestTrace
from rvrp.schemas.graph import TransportGraph
from rvrp.schemas.noise import NoiseSpec
from rvrp.services import dispatch_service, results_service

log = get_logger(__name__)

POLICY_GROUPS = {
    "both": [Policy.redundant, Policy.non_redundant],
    "all": [Policy.redundant, Policy.non_redundant, Policy.noise_free],
}

router = Router("replay", "batched dispatch replay of a request trace")
router.argument("--graph", default=None, help="graph file, defaults to the settings grid")
router.argument("--trace", default=None, help="CSV trace request_time_s,pickup_node,dropoff_node")
router.argument("--synthetic", default=None, help="Poisson trace, e.g. rate=0.5,hours=2")
router.argument(
    "--policy",
    choices=[p.value for p in Policy] + sorted(POLICY_GROUPS),
    default="both",
)
router.argument("--noise", default="gaussian:100")
router.argument("--fleet-factor", type=float, default=settings.FLEET_FACTOR)
router.argument("--segment-hours", type=float, default=settings.SEGMENT_SECONDS / 3600)
router.argument("--density-resolution", type=int, default=50)
router.argument("--jobs", type=int, default=settings.JOBS)
router.argument("--seed", type=int, default=None)
router.argument("--out", required=True, help="prefix of the per-request CSV and summaries")


def synthetic_trace(graph: TransportGraph, text: str, seed: int) -> RequestTrace:
    values = parse_pairs(text)
    if "rate" not in values:
        raise ParameterError("--synthetic needs rate=<requests per second>")
    duration = values.get("duration", values.get("hours", 1.0) * 3600)
    return dispatch_service.generate_synthetic_trace(graph, values["rate"], duration, seed)


def write_summary(summary: DispatchSummary, prefix: str, resolution: int) -> list[str]:
    outputs = [results_service.write_flat(f"{prefix}.summary", summary.flat())]
    if summary.segments:
        outputs.append(
            results_service.write_csv(
                f"{prefix}_segments.csv",
                ["start_s", "end_s", "served", "mean_wait_s", "mean_redundancy"],
                [
                    [f"{s.start:g}", f"{s.end:g}", str(s.served), f"{s.mean_wait:.3f}", f"{s.mean_redundancy:.4f}"]
                    for s in summary.segments
                ],
            )
        )
    grid = dispatch_service.density_grid(summary, resolution) if not summary.empty else None
    if grid is not None:
        xs, ys, density = grid
        outputs.append(
            results_service.write_plot_data(
                f"{prefix}_density.dat",
                ["occupation_ratio", "mean_wait_s", "density"],
                [(x, y, density[i, j]) for i, x in enumerate(xs) for j, y in enumerate(ys)],
            )
        )
    return outputs


@router.route
def replay(args: argparse.Namespace) -> int:
    seed = seed_of(args)
    if bool(args.trace) == bool(args.synthetic):
        raise ParameterError("pass exactly one of --trace and --synthetic")
    if args.jobs < 1:
        raise ParameterError(f"--jobs must be positive, got {args.jobs}")
    graph = graph_of(args)
    if args.trace:
        trace = dispatch_service.load_trace(args.trace, graph)
    else:
        trace = synthetic_trace(graph, args.synthetic, seed)
    noise = NoiseSpec.parse(args.noise)
    policies = POLICY_GROUPS.get(args.policy) or [Policy(args.policy)]

    run = partial(
        dispatch_service.replay, graph, trace, noise=noise, fleet_factor=args.fleet_factor, seed=seed
    )
    if args.jobs > 1 and len(policies) > 1:
        with ProcessPoolExecutor(max_workers=min(args.jobs, len(policies))) as pool:
            runs: list[DispatchStats] = list(pool.map(run, policies))
    else:
        runs = [run(policy) for policy in policies]

    segment = args.segment_hours * 3600
    summaries = dispatch_service.compare([dispatch_service.summarize(s, segment) for s in runs])
    rows = [row for stats in runs for row in stats.csv_rows()]
    outputs = [results_service.write_csv(f"{args.out}.csv", DispatchStats.csv_header(), rows)]
    for summary in summaries:
        outputs += write_summary(summary, f"{args.out}_{summary.policy.value}", args.density_resolution)
        print(
            "  ".join(f"{k}={v}" for k, v in summary.flat().items() if v != "")
        )
    write_manifest(args, outputs)
    return 0
