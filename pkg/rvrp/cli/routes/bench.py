import argparse

from pydantic import ValidationError

from rvrp.cli.routes.base import Router
from rvrp.cli.utils import parse_floats, seed_of, write_manifest
from rvrp.core.config import settings
from rvrp.errors import ParameterError
from rvrp.schemas.experiment import SERIES_PRESETS, ExperimentConfig
from rvrp.services import benchmark_service


def _bench_router(name: str, help: str, sweep: str | None) -> Router:
    router = Router(name, help)
    router.argument("--series", type=str.upper, choices=sorted(SERIES_PRESETS), default="A")
    router.argument("--noise", default="gaussian:100", help="comma separated noise models")
    router.argument("--iterations", type=int, default=settings.ITERATIONS)
    router.argument("--methods", default=None, help="comma separated solver methods")
    router.argument("--caps", default=None, help="comma separated deployment caps")
    router.argument("--sweep", default=sweep, help="comma separated gaussian sigmas")
    router.argument("--sweep-cap", type=int, default=None, help="deployment cap of the sweep")
    router.argument("--jobs", type=int, default=settings.JOBS)
    router.argument("--seed", type=int, default=None)
    router.argument("--out", required=True, help="prefix of the CSV and plot-data files")
    router.route(run_bench)
    return router


def run_bench(args: argparse.Namespace) -> int:
    seed = seed_of(args)
    if args.jobs < 1:
        raise ParameterError(f"--jobs must be positive, got {args.jobs}")
    try:
        config = ExperimentConfig.preset(
            args.series,
            noises=args.noise,
            iterations=args.iterations,
            methods=args.methods,
            caps=args.caps,
            seed=seed,
        )
    except ValidationError as error:
        reasons = "; ".join(
            f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in error.errors()
        )
        raise ParameterError(f"invalid benchmark configuration: {reasons}") from None
    if args.sweep:
        cap = args.sweep_cap or SERIES_PRESETS[config.series]["sweep_cap"]
        rows = benchmark_service.run_noise_sweep(config, parse_floats(args.sweep), cap, jobs=args.jobs)
    else:
        rows = benchmark_service.run_series(config, jobs=args.jobs)
    outputs = benchmark_service.write_series(rows, args.out, sweep=bool(args.sweep))
    for row in rows:
        print(
            f"{row.noise_kind}:{row.noise_scale:g} N_d={row.N_d:<4d} {row.method:<15s} "
            f"{row.mean_norm_wait:.4f} [{row.ci_low:.4f}, {row.ci_high:.4f}]"
        )
    write_manifest(args, outputs)
    return 0


bench_router = _bench_router("bench", "Monte Carlo benchmark of the assignment methods", None)
sweep_router = _bench_router(
    "sweep", "normalized waiting time against gaussian noise at one deployment cap", "0,50,100,200"
)
