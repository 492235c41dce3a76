import argparse

from rvrp.cli.routes.base import Router
from rvrp.cli.routes.grid import router as grid_router
from rvrp.cli.routes.instance import router as instance_router
from rvrp.cli.routes.solve import router as solve_router
from rvrp.cli.routes.bench import bench_router, sweep_router
from rvrp.cli.routes.replay import router as replay_router
from rvrp.cli.routes.trace import router as trace_router

routers: dict[str, Router] = {
    r.name: r
    for r in (
        grid_router,
        instance_router,
        solve_router,
        bench_router,
        sweep_router,
        replay_router,
        trace_router,
    )
}


def register_routes(parser: argparse.ArgumentParser) -> None:
    subparsers = parser.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")
    for router in routers.values():
        router.register(subparsers)
