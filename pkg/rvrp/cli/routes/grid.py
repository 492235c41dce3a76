import argparse

from rvrp.cli.routes.base import Router
from rvrp.cli.utils import write_manifest
from rvrp.core.config import settings
from rvrp.services import graph_service

router = Router("gen-grid", "write a 4-connected lattice graph file")
router.argument("--rows", type=int, default=settings.GRID_ROWS)
router.argument("--cols", type=int, default=settings.GRID_COLS)
router.argument("--spacing", type=float, default=settings.GRID_SPACING, help="meters")
router.argument("--speed", type=float, default=settings.SPEED_MEAN, help="meters per second")
router.argument("--seed", type=int, default=None)
router.argument("--out", required=True, help="graph file to write")


@router.route
def gen_grid(args: argparse.Namespace) -> int:
    graph = graph_service.build_grid(args.rows, args.cols, args.spacing, args.speed)
    graph_service.save(graph, path=args.out)
    print(f"{args.out}: {graph.n_nodes} nodes, {graph.n_edges} edges")
    write_manifest(args, [args.out])
    return 0
