import argparse

from rvrp.cli.routes.base import Router
from rvrp.cli.utils import graph_of, seed_of, write_manifest
from rvrp.services import dispatch_service

router = Router("gen-trace", "write a synthetic Poisson request trace")
router.argument("--graph", default=None)
router.argument("--rate", type=float, default=0.5, help="requests per second")
router.argument("--hours", type=float, default=2.0)
router.argument("--seed", type=int, default=None)
router.argument("--out", required=True, help="trace CSV to write")


@router.route
def gen_trace(args: argparse.Namespace) -> int:
    seed = seed_of(args)
    graph = graph_of(args)
    trace = dispatch_service.generate_synthetic_trace(graph, args.rate, args.hours * 3600, seed)
    dispatch_service.save(trace, path=args.out)
    print(f"{args.out}: {len(trace)} requests over {args.hours:g} h")
    write_manifest(args, [args.out])
    return 0
