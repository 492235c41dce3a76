import argparse
from pathlib import Path

from rvrp.cli.routes.base import Router
from rvrp.cli.utils import graph_of, seed_of, write_manifest
from rvrp.core.config import settings
from rvrp.errors import ParameterError
from rvrp.schemas.instance import InstanceRecord
from rvrp.schemas.noise import NoiseSpec
from rvrp.services import graph_service, instance_service
from rvrp.utils.seeds import derive_rng

router = Router("gen-instance", "sample robots and goals on a graph and write an instance file")
router.argument("--graph", default=None, help="graph file; the default grid is written next to --out when omitted")
router.argument("--robots", type=int, required=True, help="N")
router.argument("--goals", type=int, required=True, help="M")
router.argument("--cap", type=int, default=None, help="deployment cap N_d, defaults to N")
router.argument("--noise", default="gaussian:100")
router.argument("--p-min", type=float, default=settings.P_MIN)
router.argument("--seed", type=int, default=None)
router.argument("--out", required=True, help="instance file to write")


@router.route
def gen_instance(args: argparse.Namespace) -> int:
    seed = seed_of(args)
    graph = graph_of(args)
    outputs = []
    if not args.graph:
        args.graph = str(Path(args.out).with_suffix(".graph"))
        graph_service.save(graph, path=args.graph)
        outputs.append(args.graph)

    n, m = args.robots, args.goals
    if n + m > graph.n_nodes:
        raise ParameterError(f"N + M = {n + m} exceeds the {graph.n_nodes} graph nodes")
    cap = n if args.cap is None else args.cap
    nodes = derive_rng(seed, 0).choice(graph.n_nodes, size=n + m, replace=False).tolist()
    record = InstanceRecord(
        graph_path=str(Path(args.graph).resolve()),
        true_nodes=nodes[:n],
        goal_nodes=nodes[n:],
        noise=NoiseSpec.parse(args.noise),
        deployment_cap=cap,
        p_min=args.p_min,
        seed=seed,
    )
    # fails early on an invalid cap or a degenerate belief
    instance_service.from_record(record, graph=graph)
    instance_service.save(record, path=args.out)
    outputs.append(args.out)
    print(f"{args.out}: N={n} M={m} N_d={cap} noise={record.noise}")
    write_manifest(args, outputs)
    return 0
