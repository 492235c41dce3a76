import argparse

from rvrp.cli.routes.base import Router
from rvrp.cli.utils import seed_of, write_manifest
from rvrp.core.logging import get_logger
from rvrp.errors import GuardErrors
from rvrp.schemas.report import SolverMethod, SolverReport
from rvrp.services import instance_service, results_service, solver_service
from rvrp.utils.seeds import derive_rng

log = get_logger(__name__)

router = Router("solve", "run one assignment method on an instance file")
router.argument("--instance", required=True)
router.argument("--method", choices=[m.value for m in SolverMethod], default=SolverMethod.greedy.value)
router.argument(
    "--with-optimal",
    action="store_true",
    help="also solve exactly and certify the greedy bound when the instance is small enough",
)
router.argument("--seed", type=int, default=None)
router.argument("--out", default="rvrp-solve", help="prefix of the CSV report and manifest")


def _print(report: SolverReport) -> None:
    print(f"method            {report.method.value}")
    print(f"J0                {report.J0:.6f}")
    print(f"J                 {report.cost_J:.6f}")
    print(f"normalized        {report.normalized:.6f}")
    print(f"objective_calls   {report.objective_calls}")
    print(f"redundant_edges   {' '.join(f'{i}:{j}' for i, j in report.A)}")
    if report.certificate is not None:
        c = report.certificate
        print(f"bound             {c.lhs:.6f} <= {c.rhs:.6f} holds={str(c.holds).lower()}")


@router.route
def solve(args: argparse.Namespace) -> int:
    seed = seed_of(args)
    record = instance_service.load(path=args.instance)
    instance = instance_service.from_record(record)
    O = instance_service.initial_assignment(instance)
    method = SolverMethod(args.method)
    report = solver_service.solve(method, instance, O, rng_seed=derive_rng(seed, 0))
    reports = [report]

    if args.with_optimal:
        try:
            optimal = (
                report if method == SolverMethod.optimal
                else solver_service.exhaustive_optimal(instance, O)
            )
        except GuardErrors as error:
            log.warning(f"no bound certificate: {error.detail}")
        else:
            greedy = report if method == SolverMethod.greedy else solver_service.greedy(instance, O)
            greedy = greedy.model_copy(
                update={"certificate": solver_service.verify_bound(greedy, optimal)}
            )
            reports = [greedy if r.method == SolverMethod.greedy else r for r in reports]
            reports += [r for r in (greedy, optimal) if r.method not in {x.method for x in reports}]

    for r in reports:
        _print(r)
        print()
    path = results_service.write_csv(
        f"{args.out}.csv", SolverReport.csv_header(), [r.csv_row() for r in reports]
    )
    write_manifest(args, [path])
    return 0
