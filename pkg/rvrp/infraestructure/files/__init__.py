from rvrp.services import (
    dispatch_service,
    graph_service,
    instance_service,
    results_service,
)
from rvrp.infraestructure.files.repositories import (
    graph_repository,
    instance_repository,
    results_repository,
    trace_repository,
)


def init_files_infraestructure() -> None:
    # Inputs
    graph_service.register_repository(repository=graph_repository)
    instance_service.register_repository(repository=instance_repository)
    dispatch_service.register_repository(repository=trace_repository)

    # Outputs
    results_service.register_repository(repository=results_repository)
