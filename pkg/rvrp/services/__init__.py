from .graph import graph_service
from .uncertainty import uncertainty_service
from .instance import instance_service
from .solvers import solver_service
from .benchmark import benchmark_service
from .dispatch import dispatch_service
from .results import results_service
