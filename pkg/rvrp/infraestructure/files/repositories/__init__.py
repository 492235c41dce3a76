from .graph import GraphRepository, graph_repository
from .instance import InstanceRepository, instance_repository
from .trace import TraceRepository, trace_repository
from .results import ResultsRepository, results_repository
