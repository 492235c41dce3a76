from rvrp.protocols.files.repositories.base import RepositoryBase
from rvrp.protocols.files.repositories.results import ResultsRepository
