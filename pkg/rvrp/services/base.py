from typing import Generic, TypeVar

from rvrp.core.exceptions import NoRepositoryRegistered
from rvrp.core.logging import get_logger
from rvrp.protocols.files.repositories.base import RepositoryBase

log = get_logger(__name__)


ModelType = TypeVar("ModelType")
RepositoryType = TypeVar("RepositoryType", bound=RepositoryBase)


class ServiceBase(Generic[ModelType, RepositoryType]):
    def __init__(self, repository: RepositoryType = None):
        self.repository = repository

    def register_repository(self, repository: RepositoryType):
        log.info(f"Registering {repository.__class__.__name__} repository")
        self.repository = repository

    def load(self, *, path: str) -> ModelType:
        return self._repository().load(path=path)

    def save(self, obj: ModelType, *, path: str) -> None:
        self._repository().save(obj, path=path)

    def _repository(self) -> RepositoryType:
        if self.repository is None:
            raise NoRepositoryRegistered(self.__class__.__name__)
        return self.repository
