from typing import Iterable

from rvrp.core.exceptions import NoRepositoryRegistered
from rvrp.core.logging import get_logger
from rvrp.protocols.files.repositories.results import ResultsRepository
from rvrp.schemas.manifest import RunManifest

log = get_logger(__name__)


class ResultsService:
    def __init__(self, repository: ResultsRepository = None):
        self.repository = repository

    def register_repository(self, repository: ResultsRepository):
        log.info(f"Registering {repository.__class__.__name__} repository")
        self.repository = repository

    def write_csv(self, path: str, header: list[str], rows: Iterable[list[str]]) -> str:
        self._repository().write_csv(path=path, header=header, rows=rows)
        log.info(f"Wrote {path}")
        return path

    def write_plot_data(
        self, path: str, columns: list[str], rows: Iterable[Iterable[float]]
    ) -> str:
        self._repository().write_plot_data(path=path, columns=columns, rows=rows)
        log.info(f"Wrote {path}")
        return path

    def write_flat(self, path: str, values: dict[str, str]) -> str:
        self._repository().write_flat(path=path, values=values)
        log.info(f"Wrote {path}")
        return path

    def write_manifest(self, manifest: RunManifest, out: str) -> str:
        """``<out>.manifest``, readable back through ``--config``."""
        return self.write_flat(f"{out}.manifest", manifest.flat())

    def _repository(self) -> ResultsRepository:
        if self.repository is None:
            raise NoRepositoryRegistered(self.__class__.__name__)
        return self.repository


results_service = ResultsService()
