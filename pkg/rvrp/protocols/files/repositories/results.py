from typing import Protocol, Iterable


class ResultsRepository(Protocol):
    def write_csv(
        self, *, path: str, header: list[str], rows: Iterable[list[str]]
    ) -> None:
        ...

    def write_plot_data(
        self, *, path: str, columns: list[str], rows: Iterable[Iterable[float]]
    ) -> None:
        ...

    def write_flat(self, *, path: str, values: dict[str, str]) -> None:
        ...
