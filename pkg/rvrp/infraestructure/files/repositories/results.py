import csv
from pathlib import Path
from typing import Iterable


class ResultsRepository:
    """Writes result tables, plot data and flat key=value files."""

    def __init__(self, encoding: str = "utf-8"):
        self.encoding = encoding

    def write_csv(
        self, *, path: str, header: list[str], rows: Iterable[list[str]]
    ) -> None:
        file = self._prepare(path)
        with file.open("w", encoding=self.encoding, newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)

    def write_plot_data(
        self, *, path: str, columns: list[str], rows: Iterable[Iterable[float]]
    ) -> None:
        """Whitespace separated columns readable by gnuplot."""
        file = self._prepare(path)
        lines = ["# " + " ".join(columns)]
        lines += [" ".join(f"{value:.9g}" for value in row) for row in rows]
        file.write_text("\n".join(lines) + "\n", encoding=self.encoding)

    def write_flat(self, *, path: str, values: dict[str, str]) -> None:
        file = self._prepare(path)
        lines = [f"{key}={value}" for key, value in values.items()]
        file.write_text("\n".join(lines) + "\n", encoding=self.encoding)

    @staticmethod
    def _prepare(path: str) -> Path:
        file = Path(path)
        file.parent.mkdir(parents=True, exist_ok=True)
        return file


results_repository = ResultsRepository()
