from pathlib import Path
from typing import Generic, Iterator, TypeVar

from rvrp.errors import InputErrors, ParseError

ModelType = TypeVar("ModelType")


class RepositoryBase(Generic[ModelType]):
    """Line-oriented text file access shared by the concrete repositories."""

    def __init__(self, model: type[ModelType], encoding: str = "utf-8"):
        self.model = model
        self.encoding = encoding

    def decoded_lines(self, path: str) -> list[str]:
        """Every line of ``path`` decoded, line endings kept."""
        file = Path(path)
        if not file.is_file():
            raise InputErrors(f"file not found: {path}")
        lines = []
        with file.open("rb") as handle:
            for number, raw in enumerate(handle, start=1):
                try:
                    lines.append(raw.decode(self.encoding))
                except UnicodeDecodeError as error:
                    raise ParseError(
                        path, number, f"invalid {self.encoding} byte at column {error.start + 1}"
                    ) from None
        return lines

    def read_lines(self, path: str) -> Iterator[tuple[int, str]]:
        """
        Yield ``(line_number, content)`` for every non-blank line with
        ``#`` comments removed.
        """
        for number, raw in enumerate(self.decoded_lines(path), start=1):
            content = raw.split("#", 1)[0].strip()
            if content:
                yield number, content

    def write_lines(self, path: str, lines: list[str]) -> None:
        file = Path(path)
        file.parent.mkdir(parents=True, exist_ok=True)
        file.write_text("\n".join(lines) + "\n", encoding=self.encoding)
