import csv
from pathlib import Path

from pydantic import ValidationError

from rvrp.errors import ParseError
from rvrp.infraestructure.files.repositories.base import RepositoryBase
from rvrp.schemas.dispatch import RequestEvent, RequestTrace

COLUMNS = ["request_time_s", "pickup_node", "dropoff_node"]


class TraceRepository(RepositoryBase[RequestTrace]):
    def load(self, *, path: str) -> RequestTrace:
        events = []
        reader = csv.DictReader(self.decoded_lines(path))
        if reader.fieldnames is None or list(reader.fieldnames) != COLUMNS:
            raise ParseError(path, 1, f"expected header {','.join(COLUMNS)}")
        for row in reader:
            try:
                events.append(
                    RequestEvent(
                        request_time=float(row["request_time_s"]),
                        pickup=int(row["pickup_node"]),
                        dropoff=int(row["dropoff_node"]),
                    )
                )
            except (TypeError, ValueError, ValidationError) as error:
                raise ParseError(path, reader.line_num, str(error))
        return self.model(events=events)

    def save(self, obj: RequestTrace, *, path: str) -> None:
        file = Path(path)
        file.parent.mkdir(parents=True, exist_ok=True)
        with file.open("w", encoding=self.encoding, newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(COLUMNS)
            for event in obj.events:
                writer.writerow(
                    [f"{event.request_time:.3f}", event.pickup, event.dropoff]
                )


trace_repository = TraceRepository(RequestTrace)
