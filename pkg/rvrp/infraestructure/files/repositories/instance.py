from pathlib import Path

from pydantic import ValidationError

from rvrp.errors import ParseError
from rvrp.infraestructure.files.repositories.base import RepositoryBase
from rvrp.schemas.instance import InstanceRecord
from rvrp.schemas.noise import NoiseSpec

HEADER = "rvrp-instance v1"


class InstanceRepository(RepositoryBase[InstanceRecord]):
    """
    Versioned ``key=value`` instance files. A relative ``graph`` path is
    resolved against the directory of the instance file.
    """

    def load(self, *, path: str) -> InstanceRecord:
        lines = self.read_lines(path)
        first = next(lines, None)
        if first is None or first[1] != HEADER:
            raise ParseError(path, first[0] if first else 1, f"missing header '{HEADER}'")
        values: dict[str, str] = {}
        for number, line in lines:
            key, sep, value = line.partition("=")
            if not sep:
                raise ParseError(path, number, "expected key=value")
            values[key.strip()] = value.strip()
        try:
            graph_path = Path(values.pop("graph"))
            if not graph_path.is_absolute():
                graph_path = Path(path).parent / graph_path
            return self.model(
                graph_path=str(graph_path),
                true_nodes=_ints(values.pop("true_nodes")),
                goal_nodes=_ints(values.pop("goal_nodes")),
                noise=NoiseSpec.parse(values.pop("noise", "none")),
                **values,
            )
        except (KeyError, ValueError, ValidationError) as error:
            raise ParseError(path, 1, f"invalid instance record: {error}")

    def save(self, obj: InstanceRecord, *, path: str) -> None:
        self.write_lines(
            path,
            [
                HEADER,
                f"graph={obj.graph_path}",
                f"true_nodes={','.join(map(str, obj.true_nodes))}",
                f"goal_nodes={','.join(map(str, obj.goal_nodes))}",
                f"noise={obj.noise}",
                f"deployment_cap={obj.deployment_cap}",
                f"p_min={obj.p_min!r}",
                f"seed={obj.seed}",
            ],
        )


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


instance_repository = InstanceRepository(InstanceRecord)
