import argparse
from typing import Any

from rvrp.core.config import settings
from rvrp.core.logging import get_logger
from rvrp.errors import ParameterError
from rvrp.schemas.graph import TransportGraph
from rvrp.schemas.manifest import RunManifest
from rvrp.services import graph_service, results_service
from rvrp.utils.seeds import resolve_seed

log = get_logger(__name__)

_INTERNAL = {"handler", "config", "subcommand"}


def _text(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def resolved_config(args: argparse.Namespace) -> dict[str, str]:
    return {
        key: _text(value)
        for key, value in sorted(vars(args).items())
        if key not in _INTERNAL and value is not None
    }


def seed_of(args: argparse.Namespace) -> int:
    """``--seed`` or ``RVRP_SEED``; the resolved value is written back to ``args``."""
    args.seed = resolve_seed(args.seed)
    return args.seed


def write_manifest(args: argparse.Namespace, outputs: list[str]) -> str:
    seed = seed_of(args)
    manifest = RunManifest(
        subcommand=args.subcommand,
        config=resolved_config(args),
        seed=seed,
        outputs=outputs,
    )
    return results_service.write_manifest(manifest, args.out)


def graph_of(args: argparse.Namespace) -> TransportGraph:
    """The ``--graph`` file, or the default lattice from settings."""
    if getattr(args, "graph", None):
        return graph_service.load_graph(args.graph)
    log.info(f"Using the default {settings.GRID_ROWS}x{settings.GRID_COLS} grid")
    return graph_service.build_grid(
        settings.GRID_ROWS, settings.GRID_COLS, settings.GRID_SPACING, settings.SPEED_MEAN
    )


def parse_pairs(text: str) -> dict[str, float]:
    """``rate=0.5,hours=2`` as a mapping of floats."""
    values = {}
    for item in filter(None, (x.strip() for x in text.split(","))):
        key, sep, value = item.partition("=")
        try:
            if not sep:
                raise ValueError
            values[key.strip().lower()] = float(value)
        except ValueError:
            raise ParameterError(f"expected key=value, got '{item}'")
    return values


def parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParameterError(f"expected a comma separated list of numbers, got '{text}'")
