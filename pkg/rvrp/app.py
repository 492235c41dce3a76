import argparse
import sys
from pathlib import Path

from rvrp.cli.router import register_routes, routers
from rvrp.core.config import get_settings, read_config_file
from rvrp.core.debugger import initialize_debugger_if_needed
from rvrp.core.logging import get_logger
from rvrp.errors import BaseErrors, InputErrors
from rvrp.infraestructure.files import init_files_infraestructure

log = get_logger(__name__)


def create_app() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Redundant robot-to-goal assignment under travel-time uncertainty",
    )
    parser.add_argument("--version", action="version", version=settings.APP_VERSION)
    register_routes(parser)
    return parser


def apply_config_file(argv: list[str]) -> None:
    """Load ``--config`` of the selected subcommand as flag defaults."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    subcommand = next((a for a in argv if a in routers), None)
    if known.config is None or subcommand is None:
        return
    if not Path(known.config).is_file():
        raise InputErrors(f"file not found: {known.config}")
    applied = routers[subcommand].apply_config(read_config_file(known.config))
    log.info(f"Config {known.config}: {', '.join(applied) or 'no matching keys'}")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    app = create_app()
    try:
        apply_config_file(argv)
        try:
            args = app.parse_args(argv)
        except SystemExit as exit:
            # usage errors are input errors
            return 0 if not exit.code else 1
        initialize_debugger_if_needed()
        init_files_infraestructure()
        return args.handler(args) or 0
    except BaseErrors as error:
        log.error(error.detail)
        print(f"error: {error.detail}", file=sys.stderr)
        return error.code


if __name__ == "__main__":
    sys.exit(main())
