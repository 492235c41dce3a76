import argparse
from typing import Any, Callable

Handler = Callable[[argparse.Namespace], int | None]


class Router:
    """One subcommand: its flags and the handler that runs it."""

    def __init__(self, name: str, help: str):
        self.name = name
        self.help = help
        self.arguments: list[tuple[tuple[str, ...], dict[str, Any]]] = []
        self.handler: Handler | None = None
        self.parser: argparse.ArgumentParser | None = None

    def argument(self, *flags: str, **kwargs: Any) -> "Router":
        self.arguments.append((flags, kwargs))
        return self

    def route(self, handler: Handler) -> Handler:
        self.handler = handler
        return handler

    def register(self, subparsers) -> argparse.ArgumentParser:
        self.parser = subparsers.add_parser(self.name, help=self.help, description=self.help)
        for flags, kwargs in self.arguments:
            self.parser.add_argument(*flags, **kwargs)
        self.parser.add_argument(
            "--config", default=None, help="flat key=value file; flags override its values"
        )
        self.parser.set_defaults(handler=self.handler)
        return self.parser

    def apply_config(self, values: dict[str, str]) -> list[str]:
        """Use ``values`` as defaults for matching flags; returns the keys applied."""
        actions = {a.dest: a for a in self.parser._actions if a.dest not in ("help", "config")}
        defaults = {}
        for key, value in values.items():
            action = actions.get(key)
            if action is None:
                continue
            if isinstance(action.const, bool) and action.nargs == 0:
                defaults[key] = value.strip().lower() in ("1", "true", "yes")
            else:
                defaults[key] = value
            action.required = False
        self.parser.set_defaults(**defaults)
        return sorted(defaults)
