import logging
import sys

from rvrp.core.config import settings


class MyFormat(logging.Formatter):
    grey = "\x1b[38;21m"
    yellow = "\x1b[33;21m"
    red = "\x1b[31;21m"
    bold_red = "\x1b[31;1m"
    reset = "\x1b[0m"
    green = "\x1b[32m"
    line = "%(asctime)s [%(name)s] [%(levelname)-4s] %(message)s"

    COLORS = {
        logging.DEBUG: grey,
        logging.INFO: green,
        logging.WARNING: yellow,
        logging.ERROR: red,
        logging.CRITICAL: bold_red,
    }

    def __init__(self, colored: bool = True):
        super().__init__()
        self.formatters = {
            level: logging.Formatter(f"{color}{self.line}{self.reset}" if colored else self.line)
            for level, color in self.COLORS.items()
        }

    def format(self, record):
        formatter = self.formatters.get(record.levelno, self.formatters[logging.INFO])
        return formatter.format(record)


def get_logger(mod_name: str) -> logging.Logger:
    """Logger writing to stderr; stdout stays free for results."""
    log = logging.getLogger(mod_name)
    if not log.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(MyFormat(colored=sys.stderr.isatty()))
        log.addHandler(handler)
        log.propagate = False
    log.setLevel(settings.LOG_LEVEL.upper())
    return log
