import multiprocessing

from rvrp.core.config import settings
from rvrp.core.logging import get_logger

log = get_logger(__name__)


def initialize_debugger_if_needed():
    """Block until a debugpy client attaches when ``RVRP_DEBUGGER`` is set."""
    if not settings.DEBUGGER:
        return
    # pool workers would each try to bind the same port
    if multiprocessing.parent_process() is not None:
        return
    import debugpy

    debugpy.listen((settings.DEBUGGER_HOST, settings.DEBUGGER_PORT))
    log.warning(
        f"Waiting for a debugger on {settings.DEBUGGER_HOST}:{settings.DEBUGGER_PORT}"
    )
    debugpy.wait_for_client()
    log.info("Debugger attached")
