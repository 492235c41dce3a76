from rvrp.core.config import settings, get_settings
from rvrp.core.logging import get_logger
