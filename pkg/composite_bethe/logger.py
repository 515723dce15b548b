"""Package logger. The level comes from COMPOSITE_BETHE_LOG_LEVEL, a .env file included."""

import logging
import os

from dotenv import load_dotenv

load_dotenv()

LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

logging.basicConfig(
    level=os.getenv("COMPOSITE_BETHE_LOG_LEVEL", "INFO"),
    format="%(asctime)s - %(levelname)s - %(message)s"
)

log = logging.getLogger("composite_bethe")


def set_level(level: str) -> None:
    log.setLevel(level.upper())
