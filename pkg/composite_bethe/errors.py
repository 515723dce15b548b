"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations
from typing import Any, Dict, Optional


class BetheError(Exception):
    pass


class PoleError(BetheError, ZeroDivisionError):
    """A rational function was evaluated on its pole."""


class DegenerateError(BetheError, ValueError):
    """Repeated arguments inside one parameter set."""


class GenericityError(BetheError, ValueError):
    def __init__(self, message: str, report: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.report = report or {}


class RangeError(BetheError, ValueError):
    pass


class CardinalityError(BetheError, ValueError):
    pass


class SplitError(BetheError):
    pass


class SkippedCheck(BetheError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class RetryExhausted(BetheError):
    pass


class ConfigError(BetheError, ValueError):
    pass
