from __future__ import annotations
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union
import json
import os

from dotenv import load_dotenv

from .errors import ConfigError
from .types import Suite
from .utils import fmt, fmt_all, to_fraction

load_dotenv()

SCHEMA_VERSION = 1
TOOL_VERSION = "0.1.0"
DEFAULT_OUT_DIR = os.getenv("COMPOSITE_BETHE_OUT_DIR", ".")


@dataclass
class Config:
    c: Fraction = Fraction(1)
    max_L: int = 8
    max_parallel_checks: int = 4
    enable_cache: bool = True
    cache_size: int = 4096
    draw_bound: int = 40
    max_redraws: int = 50
    samples: int = 2


_DEFAULTS = Config()


@dataclass
class JobConfig:
    """One verification run: a chain, a split, the suites and the sweep ranges."""
    c: Fraction = _DEFAULTS.c
    L: int = 3
    xi: Optional[List[Fraction]] = None
    twist: Optional[List[Fraction]] = None
    split: Union[int, str] = 1
    suites: List[Suite] = field(default_factory=lambda: list(Suite))
    a_max: int = 2
    b_max: int = 2
    samples: int = _DEFAULTS.samples
    seed: int = 1
    out: Optional[str] = None
    max_L: int = _DEFAULTS.max_L
    jobs: int = _DEFAULTS.max_parallel_checks

    def __post_init__(self):
        self.c = to_fraction(self.c)
        if self.c == 0:
            raise ConfigError("c must be nonzero")
        if self.xi is not None:
            self.xi = [to_fraction(x) for x in self.xi]
        if self.twist is not None:
            self.twist = [to_fraction(x) for x in self.twist]
        self.suites = [s if isinstance(s, Suite) else _suite(s) for s in self.suites]
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.L, int) or self.L < 0:
            raise ConfigError(f"L must be a nonnegative integer, got {self.L!r}")
        if self.L > self.max_L:
            raise ConfigError(f"L={self.L} exceeds max_L={self.max_L}")
        if self.xi is not None and len(self.xi) != self.L:
            raise ConfigError(f"xi has {len(self.xi)} entries for L={self.L}")
        if self.twist is not None and (len(self.twist) != 3 or any(d == 0 for d in self.twist)):
            raise ConfigError("twist must be three nonzero rationals")
        if self.split != "sweep" and not (isinstance(self.split, int) and 0 <= self.split <= self.L):
            raise ConfigError(f"split must be 0..{self.L} or 'sweep', got {self.split!r}")
        for name in ("a_max", "b_max", "samples", "jobs"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ConfigError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.jobs == 0:
            raise ConfigError("jobs must be at least 1")

    @property
    def splits(self) -> List[int]:
        return list(range(self.L + 1)) if self.split == "sweep" else [self.split]

    def out_path(self) -> str:
        return self.out or os.path.join(DEFAULT_OUT_DIR, "report.json")

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> "JobConfig":
        doc = dict(doc)
        version = doc.pop("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported config schema_version {version!r}")
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**doc)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def from_json(cls, path: str) -> "JobConfig":
        try:
            with open(path, "r") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(doc)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "c": fmt(self.c),
            "L": self.L,
            "xi": fmt_all(self.xi) if self.xi is not None else None,
            "twist": fmt_all(self.twist) if self.twist is not None else None,
            "split": self.split,
            "suites": [s.value for s in self.suites],
            "a_max": self.a_max,
            "b_max": self.b_max,
            "samples": self.samples,
            "seed": self.seed,
            "max_L": self.max_L,
            "jobs": self.jobs,
        }


def _suite(name: str) -> Suite:
    try:
        return Suite(name)
    except ValueError:
        valid = ", ".join(s.value for s in Suite)
        raise ConfigError(f"unknown suite {name!r} (valid: {valid})") from None
