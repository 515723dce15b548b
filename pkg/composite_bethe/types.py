from __future__ import annotations
from typing import Any, Dict, List, Optional
from enum import Enum
from dataclasses import dataclass, field


class Verdict(str, Enum):
    OK = "ok"
    FAIL = "fail"
    SKIPPED = "skipped"


class Suite(str, Enum):
    RTT = "rtt"
    ACTIONS = "actions"
    BETHE_EQUIV = "bethe-equiv"
    BETHE_SYM = "bethe-sym"
    THEOREM1 = "theorem1"
    COROLLARY1 = "corollary1"
    GL2 = "gl2"
    COMPOSITE_ACTIONS = "composite-actions"
    LEDGERS = "ledgers"
    WEIGHT = "weight"
    MORPHISMS = "morphisms"
    COASSOC = "coassoc"


class GroupKind(str, Enum):
    VANISHING = "vanishing"
    MATCH = "match"
    TOTAL = "total"


@dataclass
class Witness:
    """First nonzero coefficient of a residual vector."""
    basis_index: int
    states: List[int]
    residual: str


@dataclass
class CheckResult:
    name: str
    verdict: Verdict
    witness: Optional[Witness] = None
    detail: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.verdict == Verdict.OK


@dataclass
class LedgerGroup:
    name: str
    kind: GroupKind
    members: List[str]
    target: Optional[str] = None
    verdict: Verdict = Verdict.OK
    witness: Optional[Witness] = None


@dataclass
class CheckRecord:
    suite: Suite
    instance: Dict[str, Any]
    verdict: Verdict
    witness: Optional[Dict[str, Any]] = None
    detail: Optional[str] = None
    wall_time: Optional[float] = None
    groups: List[Dict[str, Any]] = field(default_factory=list)
