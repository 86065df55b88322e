"""Trial outcomes and per-run results."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

from ..core.curves import IndexedPoint
from ..core.projective import OpCounter


class Status(str, Enum):
    FOUND = "Found"
    NO_FACTOR = "NoFactor"
    TOTAL_COLLAPSE = "TotalCollapse"


@dataclass(frozen=True)
class FactorFound:
    g: int
    step: int = -1


@dataclass(frozen=True)
class TotalCollapse:
    step: int = -1


ScalarResult = Union[IndexedPoint, FactorFound, TotalCollapse]


@dataclass
class EcmOutcome:
    """Result of one trial. ``step_index`` -1 means the seed point computation."""

    status: Status
    n: int
    factor: Optional[int] = None
    cofactor: Optional[int] = None
    trial_index: int = 0
    step_index: int = -1
    op_counts: OpCounter = field(default_factory=OpCounter)
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status is Status.FOUND:
            f = self.factor
            assert f is not None and 1 < f < self.n and self.n % f == 0
            if self.cofactor is None:
                self.cofactor = self.n // f
            assert f * self.cofactor == self.n

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


@dataclass
class FactorizationResult:
    """What ``factorize`` returns: factors with multiplicity plus a run report."""

    n: int
    factors: List[Tuple[int, int]] = field(default_factory=list)
    complete: bool = True
    unfactored: List[int] = field(default_factory=list)
    outcomes: List[EcmOutcome] = field(default_factory=list)
    op_counts: OpCounter = field(default_factory=OpCounter)
    elapsed_ms: float = 0.0

    def flat(self) -> List[int]:
        out: List[int] = []
        for p, k in sorted(self.factors):
            out.extend([p] * k)
        return out

    @property
    def first_found(self) -> Optional[EcmOutcome]:
        return next((o for o in self.outcomes if o.found), None)
