"""JSON-lines output rows.

Every line the CLI prints is one of these models, tagged by ``event``;
``validate_line`` parses a line back against them.
"""

from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, TypeAdapter

from ..core.projective import OpCounter
from .outcome import EcmOutcome, FactorizationResult


class OpCounts(BaseModel):
    M: int = 0
    S: int = 0
    B: int = 0
    A: int = 0
    D: int = 0

    @classmethod
    def from_counter(cls, c: OpCounter) -> "OpCounts":
        return cls(M=c.m, S=c.s, B=c.b, A=c.a, D=c.d)


class TrialRow(BaseModel):
    event: Literal["trial"] = "trial"
    n: int
    status: str
    factor: Optional[int] = None
    cofactor: Optional[int] = None
    trial: int
    step: int
    m_count: int
    b_count: int
    params: Dict[str, str] = Field(default_factory=dict)

    @classmethod
    def from_outcome(cls, o: EcmOutcome) -> "TrialRow":
        return cls(
            n=o.n,
            status=o.status.value,
            factor=o.factor,
            cofactor=o.cofactor,
            trial=o.trial_index,
            step=o.step_index,
            m_count=o.op_counts.m,
            b_count=o.op_counts.b,
            params={k: str(v) for k, v in o.params.items()},
        )


class FactorReport(BaseModel):
    """Final line of ``factor``: the first split and the full factorisation.

    ``status`` is Found when n was split, Prime when n itself is a probable
    prime, and NoFactor otherwise. ``elapsed_ms`` is only filled on request
    so that repeated runs print identical lines.
    """

    event: Literal["result"] = "result"
    n: int
    status: str
    factor: Optional[int] = None
    cofactor: Optional[int] = None
    trial: Optional[int] = None
    step: Optional[int] = None
    m_count: int
    b_count: int
    elapsed_ms: Optional[float] = None
    factors: List[Tuple[int, int]] = Field(default_factory=list)
    complete: bool
    unfactored: List[int] = Field(default_factory=list)

    @classmethod
    def from_result(cls, r: FactorizationResult, timing: bool = False) -> "FactorReport":
        first = r.first_found
        split = bool(r.factors) and r.flat() != [r.n]
        return cls(
            n=r.n,
            status="Found" if split else ("Prime" if r.complete else "NoFactor"),
            factor=first.factor if first else None,
            cofactor=first.cofactor if first else None,
            trial=first.trial_index if first else None,
            step=first.step_index if first else None,
            m_count=r.op_counts.m,
            b_count=r.op_counts.b,
            elapsed_ms=round(r.elapsed_ms, 3) if timing else None,
            factors=list(r.factors),
            complete=r.complete,
            unfactored=list(r.unfactored),
        )


class ChainTraceRow(BaseModel):
    event: Literal["chain"] = "chain"
    step: int
    op: str
    index: int


class BenchRow(BaseModel):
    event: Literal["bench"] = "bench"
    kind: Literal["op", "scalar", "summary"]
    op: str
    bits: int
    doubles: int
    adds: int
    lyness: OpCounts
    edwards: OpCounts
    ratio: float
    ratio_std: Optional[float] = None


class SequenceRow(BaseModel):
    event: Literal["sequence"] = "sequence"
    kind: str
    index: int
    tau: str
    u: Optional[str] = None


class PrngReport(BaseModel):
    event: Literal["prng"] = "prng"
    modulus: int
    q: int
    b_table: List[int]
    seed: int
    count: int
    reseeds: int
    blocks: List[str]
    monobit: float


class TwistRow(BaseModel):
    A: str
    B: str
    x: str
    y: str
    on_curve: bool


class TransportRow(BaseModel):
    n: int
    weierstrass: Optional[Tuple[str, str]] = None
    somos4: Optional[Tuple[str, str]] = None
    lyness: Optional[Tuple[str, str]] = None
    somos5: Optional[Tuple[str, str]] = None


class ConvertReport(BaseModel):
    event: Literal["convert"] = "convert"
    modulus: Optional[int] = None
    params: Dict[str, str]
    degeneracies: List[str] = Field(default_factory=list)
    twist: Optional[TwistRow] = None
    points: List[TransportRow] = Field(default_factory=list)


Row = Annotated[
    Union[
        TrialRow,
        FactorReport,
        ChainTraceRow,
        BenchRow,
        SequenceRow,
        PrngReport,
        ConvertReport,
    ],
    Field(discriminator="event"),
]

_ROW = TypeAdapter(Row)


def validate_line(line: str) -> BaseModel:
    """Parse one output line; raises ``pydantic.ValidationError`` if it fits no row model."""
    return _ROW.validate_json(line)
