"""Validated run configuration."""

import os
from enum import Enum
from typing import List, Optional, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.curves import FAMILIES, Family

SEED_ENV = "QRT_ECM_SEED"


class Pipeline(str, Enum):
    AFFINE = "affine"
    PROJECTIVE = "projective"


class ExponentMode(str, Enum):
    SINGLE = "single"
    PRODUCT = "product"


def default_seed() -> int:
    """Seed from QRT_ECM_SEED (a .env file is honoured), else 0."""
    load_dotenv()
    raw = os.getenv(SEED_ENV)
    return int(raw) if raw else 0


class EcmConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Family = Family.LYNESS
    b1: int = Field(default=1000, ge=2)
    trials: int = Field(default=20, ge=1)
    seed: int = Field(default=0, ge=0)
    pipeline: Pipeline = Pipeline.AFFINE
    exponent_mode: ExponentMode = ExponentMode.PRODUCT
    threads: int = Field(default=1, ge=1)
    rounds: int = Field(default=3, ge=1)
    escalation: int = Field(default=4, ge=2)
    fixed_params: Optional[Tuple[int, int, int]] = None
    s: Optional[int] = Field(default=None, ge=2)

    @model_validator(mode="after")
    def _check_combination(self) -> "EcmConfig":
        if self.pipeline is Pipeline.PROJECTIVE and self.family is not Family.LYNESS:
            raise ValueError("the projective pipeline requires family=lyness")
        if self.s is not None and self.s < FAMILIES[self.family].base:
            raise ValueError(
                f"s={self.s} is below the chain base {FAMILIES[self.family].base} of {self.family.value}"
            )
        return self

    def for_cofactor(self) -> "EcmConfig":
        """Configuration used when recursing on a split: fixed data no longer applies."""
        return self.model_copy(update={"fixed_params": None, "s": None})


class BenchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    bits: int = Field(default=64, ge=4)
    scalars: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0)


class PrngConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    modulus: int = Field(ge=3)
    q: int = 1
    b_table: List[int] = Field(min_length=1)
    seed: int = Field(default=0, ge=0)
    count: int = Field(default=1, ge=1)
    warmup: int = Field(default=16, ge=0)

    @field_validator("b_table")
    @classmethod
    def _period(cls, v: List[int]) -> List[int]:
        if len(v) not in (1, 2, 3, 5, 6):
            raise ValueError("b_table period must divide 6 or be 5")
        return v
