"""Addition chains over {+P via phi, x2 via psi} and their execution."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Tuple

import gmpy2

from .curves import FAMILIES, Curve, Family
from .projective import OpCounter

logger = logging.getLogger(__name__)


class ChainOp(str, Enum):
    ADD = "ADD"
    DOUBLE = "DOUBLE"


@dataclass(frozen=True)
class Chain:
    base: int
    ops: Tuple[ChainOp, ...]
    target: int

    @property
    def doubles(self) -> int:
        return sum(1 for op in self.ops if op is ChainOp.DOUBLE)

    @property
    def adds(self) -> int:
        return sum(1 for op in self.ops if op is ChainOp.ADD)

    def replay(self) -> List[int]:
        """Indices visited, starting with ``base``."""
        k = self.base
        seen = [k]
        for op in self.ops:
            k = k + 1 if op is ChainOp.ADD else 2 * k
            seen.append(k)
        return seen


def build_chain(s: int, base: int) -> Chain:
    """Backward greedy: halve while even and s >= 2*base, otherwise step down by one.

    This reaches the doubling lower bound; additions are cheap for the
    Lyness map so their count matters less.
    """
    if base < 2:
        raise ValueError(f"chain base must be >= 2, got {base}")
    if s < base:
        raise ValueError(f"target {s} is below the chain base {base}")
    ops: List[ChainOp] = []
    k = int(s)
    while k != base:
        if k % 2 == 0 and k >= 2 * base:
            ops.append(ChainOp.DOUBLE)
            k //= 2
        else:
            ops.append(ChainOp.ADD)
            k -= 1
    ops.reverse()
    return Chain(base, tuple(ops), int(s))


def stage1_exponent(b1: int) -> int:
    """lcm(1..B1): the product of the largest prime powers <= B1."""
    if b1 < 2:
        raise ValueError("B1 must be >= 2")
    s = gmpy2.mpz(1)
    p = gmpy2.mpz(2)
    while p <= b1:
        pk = p
        while pk * p <= b1:
            pk *= p
        s *= pk
        p = gmpy2.next_prime(p)
    return int(s)


def largest_prime_power(b1: int) -> int:
    if b1 < 2:
        raise ValueError("B1 must be >= 2")
    best = 2
    p = gmpy2.mpz(2)
    while p <= b1:
        pk = p
        while pk * p <= b1:
            pk *= p
        best = max(best, int(pk))
        p = gmpy2.next_prime(p)
    return best


def exponent(b1: int, mode: str = "product") -> int:
    if mode == "product":
        return stage1_exponent(b1)
    if mode == "single":
        return largest_prime_power(b1)
    raise ValueError(f"unknown exponent mode {mode!r}")


TraceHook = Callable[[int, str, int], None]


def scalar_multiple(
    family: Family | str,
    curve: Curve,
    s: int,
    pipeline: str = "affine",
    counter: Optional[OpCounter] = None,
    trace: Optional[TraceHook] = None,
):
    """sP for the family's prescribed seed, or the factor event met on the way.

    Returns ``IndexedPoint``, ``FactorFound`` or ``TotalCollapse``. The
    projective pipeline (Lyness, a = 1 only) reports factors at the final
    normalisation.
    """
    from .pipeline import make_pipeline

    fam = Family(family)
    chain = build_chain(s, FAMILIES[fam].base)
    runner = make_pipeline(fam, curve, pipeline, counter)
    return runner.run(chain, trace=trace)
