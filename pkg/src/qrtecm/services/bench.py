"""Operation-count benchmark: projective Lyness against a twisted-Edwards cost model.

Lyness counts are measured by replaying each scalar's chain through the
instrumented projective operations. The Edwards side is arithmetic on
published per-operation costs only; no Edwards curve is evaluated.
"""

import logging
from dataclasses import dataclass
from typing import List

import gmpy2
import numpy as np

from ..core.arith import Modulus
from ..core.curves import FAMILIES, Family, LynessCurve, lyness_init, rescale_lyness
from ..core.ecm import sample_params
from ..core.projective import OpCounter, ProjPoint, lift, proj_add, proj_double
from ..core.scalar import Chain, ChainOp, build_chain
from ..models.config import BenchConfig
from ..models.reports import BenchRow, OpCounts
from ..utils.rng import stream

logger = logging.getLogger(__name__)

MODULUS_BITS = 128

EDWARDS_ADD = OpCounter(m=10, s=1, a=1, d=1)
EDWARDS_DOUBLE = OpCounter(m=3, s=4, a=1)


def edwards_cost(doubles: int, adds: int) -> OpCounter:
    total = OpCounter()
    for _ in range(doubles):
        total.merge(EDWARDS_DOUBLE)
    for _ in range(adds):
        total.merge(EDWARDS_ADD)
    return total


def _ratio(lyness: OpCounter, edwards: OpCounter) -> float:
    return lyness.m / edwards.m if edwards.m else 0.0


@dataclass
class BenchSetup:
    curve: LynessCurve
    seed_point: ProjPoint


def bench_setup(seed: int) -> BenchSetup:
    """A random normalised Lyness curve over a random 128-bit prime field."""
    rng = stream(seed, 0)
    p = gmpy2.next_prime(gmpy2.mpz_urandomb(rng, MODULUS_BITS) | (gmpy2.mpz(1) << (MODULUS_BITS - 1)))
    modulus = Modulus(p)
    curve = rescale_lyness(sample_params(Family.LYNESS, modulus, rng))
    return BenchSetup(curve, lift(lyness_init(curve)))


def replay_counts(setup: BenchSetup, chain: Chain) -> OpCounter:
    """Run every op of ``chain``. Collapsed pairs are not checked, so counts are always complete."""
    counter = OpCounter()
    point = setup.seed_point
    for op in chain.ops:
        if op is ChainOp.ADD:
            point = proj_add(setup.curve, point, counter)
        else:
            point = proj_double(setup.curve, point, counter)
    return counter


def _row(kind: str, op: str, bits: int, chain_d: int, chain_a: int, lyness: OpCounter) -> BenchRow:
    edwards = edwards_cost(chain_d, chain_a)
    return BenchRow(
        kind=kind,
        op=op,
        bits=bits,
        doubles=chain_d,
        adds=chain_a,
        lyness=OpCounts.from_counter(lyness),
        edwards=OpCounts.from_counter(edwards),
        ratio=_ratio(lyness, edwards),
    )


def op_rows(setup: BenchSetup) -> List[BenchRow]:
    """Single-operation costs: one add and one double on the seed point."""
    add_ctr, dbl_ctr = OpCounter(), OpCounter()
    proj_add(setup.curve, setup.seed_point, add_ctr)
    proj_double(setup.curve, setup.seed_point, dbl_ctr)
    return [
        _row("op", "add", 0, 0, 1, add_ctr),
        _row("op", "double", 0, 1, 0, dbl_ctr),
    ]


def random_scalars(config: BenchConfig) -> List[int]:
    """``scalars`` integers of exactly ``bits`` bits."""
    rng = stream(config.seed, 1)
    top = gmpy2.mpz(1) << (config.bits - 1)
    return [int(gmpy2.mpz_urandomb(rng, config.bits - 1) | top) for _ in range(config.scalars)]


def bench_report(config: BenchConfig) -> List[BenchRow]:
    """Per-operation rows, one row per scalar, then a summary row.

    The summary ratio is total Lyness M over total Edwards-model M; its
    ``ratio_std`` is the spread of the per-scalar ratios.
    """
    setup = bench_setup(config.seed)
    rows = op_rows(setup)
    total = OpCounter()
    doubles = adds = 0
    ratios = []
    for s in random_scalars(config):
        chain = build_chain(s, FAMILIES[Family.LYNESS].base)
        counts = replay_counts(setup, chain)
        row = _row("scalar", str(s), s.bit_length(), chain.doubles, chain.adds, counts)
        rows.append(row)
        ratios.append(row.ratio)
        total.merge(counts)
        doubles += chain.doubles
        adds += chain.adds
    summary = _row("summary", "total", config.bits, doubles, adds, total)
    summary.ratio_std = float(np.std(ratios))
    rows.append(summary)
    logger.info(
        "bench: %d scalars of %d bits, M ratio %.3f (sd %.3f)",
        config.scalars, config.bits, summary.ratio, summary.ratio_std,
    )
    return rows
