"""Stage-1 ECM driven by the QRT maps: pre-filtering, sampling, trials, recursion."""

from __future__ import annotations

import asyncio
import logging
import time
from collections import Counter as Multiset
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Type, Union

import gmpy2
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from ..models.config import EcmConfig, Pipeline
from ..models.outcome import (
    EcmOutcome,
    FactorFound,
    FactorizationResult,
    Status,
    TotalCollapse,
)
from ..utils.primes import is_probable_prime, small_primes
from ..utils.rng import trial_stream
from .arith import Modulus, NonInvertibleError, random_residue
from .curves import (
    FAMILIES,
    Curve,
    DegenerateParametersError,
    Family,
    LynessCurve,
    Somos4Curve,
    Somos5Curve,
    rescale_lyness,
)
from .metrics_manager import MetricsManager
from .projective import OpCounter
from .scalar import build_chain, exponent, scalar_multiple

logger = logging.getLogger(__name__)

TRIAL_DIVISION_LIMIT = 1000
PRP_ROUNDS = 64
SAMPLE_ATTEMPTS = 64


@dataclass(frozen=True)
class Composite:
    n: int


@dataclass(frozen=True)
class SmallFactor:
    p: int


@dataclass(frozen=True)
class ProbablePrime:
    n: int


@dataclass(frozen=True)
class Unit:
    pass


PrefilterResult = Union[Composite, SmallFactor, ProbablePrime, Unit]

CURVE_TYPES: Dict[Family, Type] = {
    Family.SOMOS4: Somos4Curve,
    Family.SOMOS5: Somos5Curve,
    Family.LYNESS: LynessCurve,
}


def prefilter(n: int, seed: int = 0) -> PrefilterResult:
    """Trial division below 1000, then a seeded 64-round Miller-Rabin test."""
    if n == 1:
        return Unit()
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    for p in small_primes(TRIAL_DIVISION_LIMIT):
        if n % p == 0:
            return ProbablePrime(n) if n == p else SmallFactor(p)
        if p * p > n:
            return ProbablePrime(n)
    if is_probable_prime(n, PRP_ROUNDS, seed):
        return ProbablePrime(n)
    return Composite(n)


def curve_from_values(family: Family, modulus: Modulus, values: Sequence[int]) -> Curve:
    return CURVE_TYPES[Family(family)](*(modulus(v) for v in values))


def _draw(family: Family, modulus: Modulus, rng) -> Curve:
    c = CURVE_TYPES[family](*(random_residue(rng, modulus) for _ in range(3)))
    if c.is_degenerate:
        logger.debug("resampling degenerate %s parameters", family.value)
        raise DegenerateParametersError(f"degenerate {family.value} parameters")
    return c


def sample_params(family: Family | str, modulus: Modulus, rng) -> Curve:
    """Random pencil member with the required parameters non-zero.

    Lyness draws with b = a^2 (the 5-torsion pencil) are resampled as well.
    """
    fam = Family(family)
    for attempt in Retrying(
        stop=stop_after_attempt(SAMPLE_ATTEMPTS),
        retry=retry_if_exception_type(DegenerateParametersError),
        reraise=True,
    ):
        with attempt:
            return _draw(fam, modulus, rng)
    raise AssertionError("unreachable")


def _describe(curve: Curve) -> Dict[str, str]:
    return {k: str(v) for k, v in curve.params().items()}


def run_trial(
    n: int,
    family: Family | str,
    params: Curve,
    s: int,
    pipeline: Pipeline | str = Pipeline.AFFINE,
    trial_index: int = 0,
) -> EcmOutcome:
    """One curve: seed point, then the chain to sP.

    Args:
        n: Number being factored
        family: QRT family of ``params``
        params: Pencil member over Z/NZ; Lyness curves are rescaled to a = 1
        s: Scalar to reach
        pipeline: affine or projective
        trial_index: Recorded on the outcome

    Returns:
        EcmOutcome: Found with the factor and the failing step, NoFactor
            with the chain length, or TotalCollapse when gcd = N
    """
    fam = Family(family)
    pipe = Pipeline(pipeline)
    counter = OpCounter()
    curve = params
    described = _describe(params)

    def outcome(status: Status, step: int, g: Optional[int] = None) -> EcmOutcome:
        return EcmOutcome(
            status=status,
            n=n,
            factor=g,
            trial_index=trial_index,
            step_index=step,
            op_counts=counter.snapshot(),
            params=described,
        )

    if fam is Family.LYNESS:
        try:
            curve = rescale_lyness(params)
        except NonInvertibleError as e:
            if e.g < n:
                return outcome(Status.FOUND, -1, e.g)
            return outcome(Status.TOTAL_COLLAPSE, -1)

    result = scalar_multiple(fam, curve, s, pipe.value, counter)
    if isinstance(result, FactorFound):
        logger.info("trial %d found %d (step %d)", trial_index, result.g, result.step)
        return outcome(Status.FOUND, result.step, result.g)
    if isinstance(result, TotalCollapse):
        logger.warning("trial %d collapsed (g = N) at step %d", trial_index, result.step)
        return outcome(Status.TOTAL_COLLAPSE, result.step)
    return outcome(Status.NO_FACTOR, len(build_chain(s, FAMILIES[fam].base).ops))


def _perfect_power(n: int) -> Optional[Tuple[int, int]]:
    for k in range(n.bit_length(), 1, -1):
        root, exact = gmpy2.iroot(n, k)
        if exact and root > 1:
            return int(root), k
    return None


class EcmRunner:
    """Trial loop for one composite, with B1 escalation between rounds."""

    def __init__(self, config: EcmConfig, metrics: Optional[MetricsManager] = None):
        self.config = config
        self.metrics = metrics if metrics is not None else MetricsManager()
        self.outcomes: List[EcmOutcome] = []

    def _trial(self, m: int, cfg: EcmConfig, round_index: int, i: int, s: int) -> EcmOutcome:
        modulus = Modulus(m)
        if cfg.fixed_params is not None:
            curve = curve_from_values(cfg.family, modulus, cfg.fixed_params)
        else:
            curve = sample_params(cfg.family, modulus, trial_stream(cfg.seed, round_index, i))
        return run_trial(m, cfg.family, curve, s, cfg.pipeline, i)

    async def split(self, m: int, cfg: EcmConfig) -> Optional[EcmOutcome]:
        """First Found outcome for ``m``, or None when every round is exhausted."""
        b1 = cfg.b1
        trials = 1 if cfg.fixed_params is not None else cfg.trials
        for round_index in range(cfg.rounds):
            s = cfg.s if cfg.s is not None else exponent(b1, cfg.exponent_mode.value)
            logger.info("round %d: N=%d B1=%d s has %d bits", round_index, m, b1, s.bit_length())
            for start in range(0, trials, cfg.threads):
                batch = range(start, min(start + cfg.threads, trials))
                if cfg.threads == 1:
                    results = [self._trial(m, cfg, round_index, i, s) for i in batch]
                else:
                    results = await asyncio.gather(
                        *(asyncio.to_thread(self._trial, m, cfg, round_index, i, s) for i in batch)
                    )
                # Results past the first Found are dropped so reports do not depend on threads.
                for out in results:
                    self.outcomes.append(out)
                    self.metrics.record_outcome(cfg.family.value, out)
                    if out.found:
                        return out
            if cfg.s is not None:
                break
            b1 *= cfg.escalation
        logger.warning("no factor of %d after %d rounds", m, cfg.rounds)
        return None


async def factorize_async(
    n: int, config: EcmConfig, metrics: Optional[MetricsManager] = None
) -> FactorizationResult:
    """Split ``n`` recursively into probable primes.

    Incomplete factorisations are reported through ``complete`` and
    ``unfactored`` rather than raised.
    """
    if n < 2:
        raise ValueError(f"cannot factor {n}")
    started = time.perf_counter()
    runner = EcmRunner(config, metrics)
    found: Multiset = Multiset()
    unfactored: List[int] = []
    work = [n]
    while work:
        m = work.pop()
        pf = prefilter(m, config.seed)
        if isinstance(pf, Unit):
            continue
        if isinstance(pf, ProbablePrime):
            found[m] += 1
            continue
        if isinstance(pf, SmallFactor):
            found[pf.p] += 1
            work.append(m // pf.p)
            continue
        power = _perfect_power(m)
        if power is not None:
            root, k = power
            work.extend([root] * k)
            continue
        cfg = config if m == n else config.for_cofactor()
        out = await runner.split(m, cfg)
        if out is None:
            unfactored.append(m)
            continue
        work.extend([out.factor, out.cofactor])

    return FactorizationResult(
        n=n,
        factors=sorted(found.items()),
        complete=not unfactored,
        unfactored=sorted(unfactored),
        outcomes=runner.outcomes,
        op_counts=runner.metrics.totals.snapshot(),
        elapsed_ms=(time.perf_counter() - started) * 1000.0,
    )


def factorize(
    n: int, config: EcmConfig, metrics: Optional[MetricsManager] = None
) -> FactorizationResult:
    """Blocking wrapper around ``factorize_async``."""
    return asyncio.run(factorize_async(n, config, metrics))
