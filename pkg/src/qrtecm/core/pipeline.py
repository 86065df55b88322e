"""Chain execution pipelines for the QRT maps."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import Any, Optional

from ..models.outcome import FactorFound, ScalarResult, TotalCollapse
from .arith import NonInvertible, NonInvertibleError, Residue
from .curves import FAMILIES, Curve, Family, IndexedPoint, LynessCurve, lyness_init
from .projective import (
    Affine,
    OpCounter,
    ProjPoint,
    lift,
    normalize,
    proj_add,
    proj_double,
)
from .scalar import Chain, ChainOp, TraceHook

logger = logging.getLogger(__name__)


class _Collapsed(Exception):
    pass


class ChainPipeline(ABC):
    """Runs an addition chain from the family's seed point.

    Subclasses supply the seed, the two chain steps and the final
    extraction; ``run`` turns failed divisions into factor events.
    """

    def __init__(self, family: Family, curve: Curve, counter: Optional[OpCounter] = None):
        self.family = family
        self.maps = FAMILIES[family]
        self.curve = curve
        self.counter = counter if counter is not None else OpCounter()
        self.modulus = int(next(iter(curve.params().values())).modulus.n)

    @abstractmethod
    def seed(self) -> Any:
        pass

    @abstractmethod
    def add(self, state: Any) -> Any:
        pass

    @abstractmethod
    def double(self, state: Any) -> Any:
        pass

    @abstractmethod
    def finish(self, state: Any, step: int) -> ScalarResult:
        pass

    def _event(self, g: int, step: int) -> ScalarResult:
        if g >= self.modulus:
            logger.debug("total collapse at step %d", step)
            return TotalCollapse(step)
        logger.debug("factor %d at step %d", g, step)
        return FactorFound(g, step)

    def run(self, chain: Chain, trace: Optional[TraceHook] = None) -> ScalarResult:
        step = -1
        try:
            state = self.seed()
            for step, op in enumerate(chain.ops):
                state = self.add(state) if op is ChainOp.ADD else self.double(state)
                if trace is not None:
                    trace(step, op.value, state.n)
            return self.finish(state, len(chain.ops))
        except NonInvertibleError as e:
            return self._event(e.g, step)
        except _Collapsed:
            logger.debug("degenerate projective pair at step %d", step)
            return TotalCollapse(step)


def _rebind(curve: Curve, counter: OpCounter) -> Curve:
    """Copy of ``curve`` whose residues tally multiplications into ``counter``."""
    values = curve.params()
    mod = next(iter(values.values())).modulus.with_counter(counter)
    moved = {k: Residue(v.value, mod) for k, v in values.items()}
    return type(curve)(**moved)


class AffinePipeline(ChainPipeline):
    def __init__(self, family: Family, curve: Curve, counter: Optional[OpCounter] = None):
        mod = next(iter(curve.params().values())).modulus
        if counter is None:
            counter = mod.counter
        super().__init__(family, curve, counter)
        if mod.counter is not self.counter:
            self.curve = _rebind(curve, self.counter)

    def seed(self) -> IndexedPoint:
        return self.maps.init(self.curve)

    def add(self, state: IndexedPoint) -> IndexedPoint:
        return self.maps.step(self.curve, state)

    def double(self, state: IndexedPoint) -> IndexedPoint:
        return self.maps.double(self.curve, state)

    def finish(self, state: IndexedPoint, step: int) -> ScalarResult:
        return state


class ProjectivePipeline(ChainPipeline):
    """Lyness only, a = 1. One gcd at the end instead of an inversion per step."""

    def __init__(self, family: Family, curve: Curve, counter: Optional[OpCounter] = None):
        if family is not Family.LYNESS or not isinstance(curve, LynessCurve):
            raise ValueError("the projective pipeline is only defined for the Lyness family")
        if curve.a != 1:
            raise ValueError("normalise the Lyness curve to a = 1 before the projective pipeline")
        super().__init__(family, curve, counter)

    def seed(self) -> ProjPoint:
        return lift(lyness_init(self.curve))

    def add(self, state: ProjPoint) -> ProjPoint:
        return proj_add(self.curve, state, self.counter)

    def double(self, state: ProjPoint) -> ProjPoint:
        out = proj_double(self.curve, state, self.counter)
        if out.is_collapsed():
            raise _Collapsed()
        return out

    def finish(self, state: ProjPoint, step: int) -> ScalarResult:
        r = normalize(state)
        if isinstance(r, Affine):
            return IndexedPoint(state.n, r.x, r.y)
        if isinstance(r, NonInvertible):
            return self._event(r.g, step)
        return TotalCollapse(step)


PIPELINES = {"affine": AffinePipeline, "projective": ProjectivePipeline}


def make_pipeline(
    family: Family, curve: Curve, pipeline: str = "affine", counter: Optional[OpCounter] = None
) -> ChainPipeline:
    """Pipeline instance for ``pipeline`` ("affine" or "projective").

    Args:
        family: QRT family the curve belongs to
        curve: Pencil member over Z/NZ
        pipeline: Pipeline name
        counter: Receives the operation tallies; a fresh one when omitted

    Returns:
        ChainPipeline: Ready to ``run`` a chain

    Raises:
        ValueError: For an unknown name, or the projective pipeline on
            anything but a normalised Lyness curve
    """
    try:
        cls = PIPELINES[pipeline]
    except KeyError:
        raise ValueError(f"unknown pipeline {pipeline!r}") from None
    return cls(family, curve, counter)


__all__ = [
    "AffinePipeline",
    "ChainPipeline",
    "ProjectivePipeline",
    "make_pipeline",
]
