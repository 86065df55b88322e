"""Run metrics collection and aggregation."""

import logging
from typing import Dict, Optional

from prometheus_client import CollectorRegistry, Counter, write_to_textfile

from ..models.outcome import EcmOutcome
from .projective import OpCounter

logger = logging.getLogger(__name__)


class MetricsManager:
    """Collects trial outcomes and operation counts for one factorisation run.

    Every manager owns its registry, so concurrent runs never share counters.
    """

    def __init__(self, registry: Optional[CollectorRegistry] = None):
        self.registry = registry if registry is not None else CollectorRegistry()
        self.trials = Counter(
            "qrtecm_trials",
            "ECM trials by family and outcome",
            ["family", "status"],
            registry=self.registry,
        )
        self.multiplications = Counter(
            "qrtecm_multiplications",
            "Ring multiplications by kind",
            ["kind"],
            registry=self.registry,
        )
        self.factors = Counter(
            "qrtecm_factors", "Non-trivial factors found", registry=self.registry
        )
        self.totals = OpCounter()

    def record_outcome(self, family: str, outcome: EcmOutcome) -> None:
        """Record one trial.

        Args:
            family: QRT family used for the trial
            outcome: The trial's outcome
        """
        self.trials.labels(family=family, status=outcome.status.value).inc()
        ops = outcome.op_counts
        for kind in ("m", "s", "b"):
            value = getattr(ops, kind)
            if value:
                self.multiplications.labels(kind=kind.upper()).inc(value)
        if outcome.found:
            self.factors.inc()
        self.totals.merge(ops)

    def trial_count(self, family: str, status: str) -> float:
        """Trials recorded for ``family`` with ``status``; 0.0 when none."""
        value = self.registry.get_sample_value(
            "qrtecm_trials_total", {"family": family, "status": status}
        )
        return value or 0.0

    def snapshot(self) -> Dict[str, float]:
        """Flat view of every sample in the registry."""
        out: Dict[str, float] = {}
        for metric in self.registry.collect():
            for sample in metric.samples:
                if not sample.name.endswith("_total"):
                    continue
                labels = ",".join(f"{k}={v}" for k, v in sorted(sample.labels.items()))
                key = f"{sample.name}{{{labels}}}" if labels else sample.name
                out[key] = sample.value
        return out

    def write(self, path: str) -> None:
        """Export the registry in the Prometheus textfile format.

        Args:
            path: Destination file, overwritten
        """
        write_to_textfile(path, self.registry)
        logger.info("metrics written to %s", path)
