"""Shared fixtures and hypothesis settings."""

import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from qrtecm.core.arith import Modulus

GOLDEN = Path(__file__).parent / "golden"

# Small primes keep exhaustive sweeps cheap; 10007 is the "p ~ 10^4" field.
P_SMALL = 101
P_MID = 10007

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def f101() -> Modulus:
    return Modulus(P_SMALL)


@pytest.fixture
def fp() -> Modulus:
    return Modulus(P_MID)


@pytest.fixture
def golden():
    def load(name: str):
        return json.loads((GOLDEN / name).read_text())

    return load
