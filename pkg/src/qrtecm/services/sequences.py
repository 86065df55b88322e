"""Somos-4/5/7 and elliptic divisibility sequences, and the q-Lyness stream.

The Somos engines are independent oracles for the QRT orbits: the
quotients returned by ``tau_to_u`` iterate the corresponding map.
Terms are ``gmpy2.mpq`` in exact mode or ``Residue`` mod N.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Iterator, List, Optional, Sequence, Tuple

import gmpy2
import numpy as np

from ..core.arith import Modulus, NonInvertibleError, Residue
from ..core.curves import Scalar

logger = logging.getLogger(__name__)

WARMUP = 16
BLOCK_BYTES = 8


class DegenerateSequenceError(ArithmeticError):
    """A sequence whose recurrence would divide by zero."""


class SomosKind(str, Enum):
    SOMOS4 = "somos4"
    SOMOS5 = "somos5"
    SOMOS7 = "somos7"


ORDER = {SomosKind.SOMOS4: 4, SomosKind.SOMOS5: 5, SomosKind.SOMOS7: 7}

# (numerator offsets, denominator offsets) of u_n relative to n.
U_OFFSETS = {
    SomosKind.SOMOS4: ((-1, 1), (0, 0)),
    SomosKind.SOMOS5: ((-2, 1), (-1, 0)),
    SomosKind.SOMOS7: ((-3, 2), (-1, 0)),
}


@dataclass
class SomosSeq:
    kind: SomosKind
    coeffs: Tuple[Scalar, Scalar]
    terms: List[Scalar] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, i: int) -> Scalar:
        return self.terms[i]


def somos_sequence(
    kind: SomosKind | str,
    coeffs: Sequence[Any],
    initial: Sequence[Any],
    modulus: Optional[Modulus] = None,
) -> SomosSeq:
    """Start a Somos sequence.

    Args:
        kind: somos4, somos5 or somos7
        coeffs: The two recurrence coefficients
        initial: At least as many starting terms as the order
        modulus: Work in Z/NZ; exact rationals when omitted

    Returns:
        SomosSeq: The sequence holding just the initial terms

    Raises:
        ValueError: When too few initial terms are given
    """
    kind = SomosKind(kind)
    if len(initial) < ORDER[kind]:
        raise ValueError(f"{kind.value} needs {ORDER[kind]} initial terms, got {len(initial)}")
    conv = modulus if modulus is not None else gmpy2.mpq
    return SomosSeq(kind, (conv(coeffs[0]), conv(coeffs[1])), [conv(t) for t in initial])


def _rhs(seq: SomosSeq, n: int) -> Scalar:
    t = seq.terms
    c1, c2 = seq.coeffs
    if seq.kind is SomosKind.SOMOS4:
        return c1 * t[n + 3] * t[n + 1] + c2 * t[n + 2] * t[n + 2]
    if seq.kind is SomosKind.SOMOS5:
        return c1 * t[n + 4] * t[n + 1] + c2 * t[n + 3] * t[n + 2]
    return c1 * t[n + 6] * t[n + 1] + c2 * t[n + 4] * t[n + 3]


def somos_extend(seq: SomosSeq, count: int) -> SomosSeq:
    """Append ``count`` terms in place; returns ``seq`` for chaining.

    Modular sequences raise ``NonInvertibleError`` on a non-unit divisor,
    exact ones ``DegenerateSequenceError`` on a zero divisor.
    """
    k = ORDER[seq.kind]
    for _ in range(count):
        n = len(seq.terms) - k
        div = seq.terms[n]
        if not isinstance(div, Residue) and div == 0:
            raise DegenerateSequenceError(f"tau_{n} = 0")
        seq.terms.append(_rhs(seq, n) / div)
    return seq


def tau_to_u(seq: SomosSeq, n: int) -> Scalar:
    (p, q), (r, s) = U_OFFSETS[seq.kind]
    if min(p, r) + n < 0 or q + n >= len(seq.terms):
        raise IndexError(f"u_{n} needs terms outside the computed range")
    t = seq.terms
    den = t[n + r] * t[n + s]
    if not isinstance(den, Residue) and den == 0:
        raise DegenerateSequenceError(f"u_{n} has a zero denominator")
    return t[n + p] * t[n + q] / den


def is_integral(seq: SomosSeq) -> bool:
    """True when every exact term has denominator one."""
    return all(gmpy2.mpq(t).denominator == 1 for t in seq.terms)


@dataclass
class EdsSeq:
    """Elliptic divisibility sequence, tau_0 = 0 and tau_1 = 1."""

    tau2: int
    tau3: int
    tau4: int
    terms: List[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.tau2 == 0:
            raise DegenerateSequenceError("tau_2 = 0")
        if self.tau4 % self.tau2:
            raise DegenerateSequenceError(f"tau_2 = {self.tau2} does not divide tau_4 = {self.tau4}")
        if not self.terms:
            self.terms = [0, 1, self.tau2, self.tau3, self.tau4]


def eds_extend(seq: EdsSeq, length: int) -> EdsSeq:
    """Grow to ``length`` terms with the m = 2 relation (a Somos-4 recurrence)."""
    t = seq.terms
    alpha, beta = seq.tau2 * seq.tau2, -seq.tau3
    while len(t) < length:
        n = len(t) - 2
        if t[n - 2] == 0:
            raise DegenerateSequenceError(f"tau_{n - 2} = 0")
        num = alpha * t[n + 1] * t[n - 1] + beta * t[n] * t[n]
        q, r = divmod(num, t[n - 2])
        if r:
            raise DegenerateSequenceError(f"tau_{n + 2} is not an integer")
        t.append(q)
    return seq


@dataclass
class EdsReport:
    checked: int = 0
    failures: List[Tuple[str, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def eds_check(seq: EdsSeq, upto: Optional[int] = None) -> EdsReport:
    """Check both three-term EDS relations for every (m, n) with indices below ``upto``.

    The square relation needs terms up to n + m, the shifted one up to
    n + m + 1; each is checked wherever its own terms are available.
    """
    t = seq.terms
    top = len(t) if upto is None else min(upto, len(t))
    report = EdsReport()
    for m in range(1, top):
        for n in range(m + 1, top - m):
            report.checked += 1
            lhs = t[n + m] * t[n - m]
            rhs = t[m] ** 2 * t[n + 1] * t[n - 1] - t[m + 1] * t[m - 1] * t[n] ** 2
            if lhs != rhs:
                report.failures.append(("square", m, n))
            if n + m + 1 >= top:
                continue
            lhs = seq.tau2 * t[n + m + 1] * t[n - m]
            rhs = t[m + 1] * t[m] * t[n + 2] * t[n - 1] - t[m + 2] * t[m - 1] * t[n + 1] * t[n]
            if lhs != rhs:
                report.failures.append(("shifted", m, n))
    if report.failures:
        logger.warning("EDS relations fail at %d pairs", len(report.failures))
    return report


def eds_to_somos4_coeffs(seq: EdsSeq) -> Tuple[int, int]:
    return seq.tau2 * seq.tau2, -seq.tau3


def eds_to_somos5_coeffs(seq: EdsSeq) -> Tuple[int, int]:
    return seq.tau3, -(seq.tau4 // seq.tau2)


def eds_as_somos(seq: EdsSeq, kind: SomosKind | str) -> SomosSeq:
    """The EDS from tau_1 on, as a Somos-4 or Somos-5 sequence."""
    kind = SomosKind(kind)
    if kind is SomosKind.SOMOS4:
        return somos_sequence(kind, eds_to_somos4_coeffs(seq), eds_extend(seq, 5).terms[1:5])
    if kind is SomosKind.SOMOS5:
        return somos_sequence(kind, eds_to_somos5_coeffs(seq), eds_extend(seq, 6).terms[1:6])
    raise ValueError("EDS specialise to somos4 or somos5 only")


# q-difference Lyness: u_{n+2} u_n = u_{n+1} + b_n q^n


@dataclass(frozen=True)
class QpState:
    u_prev: Residue
    u_curr: Residue
    q_power: Residue
    n: int
    b_table: Tuple[Residue, ...]
    q: Residue

    @property
    def modulus(self) -> Modulus:
        return self.q.modulus


def qp_next(state: QpState) -> Tuple[Residue, QpState]:
    """One step; raises ``NonInvertibleError`` when u_prev is not a unit."""
    b = state.b_table[state.n % len(state.b_table)]
    u_next = (state.u_curr + b * state.q_power) / state.u_prev
    return u_next, replace(
        state,
        u_prev=state.u_curr,
        u_curr=u_next,
        q_power=state.q_power * state.q,
        n=state.n + 1,
    )


def _seed_residue(modulus: Modulus, seed: int, reseed: int, i: int) -> Residue:
    digest = hashlib.sha256(f"{seed}:{reseed}:{i}".encode()).digest()
    return modulus(int.from_bytes(digest, "big"))


def qp_seed(modulus: Modulus, q: int, b_table: Sequence[int], seed: int, reseed: int = 0) -> QpState:
    """Initial state with u_0, u_1 derived from SHA-256 of ``seed:reseed:i``."""
    return QpState(
        u_prev=_seed_residue(modulus, seed, reseed, 0),
        u_curr=_seed_residue(modulus, seed, reseed, 1),
        q_power=modulus.one,
        n=0,
        b_table=tuple(modulus(b) for b in b_table),
        q=modulus(q),
    )


@dataclass
class PrngOutput:
    blocks: List[bytes] = field(default_factory=list)
    reseeds: int = 0

    @property
    def data(self) -> bytes:
        return b"".join(self.blocks)


def _block(u: Residue) -> bytes:
    return (int(u) & ((1 << 64) - 1)).to_bytes(BLOCK_BYTES, "little")


def iter_outputs(
    modulus: int, q: int, b_table: Sequence[int], seed: int, warmup: int = WARMUP
) -> Iterator[Tuple[bytes, int]]:
    """Endless (block, reseed counter) pairs.

    A non-unit u_prev restarts the stream from the next seed counter,
    warm-up included.
    """
    mod = Modulus(modulus)
    reseed = 0
    while True:
        state = qp_seed(mod, q, b_table, seed, reseed)
        emitted = 0
        try:
            while True:
                u, state = qp_next(state)
                emitted += 1
                if emitted > warmup:
                    yield _block(u), reseed
        except NonInvertibleError as e:
            logger.info("reseeding after step %d (gcd %d)", state.n, e.g)
            reseed += 1


def prng_stream(
    modulus: int,
    q: int,
    b_table: Sequence[int],
    seed: int,
    count: int,
    warmup: int = WARMUP,
) -> PrngOutput:
    """First ``count`` outputs of the q-Lyness generator.

    Args:
        modulus: Modulus of the recurrence
        q: Multiplier of the non-autonomous term
        b_table: Periodic coefficients b_n
        seed: Root seed for the SHA-256 initial values
        count: Number of 8-byte blocks
        warmup: Outputs discarded after every (re)seed

    Returns:
        PrngOutput: Little-endian blocks and the final reseed counter

    Raises:
        ValueError: When ``count`` is below one
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    out = PrngOutput()
    for block, reseed in iter_outputs(modulus, q, b_table, seed, warmup):
        out.blocks.append(block)
        out.reseeds = reseed
        if len(out.blocks) == count:
            break
    return out


def monobit_fraction(data: bytes) -> float:
    """Share of one bits in ``data``."""
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    return float(bits.mean())
