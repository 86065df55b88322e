"""Weierstrass models and their maps onto the Somos-4, Somos-5 and Lyness pencils.

A Weierstrass curve y^2 = x^3 + A x + B with a point P = (nu, xi) fixes
one member of each QRT pencil. Multiples nP then correspond to the n-th
iterates of the QRT maps, which is what the chord-tangent group law here
is used to check. Two scalar types are supported: ``Residue`` (a prime
modulus gives field mode) and ``gmpy2.mpq`` (exact mode).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import gmpy2

from ..core.arith import Modulus
from ..core.curves import (
    DegenerateParametersError,
    LynessCurve,
    Scalar,
    Somos4Curve,
    Somos5Curve,
)

logger = logging.getLogger(__name__)


class DegeneratePointError(ValueError):
    """The point lands where a coordinate map has a pole."""


def lift(value: Any, modulus: Optional[Modulus] = None) -> Scalar:
    """Bring an integer (or fraction) into the working field."""
    if modulus is not None:
        return modulus(value)
    return gmpy2.mpq(value)


@dataclass(frozen=True)
class Infinity:
    def __repr__(self) -> str:
        return "Infinity"


INFINITY = Infinity()


@dataclass(frozen=True)
class WPoint:
    x: Scalar
    y: Scalar


WElement = Union[WPoint, Infinity]


@dataclass(frozen=True)
class WeierstrassCurve:
    A: Scalar
    B: Scalar

    @classmethod
    def over(cls, A: int, B: int, modulus: Optional[Modulus] = None) -> "WeierstrassCurve":
        return cls(lift(A, modulus), lift(B, modulus))

    @property
    def discriminant(self) -> Scalar:
        return 4 * self.A * self.A * self.A + 27 * self.B * self.B

    @property
    def is_singular(self) -> bool:
        return self.discriminant == 0

    def contains(self, p: WElement) -> bool:
        if isinstance(p, Infinity):
            return True
        return p.y * p.y == p.x * p.x * p.x + self.A * p.x + self.B


def w_neg(p: WElement) -> WElement:
    if isinstance(p, Infinity):
        return p
    return WPoint(p.x, -p.y)


def w_add(c: WeierstrassCurve, p: WElement, q: WElement) -> WElement:
    """Chord-tangent addition."""
    if isinstance(p, Infinity):
        return q
    if isinstance(q, Infinity):
        return p
    if p.x == q.x:
        if p.y + q.y == 0:
            return INFINITY
        lam = (3 * p.x * p.x + c.A) / (2 * p.y)
    else:
        lam = (q.y - p.y) / (q.x - p.x)
    x3 = lam * lam - p.x - q.x
    return WPoint(x3, lam * (p.x - x3) - p.y)


def w_scalar_mul(c: WeierstrassCurve, p: WElement, n: int) -> WElement:
    """Left-to-right double-and-add."""
    if n < 0:
        return w_scalar_mul(c, w_neg(p), -n)
    acc: WElement = INFINITY
    for bit in bin(n)[2:] if n else "":
        acc = w_add(c, acc, acc)
        if bit == "1":
            acc = w_add(c, acc, p)
    return acc


@dataclass(frozen=True)
class PencilParams:
    """Parameters of the three QRT pencils attached to (E, P).

    The defining identities are checked when the bundle is built, so an
    instance is always internally consistent.
    """

    A: Scalar
    B: Scalar
    nu: Scalar
    xi: Scalar
    alpha: Scalar
    J: Scalar
    beta: Scalar
    a: Scalar
    b: Scalar
    K: Scalar
    alpha_t: Scalar
    beta_t: Scalar
    J_t: Scalar
    degeneracies: Tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        al, be, J, a = self.alpha, self.beta, self.J, self.a
        assert self.xi * self.xi == self.nu ** 3 + self.A * self.nu + self.B
        assert al == 4 * self.xi * self.xi
        assert J == 6 * self.nu * self.nu + 2 * self.A
        assert 4 * be == J * J - 48 * self.nu * self.xi * self.xi
        assert a == -al * al - be * J
        assert self.b == 2 * a * a + a * be * J - be * be * be
        assert self.K == -2 * a - be * J
        assert self.alpha_t == -be
        assert self.beta_t == al * al + be * J
        assert self.J_t == J
        flags = []
        if be == 0:
            flags.append("beta=0")
        if a == 0:
            flags.append("a=0")
        if self.b == 0:
            flags.append("b=0")
        if self.b == a * a:
            flags.append("b=a^2")
        object.__setattr__(self, "degeneracies", tuple(flags))

    @property
    def is_degenerate(self) -> bool:
        return bool(self.degeneracies)

    @property
    def point(self) -> WPoint:
        return WPoint(self.nu, self.xi)

    def weierstrass(self) -> WeierstrassCurve:
        return WeierstrassCurve(self.A, self.B)

    def somos4(self) -> Somos4Curve:
        return Somos4Curve(self.alpha, self.beta, self.J)

    def somos5(self) -> Somos5Curve:
        return Somos5Curve(self.alpha_t, self.beta_t, self.J_t)

    def lyness(self) -> LynessCurve:
        return LynessCurve(self.a, self.b, self.K)

    def as_dict(self) -> Dict[str, str]:
        names = ("A", "B", "nu", "xi", "alpha", "J", "beta", "a", "b", "K")
        out = {k: str(getattr(self, k)) for k in names}
        out.update(alpha_t=str(self.alpha_t), beta_t=str(self.beta_t), J_t=str(self.J_t))
        return out


# Curve membership in polynomial form, so points with a zero coordinate still count.


def on_somos4(c: Somos4Curve, x: Scalar, y: Scalar) -> bool:
    return x * x * y * y + c.alpha * (x + y) + c.beta - c.J * x * y == 0


def on_somos5(c: Somos5Curve, x: Scalar, y: Scalar) -> bool:
    s = x + y
    return x * y * s + c.alpha_t * s + c.beta_t - c.J_t * x * y == 0


def on_lyness(c: LynessCurve, x: Scalar, y: Scalar) -> bool:
    s = x + y
    return x * y * s + c.a * s * s + (c.a * c.a + c.b) * s + c.a * c.b - c.K * x * y == 0


def pencil_params(A: Any, nu: Any, xi: Any, modulus: Optional[Modulus] = None) -> PencilParams:
    """Pencil parameters for the curve through P = (nu, xi) with coefficient A.

    B is whatever puts P on the curve. Raises ``DegenerateParametersError``
    for xi = 0 (P of order two, alpha = 0). Other degeneracies are only
    flagged on the result.
    """
    A, nu, xi = lift(A, modulus), lift(nu, modulus), lift(xi, modulus)
    if xi == 0:
        raise DegenerateParametersError("xi = 0: P has order two and alpha vanishes")
    B = xi * xi - nu * nu * nu - A * nu
    alpha = 4 * xi * xi
    J = 6 * nu * nu + 2 * A
    beta = J * J / 4 - 12 * nu * xi * xi
    a = -alpha * alpha - beta * J
    b = 2 * a * a + a * beta * J - beta * beta * beta
    K = -2 * a - beta * J
    params = PencilParams(
        A=A, B=B, nu=nu, xi=xi, alpha=alpha, J=J, beta=beta, a=a, b=b, K=K,
        alpha_t=-beta, beta_t=alpha * alpha + beta * J, J_t=J,
    )
    if params.is_degenerate:
        logger.debug("degenerate bundle: %s", ", ".join(params.degeneracies))
    return params


def w_to_somos4(params: PencilParams, wp: WElement) -> Tuple[Scalar, Scalar]:
    """(x', y') -> (u, v) = (nu - x', (4 xi y' + J u - alpha) / (2 u^2))."""
    if isinstance(wp, Infinity):
        raise DegeneratePointError("the point at infinity has no Somos-4 image")
    u = params.nu - wp.x
    if u == 0:
        raise DegeneratePointError("x' = nu: the image is at infinity")
    v = (4 * params.xi * wp.y + params.J * u - params.alpha) / (2 * u * u)
    assert on_somos4(params.somos4(), u, v)
    return u, v


def somos4_to_lyness(params: PencilParams, u: Scalar, v: Scalar) -> Tuple[Scalar, Scalar]:
    uv = u * v
    if uv == 0:
        raise DegeneratePointError("uv = 0: the Lyness image is at infinity")
    be, a = params.beta, params.a
    x = -be * (params.alpha * u + be) / uv - a
    y = -be * uv - a
    assert on_lyness(params.lyness(), x, y)
    return x, y


def lyness_to_somos5(params: PencilParams, x: Scalar, y: Scalar) -> Tuple[Scalar, Scalar]:
    """Companion point (-(x + a)/beta, -(y + a)/beta) on the Somos-5 curve."""
    be = params.beta
    if be == 0:
        raise DegenerateParametersError("beta = 0")
    p, q = -(x + params.a) / be, -(y + params.a) / be
    assert on_somos5(params.somos5(), p, q)
    return p, q


@dataclass(frozen=True)
class TwistReport:
    curve: WeierstrassCurve
    point: WPoint
    on_curve: bool


def twist_check(params: PencilParams) -> TwistReport:
    """Twist of E carrying the image of the shift, and whether that image lies on it."""
    al, be = params.alpha, params.beta
    if be == 0:
        raise DegenerateParametersError("beta = 0: no twist point")
    be3 = be * be * be
    twisted = WeierstrassCurve(al * al * be3 * be * params.A, al * al * al * be3 * be3 * params.B)
    bj = be * params.J
    point = WPoint(bj * bj / 12 - be3 / 3, al * al * be3 / 2)
    return TwistReport(twisted, point, twisted.contains(point))


@dataclass
class TransportedPoint:
    """The images of nP on every model; ``None`` where a map has a pole."""

    n: int
    weierstrass: Optional[Tuple[Scalar, Scalar]] = None
    somos4: Optional[Tuple[Scalar, Scalar]] = None
    lyness: Optional[Tuple[Scalar, Scalar]] = None
    somos5: Optional[Tuple[Scalar, Scalar]] = None


def transport(params: PencilParams, upto: int) -> List[TransportedPoint]:
    """Images of nP for n = 2..upto."""
    c = params.weierstrass()
    P = params.point
    rows: List[TransportedPoint] = []
    wp = w_add(c, P, P)
    for n in range(2, upto + 1):
        row = TransportedPoint(n)
        if isinstance(wp, WPoint):
            row.weierstrass = (wp.x, wp.y)
            try:
                row.somos4 = w_to_somos4(params, wp)
                row.lyness = somos4_to_lyness(params, *row.somos4)
                row.somos5 = lyness_to_somos5(params, *row.lyness)
            except (DegeneratePointError, DegenerateParametersError) as e:
                logger.debug("n=%d: %s", n, e)
        rows.append(row)
        wp = w_add(c, wp, P)
    return rows
