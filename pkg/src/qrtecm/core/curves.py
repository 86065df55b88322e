"""Affine data for the three symmetric QRT families.

Each family is a pencil of symmetric biquadratic curves together with
the QRT step phi (translation by the shift P), the doubling map psi,
the elliptic involution, the prescribed finite seed point and the
pencil invariant. Formulas are written against the field operators
only, so they run unchanged over ``Residue`` (Z/NZ, where a failed
division raises ``NonInvertibleError``) and over ``gmpy2.mpq``.

Points at infinity (O and the first few multiples of P) are never
represented here; pipelines start from the finite seeds 2P, 3P, 4P.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Tuple

# Residue or gmpy2.mpq; anything closed under + - * / with int coercion.
Scalar = Any


class Family(str, Enum):
    SOMOS4 = "somos4"
    SOMOS5 = "somos5"
    LYNESS = "lyness"


class DegenerateParametersError(ValueError):
    """Curve data on which the maps are undefined (a zero coefficient, a torsion shift)."""


@dataclass(frozen=True)
class Somos4Curve:
    alpha: Scalar
    beta: Scalar
    J: Scalar

    @property
    def is_degenerate(self) -> bool:
        return self.alpha == 0 or self.beta == 0

    def params(self) -> Dict[str, Scalar]:
        return {"alpha": self.alpha, "beta": self.beta, "J": self.J}


@dataclass(frozen=True)
class Somos5Curve:
    alpha_t: Scalar
    beta_t: Scalar
    J_t: Scalar

    @property
    def is_degenerate(self) -> bool:
        return self.alpha_t == 0 or self.beta_t == 0

    def params(self) -> Dict[str, Scalar]:
        return {"alpha_t": self.alpha_t, "beta_t": self.beta_t, "J_t": self.J_t}


@dataclass(frozen=True)
class LynessCurve:
    a: Scalar
    b: Scalar
    K: Scalar
    five_torsion: bool = field(init=False)

    def __post_init__(self) -> None:
        # b = a^2 makes every orbit 5-periodic; recorded, not rejected.
        object.__setattr__(self, "five_torsion", self.b == self.a * self.a)

    @property
    def is_degenerate(self) -> bool:
        return self.a == 0 or self.five_torsion

    def params(self) -> Dict[str, Scalar]:
        return {"a": self.a, "b": self.b, "K": self.K}


Curve = Somos4Curve | Somos5Curve | LynessCurve


@dataclass(frozen=True)
class IndexedPoint:
    """The pair (u_n, u_{n+1}) standing for nP. ``n`` is bookkeeping only."""

    n: int
    x: Scalar
    y: Scalar

    @property
    def xy(self) -> Tuple[Scalar, Scalar]:
        return (self.x, self.y)


# Somos-4: x^2 y^2 + alpha (x + y) + beta - J x y = 0


def s4_step(c: Somos4Curve, p: IndexedPoint) -> IndexedPoint:
    """Somos-4 QRT step: (x, y) -> (y, (alpha y + beta) / (x y^2)).

    Args:
        c: Somos-4 pencil member
        p: Point standing for nP

    Returns:
        IndexedPoint: The point standing for (n+1)P

    Raises:
        NonInvertibleError: When x y^2 is not a unit mod N
    """
    x, y = p.x, p.y
    return IndexedPoint(p.n + 1, y, (c.alpha * y + c.beta) / (x * y * y))


def s4_double(c: Somos4Curve, p: IndexedPoint) -> IndexedPoint:
    """Somos-4 doubling map.

    Args:
        c: Somos-4 pencil member
        p: Point standing for nP

    Returns:
        IndexedPoint: The point standing for 2nP

    Raises:
        NonInvertibleError: When one of the denominators is not a unit mod N
    """
    x, y = p.x, p.y
    al, be = c.alpha, c.beta
    x2y2 = x * x * y * y
    d1 = al * x + be - x2y2
    # Invert d1 itself: gcd(d1, N) is the factor, gcd(d1^2, N) may overshoot.
    d1_inv = 1 / d1
    u = al * (x - y) * y * (al * x + be - x * x * x * y) * d1_inv * d1_inv
    v = -(d1 * (al * y + be - x2y2)) / (al * x * y * (x - y) * (x - y))
    return IndexedPoint(2 * p.n, u, v)


def s4_init(c: Somos4Curve) -> IndexedPoint:
    """Seed 2P = (-beta/alpha, -alpha(alpha^2 + beta J)/beta^2)."""
    al, be, J = c.alpha, c.beta, c.J
    return IndexedPoint(2, -be / al, -(al * (al * al + be * J)) / (be * be))


def s4_invariant(c: Somos4Curve, x: Scalar, y: Scalar) -> Scalar:
    return (x * x * y * y + c.alpha * (x + y) + c.beta) / (x * y)


def s4_involution(c: Somos4Curve, p: IndexedPoint) -> IndexedPoint:
    """(x, y) -> (x, (alpha x + beta) / (x^2 y)), standing for -nP."""
    x, y = p.x, p.y
    return IndexedPoint(-p.n, x, (c.alpha * x + c.beta) / (x * x * y))


# Somos-5: xy(x + y) + alpha~ (x + y) + beta~ - J~ x y = 0


def s5_step(c: Somos5Curve, p: IndexedPoint) -> IndexedPoint:
    """Somos-5 QRT step: (x, y) -> (y, (alpha~ y + beta~) / (x y)).

    Args:
        c: Somos-5 pencil member
        p: Point standing for nP

    Returns:
        IndexedPoint: The point standing for (n+1)P
    """
    x, y = p.x, p.y
    return IndexedPoint(p.n + 1, y, (c.alpha_t * y + c.beta_t) / (x * y))


def s5_double(c: Somos5Curve, p: IndexedPoint) -> IndexedPoint:
    """Somos-5 doubling map.

    Args:
        c: Somos-5 pencil member
        p: Point standing for nP

    Returns:
        IndexedPoint: The point standing for 2nP
    """
    x, y = p.x, p.y
    al, be = c.alpha_t, c.beta_t
    x2y = x * x * y
    xy2 = x * y * y
    u = ((x2y - al * x - be) * (x2y - al * y - be)) / (x * (x - y) * (xy2 - al * x - be))
    v = ((xy2 - al * x - be) * (xy2 - al * y - be)) / (y * (y - x) * (x2y - al * y - be))
    return IndexedPoint(2 * p.n, u, v)


def s5_init(c: Somos5Curve) -> IndexedPoint:
    """Seed 3P."""
    al, be, J = c.alpha_t, c.beta_t, c.J_t
    return IndexedPoint(3, -be / al, J + al * al / be + be / al)


def s5_invariant(c: Somos5Curve, x: Scalar, y: Scalar) -> Scalar:
    s = x + y
    return (x * y * s + c.alpha_t * s + c.beta_t) / (x * y)


# Lyness: xy(x + y) + a (x + y)^2 + (a^2 + b)(x + y) + ab - K x y = 0


def lyness_step(c: LynessCurve, p: IndexedPoint) -> IndexedPoint:
    """Lyness QRT step: (x, y) -> (y, (a y + b) / x).

    Args:
        c: Lyness pencil member
        p: Point standing for nP

    Returns:
        IndexedPoint: The point standing for (n+1)P

    Raises:
        NonInvertibleError: When x is not a unit mod N
    """
    x, y = p.x, p.y
    return IndexedPoint(p.n + 1, y, (c.a * y + c.b) / x)


def _lyness_r(c: LynessCurve, x: Scalar, y: Scalar) -> Scalar:
    a, b = c.a, c.b
    num = (x * y - a * y - b) * (x * x * y - a * a * x - b * y - a * b)
    return num / (x * (x - y) * (y * y - a * x - b))


def lyness_double(c: LynessCurve, p: IndexedPoint) -> IndexedPoint:
    """Lyness doubling map, symmetric in its two coordinates.

    Args:
        c: Lyness pencil member
        p: Point standing for nP

    Returns:
        IndexedPoint: The point standing for 2nP
    """
    # Singular in its second coordinate at 2P = (-a, 0).
    return IndexedPoint(2 * p.n, _lyness_r(c, p.x, p.y), _lyness_r(c, p.y, p.x))


def lyness_init(c: LynessCurve) -> IndexedPoint:
    """Seed 4P; 2P and 3P lie on the axes and are skipped."""
    a, b, K = c.a, c.b, c.K
    return IndexedPoint(4, -b / a, -a - (b * (K * a + b)) / (a * (a * a - b)))


def lyness_invariant(c: LynessCurve, x: Scalar, y: Scalar) -> Scalar:
    """Value of K for the pencil member through (x, y).

    Args:
        c: Any member of the pencil; only a and b are read
        x: First coordinate
        y: Second coordinate

    Returns:
        Scalar: K such that (x, y) lies on (a, b, K)
    """
    a, b = c.a, c.b
    s = x + y
    return (x * y * s + a * s * s + (a * a + b) * s + a * b) / (x * y)


def rescale_lyness(c: LynessCurve) -> LynessCurve:
    """Normalise to a = 1: old (x, y) = a * new (x, y), b -> b/a^2, K -> K/a.

    Needs one inversion of ``a``, which is itself a chance to hit a factor.
    """
    a_inv = 1 / c.a
    return LynessCurve(c.a * a_inv, c.b * a_inv * a_inv, c.K * a_inv)


def rescale_point(p: IndexedPoint, a: Scalar) -> IndexedPoint:
    """Map a point on the original Lyness curve to the a = 1 curve."""
    return IndexedPoint(p.n, p.x / a, p.y / a)


def swap_involution(_c: Curve, p: IndexedPoint) -> IndexedPoint:
    return IndexedPoint(-p.n, p.y, p.x)


# Edwards curve x^2 + y^2 = 1 + d x^2 y^2


def edwards_step(p: Tuple[Scalar, Scalar]) -> Tuple[Scalar, Scalar]:
    """Translation by the 4-torsion point (1, 0)."""
    x, y = p
    return (y, -x)


def edwards_add(
    d: Scalar, p: Tuple[Scalar, Scalar], q: Tuple[Scalar, Scalar]
) -> Tuple[Scalar, Scalar]:
    """Unified addition law; also valid for p = q."""
    (x1, y1), (x2, y2) = p, q
    t = d * x1 * x2 * y1 * y2
    return ((x1 * y2 + y1 * x2) / (1 + t), (y1 * y2 - x1 * x2) / (1 - t))


@dataclass(frozen=True)
class QrtFamily:
    """Bundle of a family's maps, as consumed by the scalar pipelines."""

    family: Family
    base: int
    step: Callable[[Any, IndexedPoint], IndexedPoint]
    double: Callable[[Any, IndexedPoint], IndexedPoint]
    init: Callable[[Any], IndexedPoint]
    invariant: Callable[[Any, Scalar, Scalar], Scalar]
    involution: Callable[[Any, IndexedPoint], IndexedPoint]


FAMILIES: Dict[Family, QrtFamily] = {
    Family.SOMOS4: QrtFamily(
        Family.SOMOS4, 2, s4_step, s4_double, s4_init, s4_invariant, s4_involution
    ),
    Family.SOMOS5: QrtFamily(
        Family.SOMOS5, 3, s5_step, s5_double, s5_init, s5_invariant, swap_involution
    ),
    Family.LYNESS: QrtFamily(
        Family.LYNESS, 4, lyness_step, lyness_double, lyness_init, lyness_invariant,
        swap_involution,
    ),
}


def family_of(c: Curve) -> Family:
    """Family tag of a curve instance."""
    if isinstance(c, Somos4Curve):
        return Family.SOMOS4
    if isinstance(c, Somos5Curve):
        return Family.SOMOS5
    return Family.LYNESS


def involution(family: Family | str, c: Curve, p: IndexedPoint) -> IndexedPoint:
    """P -> -P on the curve through p. The index is negated."""
    return FAMILIES[Family(family)].involution(c, p)


def curve_to_json(c: Curve, modulus: int | None = None) -> Dict[str, Any]:
    return {
        "family": family_of(c).value,
        "params": {k: str(v) for k, v in c.params().items()},
        "modulus": None if modulus is None else str(modulus),
    }
