"""Inversion-free Lyness arithmetic on P^1 x P^1 with exact operation counts.

The curve parameter ``a`` is fixed to 1 here; callers normalise with
``curves.rescale_lyness`` first. Addition costs 2M+1B and doubling
15M+1B. Multiplications by 2 are done as additions.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Dict, Optional, Tuple, Union

import gmpy2

from .arith import Modulus, NonInvertible, Residue
from .curves import IndexedPoint, LynessCurve


@dataclass
class OpCounter:
    """Tallies of ring operations for one trial.

    m: general multiplications, s: squarings, b: multiplications by the
    curve parameter b, a/d: multiplications by twisted-Edwards parameters
    (cost model only), adds: additions and subtractions.
    """

    m: int = 0
    s: int = 0
    b: int = 0
    a: int = 0
    d: int = 0
    adds: int = 0

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def snapshot(self) -> "OpCounter":
        return OpCounter(**self.as_dict())

    def as_dict(self) -> Dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def __add__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(**{k: v + getattr(other, k) for k, v in self.as_dict().items()})

    def __sub__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(**{k: v - getattr(other, k) for k, v in self.as_dict().items()})

    def merge(self, other: "OpCounter") -> None:
        for k, v in other.as_dict().items():
            setattr(self, k, getattr(self, k) + v)


@dataclass(frozen=True)
class ProjPoint:
    """((X:W), (Y:Z)); ``n`` is the multiple index, bookkeeping only."""

    X: Residue
    W: Residue
    Y: Residue
    Z: Residue
    n: int = 0

    @property
    def modulus(self) -> Modulus:
        return self.X.modulus

    def is_collapsed(self) -> bool:
        """True when either homogeneous pair is (0:0) mod N."""
        return (not self.X and not self.W) or (not self.Y and not self.Z)


@dataclass(frozen=True)
class Affine:
    x: Residue
    y: Residue


@dataclass(frozen=True)
class AtInfinity:
    component: str  # "first" | "second"


NormalizeResult = Union[Affine, NonInvertible, AtInfinity]


def lift(p: IndexedPoint) -> ProjPoint:
    """Embed an affine pair as ((x:1), (y:1)), keeping its index."""
    one = p.x.modulus.one
    return ProjPoint(p.x, one, p.y, one, p.n)


def _check_a(c: LynessCurve) -> None:
    if c.a != 1:
        raise ValueError("projective Lyness arithmetic expects a normalised curve (a = 1)")


def _bind(
    c: LynessCurve, p: ProjPoint, ctr: Optional[OpCounter]
) -> Tuple[Residue, Residue, Residue, Residue, Residue]:
    """Coordinates and b on a modulus that tallies into ``ctr``.

    Without an explicit counter the point's own modulus (and whatever
    counter it carries) is used.
    """
    mod = p.modulus
    if ctr is not None and mod.counter is not ctr:
        mod = mod.with_counter(ctr)
    return (
        Residue(p.X.value, mod),
        Residue(p.W.value, mod),
        Residue(p.Y.value, mod),
        Residue(p.Z.value, mod),
        Residue(c.b.value, mod),
    )


def proj_add(c: LynessCurve, p: ProjPoint, ctr: Optional[OpCounter] = None) -> ProjPoint:
    """Projective Lyness step.

    ((X:W),(Y:Z)) -> ((Y:Z), ((Y + bZ)W : XZ)), costing 2M+1B.

    Args:
        c: Lyness curve with a = 1.
        p: Point standing for nP.
        ctr: Counter charged for the ring operations; defaults to the
            counter carried by the point's modulus.

    Returns:
        The point standing for (n+1)P.
    """
    _check_a(c)
    X, W, Y, Z, b = _bind(c, p, ctr)
    num = (Y + Z.mul_param(b)) * W
    den = X * Z
    return ProjPoint(Y, Z, num, den, p.n + 1)


def proj_double(c: LynessCurve, p: ProjPoint, ctr: Optional[OpCounter] = None) -> ProjPoint:
    """Projective lift of the Lyness doubling map, costing 15M+1B.

    Args:
        c: Lyness curve with a = 1.
        p: Point standing for nP.
        ctr: Counter charged for the ring operations; defaults to the
            counter carried by the point's modulus.

    Returns:
        The point standing for 2nP. It may be collapsed mod N; callers
        check ``is_collapsed``.
    """
    _check_a(c)
    X, W, Y, Z, b = _bind(c, p, ctr)

    E = X * Z
    F = Y * W
    G = X * Y
    H = W * Z
    Hb = H.mul_param(b)
    S = E + F
    T = E - F
    HHb = H * Hb
    A_plus = G + G - S - Hb - Hb
    A_minus = T
    B_plus = S * (G - H - Hb) - HHb - HHb
    B_minus = T * (G - H + Hb)
    A1, A2 = A_plus + A_minus, A_plus - A_minus
    B1, B2 = B_plus + B_minus, B_plus - B_minus
    XT = X * T
    YT = Y * T
    C1 = XT + XT
    C2 = -(YT + YT)
    D1 = Z * A2 + C2
    D2 = W * A1 + C1

    return ProjPoint(A1 * B1, C1 * D1, A2 * B2, C2 * D2, 2 * p.n)


def normalize(p: ProjPoint) -> NormalizeResult:
    """Affine form of a projective Lyness point.

    Args:
        p: Point on P^1 x P^1 over Z/NZ

    Returns:
        NormalizeResult: ``Affine`` (X/W, Y/Z); ``AtInfinity`` when a
            denominator is zero mod N; ``NonInvertible`` carrying
            gcd(W or Z, N) when a denominator shares a factor with N
    """
    if not p.W:
        return AtInfinity("first")
    if not p.Z:
        return AtInfinity("second")
    n = p.modulus.n
    for denom in (p.W, p.Z):
        g = gmpy2.gcd(denom.value, n)
        if g != 1:
            return NonInvertible(int(g))
    return Affine(p.X / p.W, p.Y / p.Z)


def proj_eq(p: ProjPoint, q: ProjPoint) -> bool:
    """Equality of the underlying points, ignoring the scaling of each pair."""
    return p.X * q.W == q.X * p.W and p.Y * q.Z == q.Y * p.Z


def to_affine(p: ProjPoint) -> Tuple[Residue, Residue]:
    """``normalize`` that insists on a finite affine result."""
    r = normalize(p)
    if not isinstance(r, Affine):
        raise ValueError(f"point does not normalise to an affine pair: {r}")
    return (r.x, r.y)


def scale(p: ProjPoint, lam: int, mu: int) -> ProjPoint:
    """Same point with the first pair scaled by lam and the second by mu."""
    return ProjPoint(p.X * lam, p.W * lam, p.Y * mu, p.Z * mu, p.n)

