"""Modular ring Z/NZ with factor-detecting inversion."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Union

import gmpy2
from gmpy2 import mpz

if TYPE_CHECKING:
    from .projective import OpCounter


class NonInvertibleError(ArithmeticError):
    """Division by a non-unit. ``g`` is gcd(x, n), with 1 < g <= n."""

    def __init__(self, g: int, modulus: int):
        super().__init__(f"non-invertible residue: gcd={g} (mod {modulus})")
        self.g = int(g)
        self.modulus = int(modulus)


class ModulusMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Inverse:
    value: "Residue"


@dataclass(frozen=True)
class NonInvertible:
    g: int


def gcd(a: int, b: int) -> int:
    """Greatest common divisor of two non-negative integers."""
    if a < 0 or b < 0:
        raise ValueError("gcd expects non-negative arguments")
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    return int(gmpy2.gcd(a, b))


def parse_int(text: str) -> int:
    """Parse a decimal or ``0x``-prefixed hexadecimal integer."""
    text = text.strip()
    sign = -1 if text.startswith("-") else 1
    body = text.lstrip("+-")
    if body.lower().startswith("0x"):
        return sign * int(body[2:], 16)
    return sign * int(body, 10)


class Modulus:
    """The ring Z/nZ.

    An optional ``counter`` tallies every ring multiplication made through
    residues of this modulus. Each trial builds its own Modulus, so counts
    are never shared between trials.
    """

    __slots__ = ("n", "counter")

    def __init__(self, n: int, counter: Optional["OpCounter"] = None):
        n = mpz(n)
        if n < 2:
            raise ValueError(f"modulus must be >= 2, got {n}")
        self.n = n
        self.counter = counter

    def __call__(self, value: Union[int, str, "Residue"]) -> "Residue":
        if isinstance(value, Residue):
            self._check(value)
            return value
        if isinstance(value, str):
            value = parse_int(value)
        return Residue(gmpy2.f_mod(mpz(value), self.n), self)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Modulus) and self.n == other.n

    def __hash__(self) -> int:
        return hash(int(self.n))

    def __repr__(self) -> str:
        return f"Modulus({int(self.n)})"

    def _check(self, r: "Residue") -> None:
        if r.modulus.n != self.n:
            raise ModulusMismatchError(f"residue mod {r.modulus.n} used with mod {self.n}")

    @property
    def zero(self) -> "Residue":
        return Residue(mpz(0), self)

    @property
    def one(self) -> "Residue":
        return Residue(mpz(1), self)

    def with_counter(self, counter: Optional["OpCounter"]) -> "Modulus":
        return Modulus(self.n, counter)


class Residue:
    """Canonical representative of x mod n, 0 <= value < n."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: mpz, modulus: Modulus):
        self.value = value
        self.modulus = modulus

    def _coerce(self, other: Union[int, "Residue"]) -> mpz:
        if isinstance(other, Residue):
            if other.modulus.n != self.modulus.n:
                raise ModulusMismatchError(
                    f"mod {self.modulus.n} and mod {other.modulus.n}"
                )
            return other.value
        if isinstance(other, (int, mpz)):
            return gmpy2.f_mod(mpz(other), self.modulus.n)
        return NotImplemented  # type: ignore[return-value]

    def _new(self, value: mpz) -> "Residue":
        return Residue(gmpy2.f_mod(value, self.modulus.n), self.modulus)

    def _tally_add(self) -> None:
        if self.modulus.counter is not None:
            self.modulus.counter.adds += 1

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        self._tally_add()
        return self._new(self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        self._tally_add()
        return self._new(self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        self._tally_add()
        return self._new(v - self.value)

    def __neg__(self) -> "Residue":
        return self._new(-self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        if self.modulus.counter is not None:
            self.modulus.counter.m += 1
        return self._new(self.value * v)

    __rmul__ = __mul__

    def mul_param(self, other: Union[int, "Residue"], tally: str = "b") -> "Residue":
        """Multiply by a curve constant.

        Args:
            other: The constant (a residue of the same modulus, or an int).
            tally: OpCounter field charged instead of ``m``.

        Returns:
            The product, on this residue's modulus.
        """
        v = self._coerce(other)
        counter = self.modulus.counter
        if counter is not None:
            setattr(counter, tally, getattr(counter, tally) + 1)
        return self._new(self.value * v)

    def __pow__(self, k: int) -> "Residue":
        if k < 0:
            return (self.inverse()) ** (-k)
        return Residue(gmpy2.powmod(self.value, k, self.modulus.n), self.modulus)

    def inverse(self) -> "Residue":
        result = try_invert(self)
        if isinstance(result, NonInvertible):
            raise NonInvertibleError(result.g, int(self.modulus.n))
        return result.value

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self * Residue(v, self.modulus).inverse()

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Residue(v, self.modulus) * self.inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Residue):
            return self.modulus.n == other.modulus.n and self.value == other.value
        if isinstance(other, (int, mpz)):
            return self.value == gmpy2.f_mod(mpz(other), self.modulus.n)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((int(self.value), int(self.modulus.n)))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return int(self.value)

    def __index__(self) -> int:
        return int(self.value)

    def __repr__(self) -> str:
        return f"Residue({int(self.value)} mod {int(self.modulus.n)})"

    def __str__(self) -> str:
        return str(int(self.value))

    def signed(self) -> int:
        """Representative in (-n/2, n/2]; handy for displaying small negatives."""
        v, n = int(self.value), int(self.modulus.n)
        return v - n if v > n // 2 else v


def try_invert(x: Residue) -> Union[Inverse, NonInvertible]:
    """Invert ``x`` or report gcd(x, n).

    The failure branch is the ECM success signal: x = 0 yields g = n.
    """
    n = x.modulus.n
    g, s, _ = gmpy2.gcdext(x.value, n)
    if g != 1:
        g = n if x.value == 0 else g
        assert n % g == 0 and x.value % g == 0
        return NonInvertible(int(g))
    return Inverse(Residue(gmpy2.f_mod(s, n), x.modulus))


def ring_op(a: Residue, b: Residue, op: str) -> Residue:
    """Dispatch one of add/sub/mul/neg; ``neg`` ignores ``b``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown ring operation {op!r}")


def random_residue(rng: "gmpy2.random_state", modulus: Modulus) -> Residue:
    """Draw a residue in [0, n) from a seeded gmpy2 random state."""
    return Residue(gmpy2.mpz_random(rng, modulus.n), modulus)
