"""Tests for residue arithmetic and factor-detecting inversion."""

import gmpy2
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qrtecm.core.arith import (
    Inverse,
    Modulus,
    ModulusMismatchError,
    NonInvertible,
    NonInvertibleError,
    gcd,
    parse_int,
    random_residue,
    ring_op,
    try_invert,
)
from qrtecm.core.projective import OpCounter
from qrtecm.utils.rng import stream


def test_gcd_basic():
    assert gcd(12, 18) == 6
    assert gcd(56956778, 1950153409) == 16433
    assert gcd(2520, 2310) == 210
    assert gcd(0, 7) == 7
    with pytest.raises(ValueError):
        gcd(0, 0)
    with pytest.raises(ValueError):
        gcd(-4, 6)


def test_parse_int_forms():
    assert parse_int("1950153409") == 1950153409
    assert parse_int("0x1F") == 31
    assert parse_int("-5") == -5
    with pytest.raises(ValueError):
        parse_int("12a")


def test_residues_are_canonical(f101):
    assert f101(-1).value == 100
    assert f101(202).value == 0
    assert f101("0x65") == 0
    assert f101(7) == 108


def test_ring_ops(f101):
    a, b = f101(50), f101(60)
    assert ring_op(a, b, "add") == 9
    assert ring_op(a, b, "sub") == 91
    assert ring_op(a, b, "mul") == 3000 % 101
    assert ring_op(a, b, "neg") == 51
    with pytest.raises(ValueError):
        ring_op(a, b, "div")


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatchError):
        Modulus(101)(3) + Modulus(103)(3)


def test_try_invert_unit(f101):
    result = try_invert(f101(3))
    assert isinstance(result, Inverse)
    assert result.value * 3 == 1


def test_try_invert_reports_factor():
    n = Modulus(91)
    result = try_invert(n(14))
    assert result == NonInvertible(7)
    assert try_invert(Modulus(1950153409)(56956778)) == NonInvertible(16433)


def test_try_invert_zero_gives_modulus():
    assert try_invert(Modulus(91)(0)) == NonInvertible(91)


def test_division_raises_with_gcd():
    n = Modulus(1950153409)
    with pytest.raises(NonInvertibleError) as exc:
        n(1) / n(16433 * 5)
    assert exc.value.g == 16433
    assert exc.value.modulus == 1950153409


@given(st.integers(min_value=1, max_value=10006))
def test_inverse_roundtrip_mod_prime(x):
    m = Modulus(10007)
    assert m(x) * m(x).inverse() == 1


@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=2, max_value=10**6))
def test_try_invert_gcd_divides(x, n):
    r = try_invert(Modulus(n)(x))
    if isinstance(r, NonInvertible):
        assert n % r.g == 0 and (x % n) % r.g == 0 and r.g > 1
    else:
        assert gmpy2.gcd(x, n) == 1


def test_counter_tallies_multiplications():
    ctr = OpCounter()
    m = Modulus(101, ctr)
    a, b = m(3), m(5)
    _ = a * b * a
    _ = a + b - a
    assert ctr.m == 2
    assert ctr.adds == 2


def test_signed_representative(f101):
    assert f101(100).signed() == -1
    assert f101(3).signed() == 3


def test_random_residue_in_range():
    m = Modulus(10007)
    rng = gmpy2.random_state(5)
    values = [random_residue(rng, m) for _ in range(50)]
    assert all(0 <= int(v) < 10007 for v in values)


def _draws(seed: int, count: int = 20):
    rng = stream(seed, 1)
    m = Modulus(1000003)
    return [random_residue(rng, m) for _ in range(count)]


def test_random_residue_is_reproducible():
    assert _draws(9) == _draws(9)
    assert _draws(9) != _draws(10)


def test_random_residue_covers_small_rings():
    m = Modulus(10)
    rng = stream(4, 0)
    seen = {int(random_residue(rng, m)) for _ in range(10_000)}
    assert seen == set(range(10))
