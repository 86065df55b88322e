"""Tests for inversion-free Lyness arithmetic and its operation counts."""

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qrtecm.core.arith import Modulus, NonInvertible, NonInvertibleError
from qrtecm.core.curves import IndexedPoint, LynessCurve, lyness_double, lyness_init, lyness_step
from qrtecm.core.projective import (
    Affine,
    AtInfinity,
    OpCounter,
    ProjPoint,
    lift,
    normalize,
    proj_add,
    proj_double,
    proj_eq,
    scale,
    to_affine,
)

PRIME = 1000003
coord = st.integers(min_value=1, max_value=PRIME - 1)


def lyness(b: int, m: Modulus) -> LynessCurve:
    return LynessCurve(m(1), m(b), m(0))


@given(b=coord, x=coord, y=coord)
def test_add_matches_affine_step(b, x, y):
    m = Modulus(PRIME)
    c = lyness(b, m)
    p = IndexedPoint(5, m(x), m(y))
    got = proj_add(c, lift(p), OpCounter())
    assert got.n == 6
    assert to_affine(got) == lyness_step(c, p).xy


@given(b=coord, x=coord, y=coord, lam=coord, mu=coord)
def test_double_matches_affine_and_ignores_scaling(b, x, y, lam, mu):
    m = Modulus(PRIME)
    c = lyness(b, m)
    p = IndexedPoint(5, m(x), m(y))
    try:
        expected = lyness_double(c, p).xy
    except NonInvertibleError:
        assume(False)
    plain = proj_double(c, lift(p), OpCounter())
    scaled = proj_double(c, scale(lift(p), lam, mu), OpCounter())
    assert plain.n == 10
    assert to_affine(plain) == expected
    assert proj_eq(plain, scaled)


def test_operation_counts_are_exact_over_a_fuzz_run():
    m = Modulus(PRIME)
    c = LynessCurve(m(1), m(12345), m(678))
    p = lift(lyness_init(c))
    total = OpCounter()
    for i in range(10_000):
        ctr = OpCounter()
        if i % 3:
            p = proj_add(c, p, ctr)
            assert (ctr.m, ctr.s, ctr.b) == (2, 0, 1)
        else:
            p = proj_double(c, p, ctr)
            assert (ctr.m, ctr.s, ctr.b) == (15, 0, 1)
        total.merge(ctr)
    doubles = len(range(0, 10_000, 3))
    adds = 10_000 - doubles
    assert total.m == 15 * doubles + 2 * adds
    assert total.b == 10_000
    assert total.s == 0


def test_counts_land_on_the_modulus_counter():
    hook = OpCounter()
    m = Modulus(PRIME, hook)
    c = LynessCurve(m(1), m(12345), m(678))
    p = lift(lyness_init(c))
    before = hook.snapshot()
    p = proj_double(c, p)
    p = proj_add(c, p)
    spent = hook - before
    assert (spent.m, spent.s, spent.b) == (17, 0, 2)
    assert spent.adds > 0
    assert p.modulus.counter is hook


def test_explicit_counter_takes_over_from_the_modulus():
    hook, ctr = OpCounter(), OpCounter()
    m = Modulus(PRIME, hook)
    c = LynessCurve(m(1), m(7), m(0))
    start = lift(IndexedPoint(4, m(3), m(5)))
    before = hook.snapshot()
    out = proj_double(c, start, ctr)
    assert (ctr.m, ctr.b) == (15, 1)
    assert (hook - before).m == 0
    assert out.modulus.counter is ctr


def test_requires_normalised_curve():
    m = Modulus(PRIME)
    c = LynessCurve(m(2), m(3), m(4))
    with pytest.raises(ValueError):
        proj_add(c, ProjPoint(m(1), m(1), m(2), m(1)), OpCounter())


def test_normalize_outcomes():
    m = Modulus(91)
    one = m(1)
    assert isinstance(normalize(ProjPoint(m(3), one, m(4), one)), Affine)
    assert normalize(ProjPoint(m(3), m(0), m(4), one)) == AtInfinity("first")
    assert normalize(ProjPoint(m(3), one, m(4), m(0))) == AtInfinity("second")
    assert normalize(ProjPoint(m(3), m(14), m(4), one)) == NonInvertible(7)


def test_collapse_detection():
    m = Modulus(35)
    assert ProjPoint(m(0), m(35), m(1), m(1)).is_collapsed()
    assert not ProjPoint(m(0), m(1), m(1), m(0)).is_collapsed()


def test_to_affine_rejects_infinity():
    m = Modulus(PRIME)
    with pytest.raises(ValueError):
        to_affine(ProjPoint(m(1), m(0), m(1), m(1)))


def test_counter_arithmetic():
    a = OpCounter(m=2, b=1)
    b = OpCounter(m=15, b=1, adds=20)
    assert (a + b).as_dict() == {"m": 17, "s": 0, "b": 2, "a": 0, "d": 0, "adds": 20}
    assert (b - a).m == 13
    snap = b.snapshot()
    b.reset()
    assert snap.m == 15 and b.m == 0
