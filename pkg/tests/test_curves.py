"""Tests for the QRT families: steps, doubling, involutions, invariants."""

import gmpy2
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qrtecm.core.arith import Modulus, NonInvertibleError
from qrtecm.core.curves import (
    FAMILIES,
    Family,
    IndexedPoint,
    LynessCurve,
    Somos4Curve,
    Somos5Curve,
    curve_to_json,
    edwards_add,
    edwards_step,
    family_of,
    involution,
    lyness_init,
    lyness_invariant,
    lyness_step,
    rescale_lyness,
    rescale_point,
    s4_init,
    s4_invariant,
    s4_step,
    s5_init,
    s5_invariant,
)

P = 10007
coord = st.integers(min_value=1, max_value=P - 1)


def curve_through(family: Family, c1: int, c2: int, x, y):
    """Pencil member of ``family`` through (x, y) with the two free parameters given."""
    m = x.modulus
    if family is Family.SOMOS4:
        template = Somos4Curve(m(c1), m(c2), m(0))
        return Somos4Curve(m(c1), m(c2), s4_invariant(template, x, y))
    if family is Family.SOMOS5:
        template = Somos5Curve(m(c1), m(c2), m(0))
        return Somos5Curve(m(c1), m(c2), s5_invariant(template, x, y))
    template = LynessCurve(m(c1), m(c2), m(0))
    return LynessCurve(m(c1), m(c2), lyness_invariant(template, x, y))


def test_s4_init_mod_101(f101):
    c = Somos4Curve(f101(2), f101(3), f101(5))
    p = s4_init(c)
    assert p.n == 2
    assert (p.x, p.y) == (49, 7)


def test_s4_step_example(f101):
    # 2P = (-1, -5) for alpha = beta = 1, J = 4; the next term is 4/25.
    c = Somos4Curve(f101(1), f101(1), f101(4))
    p = s4_init(c)
    assert (p.x.signed(), p.y.signed()) == (-1, -5)
    q = s4_step(c, p)
    assert q.n == 3 and q.x == p.y
    assert q.y == f101(4) / 25


def test_s5_init_on_its_curve(fp):
    c = Somos5Curve(fp(3), fp(7), fp(11))
    p = s5_init(c)
    assert p.n == 3
    assert s5_invariant(c, p.x, p.y) == c.J_t


def test_lyness_init_on_its_curve(fp):
    c = LynessCurve(fp(2), fp(5), fp(9))
    p = lyness_init(c)
    assert p.n == 4
    assert lyness_invariant(c, p.x, p.y) == c.K


@pytest.mark.parametrize("family", list(Family))
@given(c1=coord, c2=coord, x=coord, y=coord, pattern=st.lists(st.booleans(), min_size=20, max_size=20))
def test_invariant_conserved_on_mixed_orbits(family, c1, c2, x, y, pattern):
    m = Modulus(P)
    px, py = m(x), m(y)
    try:
        c = curve_through(family, c1, c2, px, py)
    except NonInvertibleError:
        assume(False)
    maps = FAMILIES[family]
    target = maps.invariant(c, px, py)
    point = IndexedPoint(1, px, py)
    try:
        for double in pattern:
            point = maps.double(c, point) if double else maps.step(c, point)
            assert maps.invariant(c, point.x, point.y) == target
    except NonInvertibleError:
        # Orbit reached a pole of the affine maps; the prefix is checked.
        pass


@pytest.mark.parametrize("family", list(Family))
def test_double_agrees_with_repeated_steps(family, fp):
    curves = {
        Family.SOMOS4: Somos4Curve(fp(3), fp(5), fp(17)),
        Family.SOMOS5: Somos5Curve(fp(4), fp(9), fp(21)),
        Family.LYNESS: LynessCurve(fp(2), fp(7), fp(13)),
    }
    c = curves[family]
    maps = FAMILIES[family]
    orbit = [maps.init(c)]
    for _ in range(20):
        orbit.append(maps.step(c, orbit[-1]))
    for k in range(4):
        n = maps.base + k
        doubled = maps.double(c, orbit[k])
        expected = orbit[2 * n - maps.base]
        assert doubled.n == expected.n == 2 * n
        assert doubled.xy == expected.xy


@given(a=coord, x=coord, y=coord, prime=st.sampled_from([10007, 65537, 1000003]))
def test_lyness_five_periodic_when_b_is_a_squared(a, x, y, prime):
    m = Modulus(prime)
    c = LynessCurve(m(a), m(a) * m(a), m(0))
    assert c.five_torsion and c.is_degenerate
    p = IndexedPoint(0, m(x), m(y))
    q = p
    try:
        for _ in range(5):
            q = lyness_step(c, q)
    except NonInvertibleError:
        assume(False)
    assert q.xy == p.xy


@given(x=coord, y=coord, d=coord)
def test_edwards_step_is_translation_by_four_torsion(x, y, d):
    m = Modulus(P)
    p = (m(x), m(y))
    q = p
    for _ in range(4):
        q = edwards_step(q)
    assert q == p
    assert edwards_add(m(d), p, (m(1), m(0))) == edwards_step(p)


def test_edwards_add_on_curve(fp):
    # x^2 + y^2 = 1 + d x^2 y^2 through (3, 5) fixes d.
    x, y = fp(3), fp(5)
    d = (x * x + y * y - 1) / (x * x * y * y)
    s = edwards_add(d, (x, y), (x, y))
    assert s[0] * s[0] + s[1] * s[1] == 1 + d * s[0] * s[0] * s[1] * s[1]


@pytest.mark.parametrize("family", list(Family))
@given(c1=coord, c2=coord, x=coord, y=coord)
def test_involution_preserves_curve_and_is_involutive(family, c1, c2, x, y):
    m = Modulus(P)
    try:
        c = curve_through(family, c1, c2, m(x), m(y))
        p = IndexedPoint(3, m(x), m(y))
        q = involution(family, c, p)
        back = involution(family, c, q)
        target = FAMILIES[family].invariant(c, p.x, p.y)
        image = FAMILIES[family].invariant(c, q.x, q.y)
    except NonInvertibleError:
        assume(False)
    assert q.n == -3
    assert image == target
    assert back.xy == p.xy and back.n == 3


@pytest.mark.parametrize("family", list(Family))
@given(c1=coord, c2=coord, x=coord, y=coord)
def test_step_conjugates_the_involution(family, c1, c2, x, y):
    """phi(iota(phi(p))) == iota(p): the involution reverses the translation."""
    m = Modulus(P)
    maps = FAMILIES[family]
    try:
        c = curve_through(family, c1, c2, m(x), m(y))
        p = IndexedPoint(3, m(x), m(y))
        lhs = maps.step(c, involution(family, c, maps.step(c, p)))
        rhs = involution(family, c, p)
    except NonInvertibleError:
        assume(False)
    assert lhs.xy == rhs.xy
    assert lhs.n == rhs.n == -3


def test_rescale_lyness_maps_points_and_orbits(fp):
    c = LynessCurve(fp(3), fp(11), fp(29))
    r = rescale_lyness(c)
    assert r.a == 1
    p = lyness_init(c)
    q = rescale_point(p, c.a)
    assert lyness_invariant(r, q.x, q.y) == r.K
    assert rescale_point(lyness_step(c, p), c.a).xy == lyness_step(r, q).xy


def test_rescale_needs_invertible_a():
    n = Modulus(91)
    with pytest.raises(NonInvertibleError) as exc:
        rescale_lyness(LynessCurve(n(7), n(3), n(2)))
    assert exc.value.g == 7


def test_degenerate_parameters(f101):
    assert Somos4Curve(f101(0), f101(1), f101(2)).is_degenerate
    assert Somos5Curve(f101(1), f101(0), f101(2)).is_degenerate
    assert LynessCurve(f101(0), f101(1), f101(2)).is_degenerate
    assert not LynessCurve(f101(2), f101(5), f101(2)).is_degenerate


def test_exact_mode_orbit():
    q = gmpy2.mpq
    c = Somos4Curve(q(1), q(1), q(4))
    p = s4_init(c)
    assert p.xy == (-1, -5)
    p = s4_step(c, p)
    assert p.y == q(4, 25)


def test_family_helpers(f101):
    c = Somos5Curve(f101(1), f101(2), f101(3))
    assert family_of(c) is Family.SOMOS5
    doc = curve_to_json(c, 101)
    assert doc == {
        "family": "somos5",
        "params": {"alpha_t": "1", "beta_t": "2", "J_t": "3"},
        "modulus": "101",
    }
    assert [FAMILIES[f].base for f in Family] == [2, 3, 4]
