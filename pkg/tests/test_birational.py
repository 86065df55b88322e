"""Tests for the Weierstrass group law and the maps onto the QRT pencils."""

import gmpy2
import pytest

from qrtecm.core.arith import Modulus, random_residue
from qrtecm.core.curves import (
    DegenerateParametersError,
    lyness_init,
    lyness_step,
    s4_init,
    s4_step,
    s5_init,
    s5_step,
)
from qrtecm.services.birational import (
    INFINITY,
    DegeneratePointError,
    WeierstrassCurve,
    WPoint,
    lyness_to_somos5,
    on_lyness,
    on_somos4,
    pencil_params,
    somos4_to_lyness,
    transport,
    twist_check,
    w_add,
    w_neg,
    w_scalar_mul,
    w_to_somos4,
)
from qrtecm.utils.rng import stream

q = gmpy2.mpq


def test_chord_example():
    c = WeierstrassCurve.over(0, 1)
    assert w_add(c, WPoint(q(2), q(3)), WPoint(q(0), q(1))) == WPoint(q(-1), q(0))


def test_torsion_point_of_order_six():
    c = WeierstrassCurve.over(0, 1)
    p = WPoint(q(2), q(3))
    assert w_scalar_mul(c, p, 6) is INFINITY
    assert w_scalar_mul(c, p, 5) == w_neg(p)
    assert w_scalar_mul(c, p, 0) is INFINITY
    assert w_add(c, p, w_neg(p)) is INFINITY


def test_scalar_mul_matches_repeated_addition(f101):
    c = WeierstrassCurve.over(0, -2, f101)  # y^2 = x^3 - 2 through (3, 5)
    p = WPoint(f101(3), f101(5))
    assert c.contains(p) and not c.is_singular
    acc = INFINITY
    for n in range(40):
        assert w_scalar_mul(c, p, n) == acc
        assert c.contains(acc)
        acc = w_add(c, acc, p)
    assert w_scalar_mul(c, p, -7) == w_neg(w_scalar_mul(c, p, 7))


def test_pencil_params_exact():
    params = pencil_params(0, 3, 5)
    assert params.B == -2
    assert (params.alpha, params.J, params.beta) == (100, 54, -171)
    assert params.degeneracies == ()
    assert params.as_dict()["beta"] == "-171"


def test_pencil_params_flags_b_zero():
    params = pencil_params(0, 2, 3)
    assert (params.alpha, params.J, params.beta) == (36, 24, -72)
    assert (params.a, params.b) == (432, 0)
    assert params.degeneracies == ("b=0",)
    assert params.is_degenerate


def test_pencil_params_rejects_order_two_point():
    with pytest.raises(DegenerateParametersError):
        pencil_params(1, 4, 0)


def _assert_transport_follows_orbits(params, upto: int = 30):
    s4 = s4_init(params.somos4())
    s5 = s5_init(params.somos5())
    ly = lyness_init(params.lyness())
    rows = transport(params, upto)
    assert [r.n for r in rows] == list(range(2, upto + 1))
    for row in rows:
        assert row.somos4 == s4.xy
        s4 = s4_step(params.somos4(), s4)
        if row.n >= 3:
            assert row.somos5 == s5.xy
            s5 = s5_step(params.somos5(), s5)
        if row.n >= 4:
            assert row.lyness == ly.xy
            ly = lyness_step(params.lyness(), ly)
    # 2P and 3P sit on the coordinate axes of the Lyness curve.
    assert rows[0].lyness == (-params.a, 0)
    assert rows[1].lyness[0] == 0


@pytest.mark.parametrize(
    "prime,A,nu,xi",
    [(10007, 5, 3, 11), (1000003, 7, 12, 99)],
)
def test_transport_follows_the_qrt_orbits(prime, A, nu, xi):
    """nP on the curve lands on the n-th iterate of each QRT map."""
    _assert_transport_follows_orbits(pencil_params(A, nu, xi, Modulus(prime)))


def test_transport_on_random_admissible_bundles():
    m = Modulus(1000003)
    rng = stream(7, 0)
    checked = 0
    while checked < 10:
        A, nu, xi = (random_residue(rng, m) for _ in range(3))
        if not xi:
            continue
        params = pencil_params(A, nu, xi, m)
        if params.is_degenerate or params.weierstrass().is_singular:
            continue
        _assert_transport_follows_orbits(params)
        checked += 1


def test_transport_exact_mode():
    params = pencil_params(0, 3, 5)
    rows = transport(params, 8)
    s4 = s4_init(params.somos4())
    for row in rows:
        assert row.somos4 == s4.xy
        assert on_somos4(params.somos4(), *row.somos4)
        if row.lyness is not None:
            assert on_lyness(params.lyness(), *row.lyness)
        s4 = s4_step(params.somos4(), s4)


def test_coordinate_maps_have_poles():
    params = pencil_params(0, 3, 5)
    with pytest.raises(DegeneratePointError):
        w_to_somos4(params, params.point)
    with pytest.raises(DegeneratePointError):
        w_to_somos4(params, INFINITY)
    with pytest.raises(DegeneratePointError):
        somos4_to_lyness(params, q(0), q(1))


def test_twist_check_exact():
    report = twist_check(pencil_params(0, 3, 5))
    assert report.on_curve
    assert report.curve.contains(report.point)


@pytest.mark.parametrize("A,nu,xi", [(0, 3, 5), (4, 9, 17)])
def test_twist_check_mod_prime(f101, A, nu, xi):
    params = pencil_params(A, nu, xi, f101)
    assert params.beta != 0
    assert twist_check(params).on_curve


def test_twist_needs_nonzero_beta():
    # A = 0, nu = 0 makes J = 0 and so beta = 0.
    params = pencil_params(0, 0, 1)
    assert "beta=0" in params.degeneracies
    with pytest.raises(DegenerateParametersError):
        twist_check(params)
    with pytest.raises(DegenerateParametersError):
        lyness_to_somos5(params, q(1), q(2))
