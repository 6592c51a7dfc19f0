import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from strategies import ball_points, quaternions, random_series, series

from srk.calculus import directional_derivative
from srk.errors import NearPole, ZeroFunction
from srk.mobius import moebius_q0
from srk.quaternion import I, J, ONE, ZERO, Quaternion, qinv, random_in_ball, random_unit
from srk.rational import (
    RegularQuotient,
    T_transform,
    eval_quotient,
    eval_via_T,
    quotient_symmetrize,
    reciprocal,
    sphere_roots,
)
from srk.series import StarSeries, conjugate, star_mul, symmetrize


def product_value(F, G, q):
    """Pointwise oracle for ``(F * G)(q) = F(q) G(F(q)^{-1} q F(q))``."""
    fq = F(q)
    if abs(fq) < 1e-300:
        return ZERO
    return fq * G(qinv(fq) * q * fq)


def test_trivial_denominator():
    g = StarSeries((I, J, ONE))
    Q = RegularQuotient(StarSeries((ONE,)), g)
    q = Quaternion(0.2, 0.3, -0.1, 0.5)
    assert Q(q) == g(q)
    assert eval_via_T(Q, q) == g(q)


def test_self_quotient_is_one():
    q0 = Quaternion(0.1, 0.6, -0.2, 0.3)
    Q = RegularQuotient(StarSeries.linear(q0), StarSeries.linear(q0))
    rng = np.random.default_rng(4)
    for _ in range(50):
        q = random_in_ball(rng, 2.0)
        assert abs(Q(q) - ONE) < 1e-12


def test_route_agreement_random():
    rng = np.random.default_rng(5)
    for _ in range(200):
        f, g = random_series(rng, int(rng.integers(1, 7))), random_series(rng, int(rng.integers(0, 7)))
        q = random_in_ball(rng, 1.5)
        Q = RegularQuotient(f, g)
        try:
            a = eval_quotient(Q, q)
        except NearPole:
            continue
        assert abs(a - eval_via_T(Q, q)) <= 1e-10 * max(1.0, abs(a))


def test_mobius_routes_agree():
    rng = np.random.default_rng(6)
    for _ in range(100):
        M = moebius_q0(random_in_ball(rng, 0.95))
        q = random_in_ball(rng, 0.99)
        assert abs(M(q) - eval_via_T(M, q)) < 1e-11


def test_T_transform_examples():
    f = StarSeries.real([1.0, -2.0, 0.5])
    q = Quaternion(0.3, 0.1, 0.4, -0.2)
    assert abs(T_transform(f, q) - q) < 1e-15
    g = StarSeries((I, J, ONE))
    x = Quaternion(0.7, 0, 0, 0)
    assert abs(T_transform(g, x) - x) < 1e-15


@given(series(5), quaternions)
def test_T_is_an_involution_preserving_spheres(f, q):
    fc = conjugate(f)
    try:
        t = T_transform(f, q)
        back = T_transform(fc, t)
    except NearPole:
        return
    assert abs(back - q) <= 1e-10 * max(1.0, abs(q))
    assert abs(t[0] - q[0]) <= 1e-12 * max(1.0, abs(q))
    assert abs(t.imag_norm() - q.imag_norm()) <= 1e-12 * max(1.0, abs(q))


def test_reciprocal_examples():
    one = reciprocal(StarSeries((ONE,)))
    q = Quaternion(0.2, 0.4, 0.1, -0.3)
    assert one(q) == ONE
    inv_q = reciprocal(StarSeries.identity())
    assert abs(inv_q(q) - qinv(q)) < 1e-15
    with pytest.raises(ZeroFunction):
        reciprocal(StarSeries((ZERO,)))


def test_reciprocal_times_function_is_one():
    rng = np.random.default_rng(7)
    for _ in range(50):
        f = random_series(rng, 3)
        F = reciprocal(f) * f
        q = random_in_ball(rng, 1.0)
        try:
            assert abs(F(q) - ONE) < 1e-10
            assert abs(product_value(reciprocal(f), RegularQuotient.from_series(f), q) - ONE) < 1e-10
        except NearPole:
            pass


def test_quotient_symmetrize_examples():
    q0 = Quaternion(0.3, -0.2, 0.4, 0.1)
    x0, y0 = q0[0], q0.imag_norm()
    S = quotient_symmetrize(moebius_q0(q0))
    for t in (-0.9, -0.3, 0.0, 0.5, 0.8):
        q = Quaternion(t, 0, 0, 0)
        expected = ((t - x0) ** 2 + y0 ** 2) / ((1 - t * x0) ** 2 + (t * y0) ** 2)
        assert abs(S(q) - Quaternion(expected, 0, 0, 0)) < 1e-14
    g = StarSeries((I, J))
    T = quotient_symmetrize(RegularQuotient(StarSeries((ONE,)), g))
    assert T.denom == StarSeries.real([1.0]) and T.numer == symmetrize(g)


def test_mobius_symmetrization_is_unimodular_on_the_boundary():
    rng = np.random.default_rng(8)
    for _ in range(50):
        S = quotient_symmetrize(moebius_q0(random_in_ball(rng, 0.9)))
        q = random_unit(rng)
        assert abs(abs(S(q)) - 1) < 1e-12


def test_conjugate_of_left_quotient():
    rng = np.random.default_rng(9)
    for _ in range(50):
        f, g = random_series(rng, 3), random_series(rng, 2)
        lhs = RegularQuotient(f, g).conjugate()
        rhs = RegularQuotient(conjugate(f), conjugate(g), "right")
        q = random_in_ball(rng, 1.0)
        try:
            assert abs(lhs(q) - rhs(q)) <= 1e-10 * max(1.0, abs(rhs(q)))
        except NearPole:
            pass


def test_excluded_spheres_of_product():
    p1, p2 = Quaternion(0.1, 0.5, 0, 0.2), Quaternion(-0.4, 0, 0.3, 0)
    f = star_mul(StarSeries.linear(p1), StarSeries.linear(p2))
    Q = reciprocal(f)
    got = Q.excluded_spheres()
    want = sorted([(p1[0], p1.imag_norm()), (p2[0], p2.imag_norm())])
    assert len(got) == 2
    assert all(math.hypot(a[0] - b[0], a[1] - b[1]) < 1e-12 for a, b in zip(got, want))


def test_near_pole_reports_sphere():
    p = Quaternion(0.2, 0.3, 0.4, 0)
    Q = reciprocal(StarSeries.linear(p))
    with pytest.raises(NearPole) as err:
        Q(Quaternion(0.2, 0, 0, 0.5))  # same sphere as p
    x, y = err.value.sphere
    assert abs(x - 0.2) < 1e-12 and abs(y - 0.5) < 1e-12


def test_sphere_roots_multiplicity_and_real_roots():
    s = StarSeries.real([1, 0, 2, 0, 1])  # (q^2 + 1)^2
    assert [tuple(round(v, 9) for v in r) for r in sphere_roots(s)] == [(0.0, 1.0), (0.0, 1.0)]
    r = sphere_roots(StarSeries.real([2, -3, 1]))  # roots 1 and 2
    assert [round(v[0], 12) for v in r] == [1.0, 2.0] and all(v[1] == 0.0 for v in r)


# -- field operations against pointwise oracles --------------------------------

def _quotients(rng):
    F = RegularQuotient(random_series(rng, 2), random_series(rng, 2), "left")
    G = RegularQuotient(random_series(rng, 2), random_series(rng, 1), "right")
    return F, G


def test_field_operations_pointwise():
    rng = np.random.default_rng(10)
    checked = 0
    for _ in range(100):
        F, G = _quotients(rng)
        q = random_in_ball(rng, 1.0)
        c = random_unit(rng)
        try:
            fq, gq = F(q), G(q)
            scale = 1 + abs(fq) * abs(gq) + abs(fq) + abs(gq)
            assert abs((F + G)(q) - (fq + gq)) < 1e-9 * scale
            assert abs((F - G)(q) - (fq - gq)) < 1e-9 * scale
            assert abs((F * c)(q) - fq * c) < 1e-9 * scale
            assert abs((c * F)(q) - product_value(RegularQuotient.from_series(StarSeries((c,))), F, q)) < 1e-9 * scale
            assert abs((F * G)(q) - product_value(F, G, q)) < 1e-8 * scale
            assert abs((F * F.inverse())(q) - ONE) < 1e-8
            assert abs((F.right_div(G) * G)(q) - fq) < 1e-8 * scale
            checked += 1
        except NearPole:
            continue
    assert checked > 80


def test_quotient_cullen_derivative_matches_slice_derivative():
    rng = np.random.default_rng(12)
    for _ in range(30):
        F, _ = _quotients(rng)
        q = random_in_ball(rng, 0.8)
        try:
            exact = F.cullen_derivative()(q)
            fd = directional_derivative(F, q, ONE, 1e-6)
        except NearPole:
            continue
        assert abs(exact - fd) < 1e-6 * (1 + abs(exact))
        higher = F.cullen_derivatives(2)
        assert abs(higher[1](q) - exact) < 1e-9 * (1 + abs(exact))
        assert abs(higher[2](q) - F.cullen_derivative().cullen_derivative()(q)) < 1e-7 * (1 + abs(exact))


def test_quotient_diff_quotient_reconstructs():
    rng = np.random.default_rng(13)
    for _ in range(30):
        F, _ = _quotients(rng)
        q0, q = random_in_ball(rng, 0.6), random_in_ball(rng, 0.6)
        try:
            R = F.diff_quotient(q0)
            lin = RegularQuotient.from_series(StarSeries.linear(q0))
            assert abs(product_value(lin, R, q) + F(q0) - F(q)) < 1e-9 * (1 + abs(F(q)))
        except NearPole:
            continue


def test_quotient_symmetrize_method_and_json():
    rng = np.random.default_rng(14)
    F, G = _quotients(rng)
    q = Quaternion(0.3, 0, 0, 0)
    s = F.symmetrize()
    assert all(c[1:] == (0.0, 0.0, 0.0) for c in s.central_numer.coeffs)
    assert abs(s(q) - F(q) * F.conjugate()(q)) < 1e-10 * (1 + abs(F(q)) ** 2)
    assert RegularQuotient.from_json(G.to_json()) == G


@given(ball_points)
@settings(max_examples=50)
def test_polynomial_detection(q):
    assume(abs(q) > 0)
    assert RegularQuotient.from_series(StarSeries.linear(q)).is_polynomial()
    assert not reciprocal(StarSeries.linear(q)).is_polynomial()
