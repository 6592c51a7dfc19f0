"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import math

import numpy as np
from strategies import random_series

from srk.calculus import sigma_distance, spherical_expansion, spherical_pair, taylor_expansion
from srk.errors import InconsistentConditions, NearPole
from srk.harness import ball_points, run_check, strict_fraction
from srk.mobius import (
    IDENTITY,
    QuatMatrix2,
    RegularMobius,
    fixed_points,
    left_action,
    mobius_fixing,
    moebius_q0,
    right_action,
    rotation_matrix,
    translation_matrix,
)
from srk.quaternion import ONE, ZERO, Quaternion, qinv, random_in_ball, random_unit, slice_decompose
from srk.rational import RegularQuotient, T_transform, eval_quotient, eval_via_T
from srk.schwarz_pick import PickContext, check_rigidity, mobius_power, sample_self_map, sp_higher_cullen
from srk.series import StarSeries, conjugate, star_mul, symmetrize
from srk.zeros import locate_zeros


def nonreal_point(rng, radius, min_imag):
    while True:
        q = random_in_ball(rng, radius)
        if q.imag_norm() > min_imag:
            return q


def unit_imaginary(rng):
    u = random_unit(rng)
    return Quaternion(0, *u[1:]) * (1 / u.imag_norm())


def test_1_mobius_equality_cases(acceptance_line):
    worst = {"main": 0.0, "R": 0.0, "cullen": 0.0, "spherical": 0.0}
    rng = np.random.default_rng(1001)
    for i in range(200):
        f = RegularMobius(random_in_ball(rng, 0.9), random_unit(rng))
        for q0, q in ball_points(50, 1000 + i, 0.9):
            ctx = PickContext(f, q0)
            for rec in ctx.all_records(q):
                worst[rec.name] = max(worst[rec.name], abs(rec.residual))
    passed = max(worst.values()) <= 1e-9
    detail = " ".join(f"{k}={v:.1e}" for k, v in worst.items())
    acceptance_line("1 Mobius equality cases (200 maps x 50 pairs)", passed, f"max |residual|: {detail}")
    assert passed


def test_2_extremal_derivatives(acceptance_line):
    rng = np.random.default_rng(1002)
    worst_c = worst_s = 0.0
    for _ in range(100):
        q0 = nonreal_point(rng, 0.9, 0.05)
        M = moebius_q0(q0)
        dc = M.cullen_derivative()(q0)
        expected_c = 1 / (1 - q0.norm2())
        worst_c = max(worst_c, abs(dc - Quaternion(expected_c, 0, 0, 0)) / expected_c)
        ds = spherical_pair(M, q0).derivative
        q0b = q0.conj()
        expected_s = qinv(ONE - q0b * q0b)
        worst_s = max(worst_s, abs(ds - expected_s) / abs(expected_s))
    passed = worst_c <= 1e-10 and worst_s <= 1e-10
    acceptance_line("2 derivatives of the extremal map (100 points)", passed,
                    f"rel err cullen={worst_c:.1e} spherical={worst_s:.1e}")
    assert passed


def test_3_soundness_sweep(acceptance_line):
    report = run_check("non-mobius", 10_000, 1003, radius=0.8)
    s = report["summary"]
    frac = strict_fraction(report)
    passed = s["min_residual"] >= -1e-9 and frac >= 0.99
    acceptance_line("3 soundness sweep (10^4 non-Mobius maps)", passed,
                    f"min residual={s['min_residual']:.2e} strict fraction={frac:.4f} "
                    f"records={s['record_count']}")
    assert passed


def test_4_quotient_route_agreement(acceptance_line):
    rng = np.random.default_rng(1004)
    worst, checked, poles = 0.0, 0, 0
    for _ in range(1000):
        f = random_series(rng, int(rng.integers(1, 7)))
        g = random_series(rng, int(rng.integers(0, 7)))
        q = random_in_ball(rng, 1.0)
        Q = RegularQuotient(f, g)
        try:
            a = eval_quotient(Q, q)
            b = eval_via_T(Q, q)
        except NearPole:
            poles += 1
            continue
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
        checked += 1
    passed = worst <= 1e-10 and checked >= 990
    acceptance_line("4 quotient route agreement (10^3 samples)", passed,
                    f"max rel diff={worst:.1e} checked={checked} near-pole={poles}")
    assert passed


def test_5_T_involution(acceptance_line):
    rng = np.random.default_rng(1005)
    worst_inv = worst_sphere = 0.0
    skipped = 0
    for _ in range(1000):
        f = random_series(rng, int(rng.integers(0, 7)))
        q = random_in_ball(rng, 1.5)
        try:
            t = T_transform(f, q)
            back = T_transform(conjugate(f), t)
        except NearPole:
            skipped += 1
            continue
        worst_inv = max(worst_inv, abs(back - q))
        worst_sphere = max(worst_sphere, abs(t[0] - q[0]), abs(t.imag_norm() - q.imag_norm()))
    passed = worst_inv <= 1e-10 and worst_sphere <= 1e-12 and skipped <= 10
    acceptance_line("5 T-map involution (10^3 samples)", passed,
                    f"involution={worst_inv:.1e} sphere={worst_sphere:.1e} skipped={skipped}")
    assert passed


def _sp11(rng):
    C = translation_matrix(random_in_ball(rng, 0.9))
    return C @ rotation_matrix(random_unit(rng)) @ rotation_matrix(random_unit(rng), random_unit(rng))


def test_6_action_laws(acceptance_line):
    rng = np.random.default_rng(1006)
    worst_comp = worst_herm = 0.0
    for _ in range(1000):
        f = sample_self_map("blaschke-product(2)", rng).func
        A, B = _sp11(rng), _sp11(rng)
        q = random_in_ball(rng, 0.95)
        lhs = right_action(right_action(f, A), B)(q)
        rhs = right_action(f, A @ B)(q)
        worst_comp = max(worst_comp, abs(lhs - rhs))
        # a Hermitian matrix [[a, c], [cbar, d]] with a > |c| + |d| keeps f c + d away from zero
        c = random_in_ball(rng, 0.5)
        H = QuatMatrix2(Quaternion(float(rng.uniform(-1, 1)), 0, 0, 0), c, c.conj(),
                        Quaternion(float(rng.uniform(1.5, 3.0)), 0, 0, 0))
        g = sample_self_map("bounded-series(4)", rng).func
        r, l = right_action(g, H)(q), left_action(H, g)(q)
        worst_herm = max(worst_herm, abs(r - l))
    passed = worst_comp <= 1e-10 and worst_herm <= 1e-10
    acceptance_line("6 action laws (10^3 points)", passed,
                    f"composition={worst_comp:.1e} hermitian={worst_herm:.1e}")
    assert passed


def test_7_rigidity(acceptance_line):
    rng = np.random.default_rng(1007)
    failures = []
    identities = 0
    for i in range(100):
        q0 = random_in_ball(rng, 0.9)
        v = ONE if i % 10 == 0 else random_unit(rng)
        a, u = mobius_fixing(q0, v)
        try:
            report = check_rigidity(RegularMobius(a, u), q0)
        except InconsistentConditions as exc:
            failures.append(f"inconsistent at map {i}: {exc}")
            continue
        pts = fixed_points((a, u))
        if v == ONE:
            identities += 1
            if not report.identity or pts is not IDENTITY:
                failures.append(f"map {i}: v = 1 not classified as identity")
            continue
        inside = [p for p in pts if abs(p) < 1 - 1e-8]
        if report.identity or any(report.conditions.values()):
            failures.append(f"map {i}: a condition holds for v != 1")
        if len(inside) != 1 or abs(inside[0] - q0) > 1e-9 or report.other_fixed_points:
            failures.append(f"map {i}: fixed points {inside}")
    passed = not failures
    acceptance_line("7 rigidity (100 maps)", passed,
                    f"identities={identities} failures={len(failures)}"
                    + (f" first: {failures[0]}" if failures else ""))
    assert passed, failures


def test_8_higher_order(acceptance_line):
    rng = np.random.default_rng(1008)
    worst = 0.0
    min_strict = math.inf
    for n in (2, 3):
        for _ in range(50):
            q0, u = random_in_ball(rng, 0.9), random_unit(rng)
            (derivative,) = sp_higher_cullen(mobius_power(q0, n) * u, q0, n)
            worst = max(worst, abs(derivative.residual) / derivative.rhs)
            q = random_in_ball(rng, 0.9)
            for rec in sp_higher_cullen(StarSeries.identity().power(n + 1), ZERO, n, q):
                min_strict = min(min_strict, rec.residual)
    passed = worst <= 1e-8 and min_strict > 0
    acceptance_line("8 higher-order bounds (n = 2, 3)", passed,
                    f"extremal rel residual={worst:.1e} min residual for q^(n+1)={min_strict:.2e}")
    assert passed


def test_9_expansions(acceptance_line):
    rng = np.random.default_rng(1009)
    worst_t = worst_s = 0.0
    for _ in range(10):
        f = random_series(rng, 8)
        q0 = nonreal_point(rng, 0.7, 0.05)
        sc = slice_decompose(q0)
        taylor = taylor_expansion(f, q0, 8)
        sph = spherical_expansion(f, q0, 4)
        t_points = s_points = 0
        while t_points < 10 or s_points < 10:
            # half on the slice of q0, half anywhere nearby
            step = Quaternion(*rng.normal(size=2).tolist(), 0, 0) if rng.random() < 0.5 else None
            if step is not None:
                q = q0 + Quaternion(step[0], 0, 0, 0) * 0.1 + sc.I * (0.1 * step[1])
            else:
                q = q0 + random_in_ball(rng, 0.3)
            scale = max(1.0, abs(f(q)))
            if t_points < 10 and sigma_distance(q, q0) < 0.3:
                worst_t = max(worst_t, abs(taylor(q) - f(q)) / scale)
                t_points += 1
            if s_points < 10 and sph.in_neighbourhood(q, 0.3):
                worst_s = max(worst_s, abs(sph(q) - f(q)) / scale)
                s_points += 1
    q0 = Quaternion(0.2, -0.3, 0.1, 0.4)
    c = spherical_expansion(StarSeries.identity().power(2), q0, 2).coeffs
    expected = (q0 * q0, Quaternion(2 * q0[0], 0, 0, 0), ONE, ZERO)
    worst_q2 = max(abs(a - b) for a, b in zip(c, expected))
    passed = worst_t <= 1e-10 and worst_s <= 1e-10 and worst_q2 <= 1e-12
    acceptance_line("9 Taylor and spherical expansions (100 points each)", passed,
                    f"taylor={worst_t:.1e} spherical={worst_s:.1e} q^2 coefficients={worst_q2:.1e}")
    assert passed


def test_10_zero_location(acceptance_line):
    rng = np.random.default_rng(1010)
    worst, bad_counts = 0.0, 0
    for _ in range(200):
        p1, p2 = random_in_ball(rng, 1.0), random_in_ball(rng, 1.0)
        f = star_mul(StarSeries.linear(p1), StarSeries.linear(p2))
        zeros = locate_zeros(f)
        for z in zeros:
            if z.kind == "sphere":
                sc = slice_decompose(Quaternion(z.x0, z.y0, 0, 0))
                pts = [sc.point(unit_imaginary(rng)) for _ in range(5)]
            else:
                pts = [z.point]
            worst = max(worst, max(abs(f(p)) for p in pts))
        # each sphere carries as many zeros as the factors placed on it
        expected = sorted([(round(p[0], 8), round(p.imag_norm(), 8)) for p in (p1, p2)])
        got = sorted((round(z.x0, 8), round(z.y0, 8)) for z in zeros for _ in range(z.multiplicity))
        fs_spheres = {(round(z.x0, 8), round(z.y0, 8)) for z in locate_zeros(symmetrize(f))}
        if got != expected or set(got) != fs_spheres:
            bad_counts += 1
    passed = worst < 1e-9 and bad_counts == 0
    acceptance_line("10 zero location (200 products)", passed,
                    f"max |f| at zeros={worst:.1e} count mismatches={bad_counts}")
    assert passed
