import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import hamilton, quaternions

from srk.errors import QuaternionZeroDivision, RealPoint
from srk.quaternion import (
    I,
    J,
    K,
    ONE,
    ZERO,
    Quaternion,
    as_quaternion,
    format_quaternion,
    parse_quaternion,
    qinv,
    qmul,
    random_in_ball,
    random_unit,
    same_slice,
    slice_decompose,
)


def test_defining_relations():
    assert qmul(I, J) == K
    assert J * K == I
    assert K * I == J
    assert I * I == -ONE
    assert I * J * K == -ONE


def test_identity_and_half_angle_product():
    q = Quaternion(0.3, -1.2, 2.0, 0.7)
    assert q * ONE == q
    s = 1 / math.sqrt(2)
    prod = Quaternion(s, s, 0, 0) * Quaternion(s, 0, s, 0)
    assert max(abs(a - b) for a, b in zip(prod, (0.5, 0.5, 0.5, 0.5))) < 1e-15


def test_inverse_examples():
    assert qinv(ONE) == ONE
    assert qinv(I) == -I
    with pytest.raises(QuaternionZeroDivision):
        qinv(ZERO)
    with pytest.raises(ZeroDivisionError):
        qinv(Quaternion(1e-14, 0, 0, 0))


def test_slice_decompose_examples():
    sc = slice_decompose(Quaternion(1, 2, 0, 0))
    assert (sc.x0, sc.y0, sc.I) == (1, 2, I)
    sc = slice_decompose(Quaternion(1, -2, 0, 0))
    assert (sc.x0, sc.y0, sc.I) == (1, 2, -I)
    with pytest.raises(RealPoint):
        slice_decompose(Quaternion(3, 0, 0, 0))


@given(quaternions, quaternions)
def test_product_matches_matrix_oracle(a, b):
    assert abs(a * b - hamilton(a, b)) <= 1e-12 * (1 + abs(a) * abs(b))


@given(quaternions, quaternions)
def test_norm_is_multiplicative(a, b):
    assert abs(abs(a * b) - abs(a) * abs(b)) <= 1e-12 * (1 + abs(a) * abs(b))


@given(quaternions, quaternions)
def test_conjugation_reverses_products(a, b):
    assert abs((a * b).conj() - b.conj() * a.conj()) <= 1e-12 * (1 + abs(a) * abs(b))


@given(quaternions, quaternions, quaternions)
def test_associative(a, b, c):
    assert abs((a * b) * c - a * (b * c)) <= 1e-12 * (1 + abs(a) * abs(b) * abs(c))


@given(quaternions)
def test_conj_times_self_is_norm(q):
    p = q.conj() * q
    assert abs(p - Quaternion(q.norm2(), 0, 0, 0)) <= 1e-12 * (1 + q.norm2())


@given(quaternions)
def test_inverse_property(q):
    if abs(q) > 1e-6:
        assert abs(q * qinv(q) - ONE) < 1e-12


@given(quaternions)
def test_slice_round_trip(q):
    if q.imag_norm() > 1e-8:
        sc = slice_decompose(q)
        assert sc.y0 > 0 and abs(abs(sc.I) - 1) < 1e-15 and sc.I[0] == 0
        assert abs(sc.reconstruct() - q) < 1e-14 * max(1.0, abs(q))


@given(st.floats(allow_nan=False, allow_infinity=False, width=64),
       st.floats(allow_nan=False, allow_infinity=False, width=64),
       st.floats(allow_nan=False, allow_infinity=False, width=64),
       st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_text_round_trip_is_bit_identical(w, x, y, z):
    q = Quaternion(w, x, y, z)
    back = parse_quaternion(format_quaternion(q))
    assert [v.hex() for v in back] == [v.hex() for v in q]


@pytest.mark.parametrize("text,expected", [
    ("1+0i+0j+0k", ONE),
    ("i", I),
    ("-j", -J),
    ("1 - 2.5i + 3e-1k", Quaternion(1, -2.5, 0, 0.3)),
    ("2", Quaternion(2, 0, 0, 0)),
    ("0.5k-1", Quaternion(-1, 0, 0, 0.5)),
])
def test_parse_forms(text, expected):
    assert parse_quaternion(text) == expected


@pytest.mark.parametrize("bad", ["", "1+", "2x", "1 2i", "1+2i+"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_quaternion(bad)


def test_repeated_terms_add():
    assert parse_quaternion("i+i-0.5") == Quaternion(-0.5, 2, 0, 0)


def test_as_quaternion_accepts_numbers_sequences_and_text():
    assert as_quaternion(2) == Quaternion(2, 0, 0, 0)
    assert as_quaternion([0, 1, 0, 0]) == I
    assert as_quaternion("k") == K


def test_same_slice():
    assert same_slice(Quaternion(1, 1, 0, 0), Quaternion(2, -3, 0, 0))
    assert same_slice(Quaternion(1, 0, 0, 0), Quaternion(0, 0, 1, 1))
    assert not same_slice(I, J)


def test_random_samplers():
    rng = np.random.default_rng(0)
    units = [random_unit(rng) for _ in range(200)]
    assert all(abs(abs(u) - 1) < 1e-14 for u in units)
    pts = [random_in_ball(rng, 0.7) for _ in range(2000)]
    assert all(abs(p) < 0.7 for p in pts)
    # uniform in 4-volume: P(|q| < r/2) = 1/16
    inner = sum(abs(p) < 0.35 for p in pts) / len(pts)
    assert abs(inner - 1 / 16) < 0.02
