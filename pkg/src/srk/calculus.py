"""Cullen and spherical derivatives, differential quotients and expansions.

Functions here accept a :class:`StarSeries` or a :class:`RegularQuotient`
wherever the operation makes sense for both; pointwise operations
(:func:`spherical_pair`, :func:`real_differential`) accept any callable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quaternion import ONE, ZERO, Quaternion, as_quaternion, qinv, same_slice, slice_decompose
from .rational import RegularQuotient
from .series import StarSeries, divide_linear, sphere_polynomial, star_mul

FD_STEP = 1e-5
FD_TOL = 1e-6


@dataclass(frozen=True)
class SphericalPair:
    value: Quaternion
    derivative: Quaternion
    x0: float
    y0: float

    def at(self, q: Quaternion) -> Quaternion:
        """Reassemble ``f(q) = v_s f(q) + Im(q) d_s f(q)`` on the base sphere."""
        return self.value + q.imag * self.derivative


def spherical_pair(f, q0) -> SphericalPair:
    """Spherical value ``(f(q0) + f(q0bar))/2`` and derivative ``(2 Im q0)^{-1}(f(q0) - f(q0bar))``."""
    q0 = as_quaternion(q0)
    sc = slice_decompose(q0)
    fq, fqb = f(q0), f(q0.conj())
    value = (fq + fqb) * 0.5
    derivative = qinv(q0.imag * 2.0) * (fq - fqb)
    return SphericalPair(value, derivative, sc.x0, sc.y0)


def cullen_derivative(f):
    return f.cullen_derivative()


def cullen_derivatives_at(f, q0, order: int) -> list:
    """``[f(q0), d_c f(q0), ..., d_c^order f(q0)]``."""
    q0 = as_quaternion(q0)
    if isinstance(f, StarSeries):
        out, g = [], f
        for _ in range(order + 1):
            out.append(g(q0))
            g = g.cullen_derivative()
        return out
    return [g(q0) for g in f.cullen_derivatives(order)]


def diff_quotient(f, q0):
    """``R_{q0} f = (q - q0)^{-*} * (f - f(q0))``; regular wherever ``f`` is."""
    q0 = as_quaternion(q0)
    if isinstance(f, RegularQuotient):
        return f.diff_quotient(q0)
    return divide_linear(f - f(q0), q0)


@dataclass(frozen=True)
class SphericalExpansion:
    q0: Quaternion
    x0: float
    y0: float
    coeffs: tuple
    order: int

    def __call__(self, q) -> Quaternion:
        q = as_quaternion(q)
        base = sphere_polynomial(self.x0, self.y0)(q)
        lin = q - self.q0
        total, p = ZERO, ONE
        for n in range(self.order + 1):
            a_even, a_odd = self.coeffs[2 * n], self.coeffs[2 * n + 1]
            total = total + p * (a_even + lin * a_odd)
            p = p * base
        return total

    def in_neighbourhood(self, q, r: float) -> bool:
        """``q`` in ``U(x0 + y0 S, r) = {|(q - x0)^2 + y0^2| < r^2}``."""
        return abs(sphere_polynomial(self.x0, self.y0)(as_quaternion(q))) < r * r


def spherical_expansion(f, q0, order: int) -> SphericalExpansion:
    """Coefficients ``A_0 .. A_{2N+1}`` of the expansion in powers of ``(q - x0)^2 + y0^2``.

    ``A_{2n} = (R_{q0bar} R_{q0})^n f(q0)`` and
    ``A_{2n+1} = R_{q0} (R_{q0bar} R_{q0})^n f(q0bar)``.
    """
    q0 = as_quaternion(q0)
    sc = slice_decompose(q0)
    q0b = q0.conj()
    coeffs = []
    g = f
    for _ in range(order + 1):
        coeffs.append(g(q0))
        h = diff_quotient(g, q0)
        coeffs.append(h(q0b))
        g = diff_quotient(h, q0b)
    return SphericalExpansion(q0, sc.x0, sc.y0, tuple(coeffs), order)


def iterated_R(f, q0, n: int, odd: bool = False):
    """``(R_{q0bar} R_{q0})^n f``, followed by one more ``R_{q0}`` when ``odd``."""
    q0 = as_quaternion(q0)
    g = f
    for _ in range(n):
        g = diff_quotient(diff_quotient(g, q0), q0.conj())
    if odd:
        g = diff_quotient(g, q0)
    return g


@dataclass(frozen=True)
class TaylorExpansion:
    q0: Quaternion
    coeffs: tuple

    def __call__(self, q) -> Quaternion:
        """Partial sum ``sum (q - q0)^{*n} c_n``."""
        q = as_quaternion(q)
        lin = StarSeries.linear(self.q0)
        power = StarSeries((ONE,))
        total = ZERO
        for c in self.coeffs:
            total = total + power(q) * c
            power = star_mul(power, lin)
        return total


def taylor_expansion(f, q0, order: int) -> TaylorExpansion:
    """Coefficients ``d_c^n f(q0) / n!`` for ``n = 0 .. order``."""
    q0 = as_quaternion(q0)
    values = cullen_derivatives_at(f, q0, order)
    return TaylorExpansion(q0, tuple(v * (1.0 / math.factorial(n)) for n, v in enumerate(values)))


def sigma_distance(q, p) -> float:
    """``|q - p|`` on a common slice, else ``sqrt((Re q - Re p)^2 + (|Im q| + |Im p|)^2)``."""
    q, p = as_quaternion(q), as_quaternion(p)
    if same_slice(q, p):
        return abs(q - p)
    return math.hypot(q[0] - p[0], q.imag_norm() + p.imag_norm())


# -- real differential ------------------------------------------------------

_BASIS = (Quaternion(1.0, 0, 0, 0), Quaternion(0, 1.0, 0, 0),
          Quaternion(0, 0, 1.0, 0), Quaternion(0, 0, 0, 1.0))


def directional_derivative(f, q, direction, h: float = FD_STEP) -> Quaternion:
    """Central difference of ``f`` at ``q`` along ``direction``."""
    q, direction = as_quaternion(q), as_quaternion(direction)
    return (f(q + direction * h) - f(q - direction * h)) * (0.5 / h)


def real_differential(f, q, h: float = FD_STEP) -> np.ndarray:
    """4x4 Jacobian of ``f`` at ``q`` by central differences (column k = d f / d e_k)."""
    cols = [np.array(directional_derivative(f, q, e, h)) for e in _BASIS]
    return np.column_stack(cols)


def right_mult_matrix(c: Quaternion) -> np.ndarray:
    """Matrix of ``v -> v c`` on R^4."""
    return np.column_stack([np.array(e * c) for e in _BASIS])


def differential_model(f, q0) -> np.ndarray:
    """Differential predicted from the derivatives.

    At a real point it is right multiplication by ``d_c f``; elsewhere it is
    right multiplication by ``d_c f`` on ``L_I`` and by ``d_s f`` on its
    orthogonal complement.
    """
    q0 = as_quaternion(q0)
    dc = _cullen_value(f, q0)
    if q0.is_real():
        return right_mult_matrix(dc)
    ds = spherical_pair(f, q0).derivative
    unit = slice_decompose(q0).I
    Rc, Rs = right_mult_matrix(dc), right_mult_matrix(ds)
    e_plane = [np.array(ONE), np.array(unit)]
    P = sum(np.outer(e, e) for e in e_plane)
    return Rc @ P + Rs @ (np.eye(4) - P)


def _cullen_value(f, q0):
    return f.cullen_derivative()(q0)
