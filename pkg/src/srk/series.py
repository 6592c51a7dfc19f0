"""Truncated quaternionic power series ``sum q^n a_n`` and the *-algebra.

Coefficients sit to the right of the powers of the variable.  With that
convention evaluation is plain Horner (powers of ``q`` commute with ``q``)
and the regular product is the Cauchy convolution of coefficient sequences.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegreeOverflow, NotReal, OutOfDomain, ResidualTooLarge
from .quaternion import ONE, ZERO, Quaternion, as_quaternion, format_quaternion

MAX_DEGREE = 64
DIVISION_RTOL = 1e-8
SYMMETRIZATION_CHECK = 1e-9


def _as_coeffs(coeffs) -> tuple:
    out = tuple(as_quaternion(c) for c in coeffs)
    return out if out else (ZERO,)


@dataclass(frozen=True)
class StarSeries:
    """Polynomial ``a_0 + q a_1 + ... + q^N a_N`` on the ball ``|q| < radius``."""

    coeffs: tuple
    radius: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    # -- construction -----------------------------------------------------
    @classmethod
    def constant(cls, c) -> "StarSeries":
        return cls((as_quaternion(c),))

    @classmethod
    def identity(cls) -> "StarSeries":
        return cls((ZERO, ONE))

    @classmethod
    def linear(cls, q0) -> "StarSeries":
        """``q - q0``."""
        return cls((-as_quaternion(q0), ONE))

    @classmethod
    def real(cls, values: Iterable[float]) -> "StarSeries":
        return cls(tuple(Quaternion(float(v), 0.0, 0.0, 0.0) for v in values))

    @classmethod
    def from_json(cls, text_or_list) -> "StarSeries":
        items = json.loads(text_or_list) if isinstance(text_or_list, str) else text_or_list
        return cls(tuple(as_quaternion(c) for c in items))

    def to_json(self) -> list:
        return [format_quaternion(c) for c in self.coeffs]

    # -- inspection -------------------------------------------------------
    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient (``-1`` for the zero series)."""
        for n in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[n].norm2() != 0.0:
                return n
        return -1

    def trimmed(self, tol: float = 0.0) -> "StarSeries":
        n = len(self.coeffs)
        while n > 1 and abs(self.coeffs[n - 1]) <= tol:
            n -= 1
        return StarSeries(self.coeffs[:n], self.radius)

    def max_coeff(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_coeff() <= tol

    def is_real(self, tol: float = 0.0) -> bool:
        return all(c.imag_norm() <= tol for c in self.coeffs)

    def magnitude(self, r: float) -> float:
        """``sum |a_n| r^n``, a bound for ``|f|`` on ``|q| <= r``."""
        total, p = 0.0, 1.0
        for c in self.coeffs:
            total += abs(c) * p
            p *= r
        return total

    def __len__(self):
        return len(self.coeffs)

    # -- evaluation -------------------------------------------------------
    def __call__(self, q) -> Quaternion:
        return eval_series(self, q)

    # -- algebra ----------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = [ZERO] * n
        for k in range(n):
            if k < len(a):
                out[k] = a[k]
            if k < len(b):
                out[k] = out[k] + b[k]
        return StarSeries(tuple(out), min(self.radius, other.radius))

    __radd__ = __add__

    def __neg__(self):
        return StarSeries(tuple(-c for c in self.coeffs), self.radius)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, StarSeries):
            return star_mul(self, other)
        if isinstance(other, (Quaternion, int, float)):
            c = as_quaternion(other)
            return StarSeries(tuple(a * c for a in self.coeffs), self.radius)
        return NotImplemented

    def __rmul__(self, other):
        # constants on the left: c * f has coefficients c a_n
        if isinstance(other, (Quaternion, int, float)):
            c = as_quaternion(other)
            return StarSeries(tuple(c * a for a in self.coeffs), self.radius)
        return NotImplemented

    def shift(self, k: int = 1) -> "StarSeries":
        """Multiply by ``q^k`` (central, so left and right agree)."""
        return StarSeries((ZERO,) * k + self.coeffs, self.radius)

    def scale(self, t: float) -> "StarSeries":
        return StarSeries(tuple(c * t for c in self.coeffs), self.radius)

    def conjugate(self) -> "StarSeries":
        return conjugate(self)

    def symmetrize(self) -> "StarSeries":
        return symmetrize(self)

    def cullen_derivative(self) -> "StarSeries":
        return cullen_derivative(self)

    def power(self, n: int) -> "StarSeries":
        out = StarSeries((ONE,), self.radius)
        for _ in range(n):
            out = star_mul(out, self)
        return out


def _coerce(value):
    if isinstance(value, StarSeries):
        return value
    if isinstance(value, (Quaternion, int, float)):
        return StarSeries.constant(value)
    return None


def coeff_distance(f: StarSeries, g: StarSeries) -> float:
    """Max coefficient distance, padding the shorter series with zeros."""
    n = max(len(f.coeffs), len(g.coeffs))
    worst = 0.0
    for k in range(n):
        a = f.coeffs[k] if k < len(f.coeffs) else ZERO
        b = g.coeffs[k] if k < len(g.coeffs) else ZERO
        worst = max(worst, abs(a - b))
    return worst


def eval_series(f: StarSeries, q) -> Quaternion:
    q = as_quaternion(q)
    if abs(q) >= f.radius:
        raise OutOfDomain(f"|q| = {abs(q)} outside B(0, {f.radius})")
    coeffs = f.coeffs
    qw, qx, qy, qz = q
    w, x, y, z = coeffs[-1]
    for n in range(len(coeffs) - 2, -1, -1):
        a = coeffs[n]
        w, x, y, z = (
            qw * w - qx * x - qy * y - qz * z + a[0],
            qw * x + qx * w + qy * z - qz * y + a[1],
            qw * y - qx * z + qy * w + qz * x + a[2],
            qw * z + qx * y - qy * x + qz * w + a[3],
        )
    return Quaternion(w, x, y, z)


def star_mul(f: StarSeries, g: StarSeries, max_degree: int = MAX_DEGREE) -> StarSeries:
    """Regular product: ``c_n = sum_k a_k b_(n-k)``."""
    a, b = f.coeffs, g.coeffs
    n_out = len(a) + len(b) - 1
    if n_out - 1 > max_degree:
        fa, gb = f.trimmed(), g.trimmed()
        if len(fa.coeffs) + len(gb.coeffs) - 2 > max_degree:
            raise DegreeOverflow(
                f"product degree {len(fa.coeffs) + len(gb.coeffs) - 2} exceeds cap {max_degree}")
        a, b = fa.coeffs, gb.coeffs
        n_out = len(a) + len(b) - 1
    out = [[0.0, 0.0, 0.0, 0.0] for _ in range(n_out)]
    for i, (a1, b1, c1, d1) in enumerate(a):
        for j, (a2, b2, c2, d2) in enumerate(b):
            acc = out[i + j]
            acc[0] += a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2
            acc[1] += a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2
            acc[2] += a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2
            acc[3] += a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2
    return StarSeries(tuple(Quaternion(*c) for c in out), min(f.radius, g.radius))


def star_mul_many(factors: Sequence[StarSeries]) -> StarSeries:
    out = StarSeries((ONE,))
    for f in factors:
        out = star_mul(out, f)
    return out


def conjugate(f: StarSeries) -> StarSeries:
    return StarSeries(tuple(c.conj() for c in f.coeffs), f.radius)


def symmetrize(f: StarSeries) -> StarSeries:
    """``f * f^c``; the result has real coefficients."""
    s = star_mul(f, conjugate(f))
    scale = 1.0 + f.max_coeff() ** 2
    worst = max(c.imag_norm() for c in s.coeffs)
    if worst > SYMMETRIZATION_CHECK * scale:
        raise NotReal(f"symmetrization has imaginary part {worst:.3e}")
    return StarSeries(tuple(Quaternion(c[0], 0.0, 0.0, 0.0) for c in s.coeffs), s.radius)


def cullen_derivative(f: StarSeries) -> StarSeries:
    if len(f.coeffs) == 1:
        return StarSeries((ZERO,), f.radius)
    return StarSeries(tuple(c * float(n) for n, c in enumerate(f.coeffs) if n > 0), f.radius)


def divide_linear_with_residual(f: StarSeries, q0) -> tuple:
    """Solve ``(q - q0) * g = f`` by the downward recurrence.

    Returns ``(g, residual)`` where ``residual = d_0 + q0 b_0`` vanishes
    exactly when ``f(q0) = 0``.  The recurrence never inverts ``q0``.
    """
    q0 = as_quaternion(q0)
    d = f.coeffs
    n = len(d) - 1
    if n == 0:
        return StarSeries((ZERO,), f.radius), d[0]
    b = [ZERO] * n
    b[n - 1] = d[n]
    for k in range(n - 1, 0, -1):
        b[k - 1] = d[k] + q0 * b[k]
    return StarSeries(tuple(b), f.radius), d[0] + q0 * b[0]


def divide_linear(f: StarSeries, q0, rtol: float = DIVISION_RTOL) -> StarSeries:
    g, residual = divide_linear_with_residual(f, q0)
    if abs(residual) > rtol * (1.0 + f.max_coeff()):
        raise ResidualTooLarge(
            f"f(q0) != 0: synthetic division residual {abs(residual):.3e}", residual)
    return g


def sphere_polynomial(x0: float, y0: float) -> StarSeries:
    """``(q - x0)^2 + y0^2 = q^2 - 2 x0 q + x0^2 + y0^2``."""
    return StarSeries.real((x0 * x0 + y0 * y0, -2.0 * x0, 1.0))


def divide_sphere_with_residual(f: StarSeries, x0: float, y0: float) -> tuple:
    """Ordinary division by the central quadratic of the sphere ``x0 + y0 S``."""
    c0, c1 = x0 * x0 + y0 * y0, -2.0 * x0
    rem = list(f.coeffs)
    n = len(rem) - 1
    if n < 2:
        return StarSeries((ZERO,), f.radius), StarSeries(tuple(rem), f.radius)
    quot = [ZERO] * (n - 1)
    for k in range(n, 1, -1):
        t = rem[k]
        quot[k - 2] = t
        rem[k] = ZERO
        rem[k - 1] = rem[k - 1] - t * c1
        rem[k - 2] = rem[k - 2] - t * c0
    return StarSeries(tuple(quot), f.radius), StarSeries(tuple(rem[:2]), f.radius)


def divide_sphere(f: StarSeries, x0: float, y0: float, rtol: float = DIVISION_RTOL) -> StarSeries:
    quot, rem = divide_sphere_with_residual(f, x0, y0)
    if rem.max_coeff() > rtol * (1.0 + f.max_coeff()):
        raise ResidualTooLarge(
            f"f does not vanish on the sphere ({x0}, {y0}): remainder {rem.max_coeff():.3e}",
            rem)
    return quot
