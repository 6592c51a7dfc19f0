"""Floating-point quaternions and their slice decomposition.

A quaternion ``w + xi + yj + zk`` is stored as an immutable 4-tuple.  Every
non-real quaternion lies on exactly one complex plane ``L_I = R + I R`` and
can be written ``x0 + I y0`` with ``y0 > 0``; :func:`slice_decompose` computes
that representation.
"""

from __future__ import annotations

import math
import re
from typing import NamedTuple

from .errors import QuaternionZeroDivision, RealPoint

#: ``|a|`` at or below this is treated as zero by :func:`qinv`.
ZERO_TOL = 1e-13
#: ``|Im q|`` at or below this makes ``q`` a real point.
REAL_TOL = 1e-10


class Quaternion(NamedTuple):
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self[0] + other[0], self[1] + other[1],
                              self[2] + other[2], self[3] + other[3])
        if isinstance(other, (int, float)):
            return Quaternion(self[0] + other, self[1], self[2], self[3])
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self[0] - other[0], self[1] - other[1],
                              self[2] - other[2], self[3] - other[3])
        if isinstance(other, (int, float)):
            return Quaternion(self[0] - other, self[1], self[2], self[3])
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(other - self[0], -self[1], -self[2], -self[3])
        return NotImplemented

    def __neg__(self):
        return Quaternion(-self[0], -self[1], -self[2], -self[3])

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            a1, b1, c1, d1 = self
            a2, b2, c2, d2 = other
            return Quaternion(
                a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            )
        if isinstance(other, (int, float)):
            return Quaternion(self[0] * other, self[1] * other,
                              self[2] * other, self[3] * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self[0] * other, self[1] * other,
                              self[2] * other, self[3] * other)
        return NotImplemented

    def __truediv__(self, other):
        # only real divisors: quaternion division is ambiguous (left/right)
        if isinstance(other, (int, float)):
            return Quaternion(self[0] / other, self[1] / other,
                              self[2] / other, self[3] / other)
        return NotImplemented

    def __abs__(self):
        return math.sqrt(self[0] * self[0] + self[1] * self[1]
                         + self[2] * self[2] + self[3] * self[3])

    def __str__(self):
        return format_quaternion(self)

    # -- structure --------------------------------------------------------
    def conj(self):
        return Quaternion(self[0], -self[1], -self[2], -self[3])

    def norm2(self):
        return (self[0] * self[0] + self[1] * self[1]
                + self[2] * self[2] + self[3] * self[3])

    @property
    def real(self):
        return self[0]

    @property
    def imag(self):
        return Quaternion(0.0, self[1], self[2], self[3])

    def imag_norm(self):
        return math.sqrt(self[1] * self[1] + self[2] * self[2] + self[3] * self[3])

    def inv(self):
        return qinv(self)

    def is_real(self, tol=REAL_TOL):
        return self.imag_norm() <= tol

    @classmethod
    def parse(cls, text):
        return parse_quaternion(text)


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
ZERO = Quaternion(0.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def as_quaternion(value) -> Quaternion:
    """Coerce reals, 4-sequences and strings to :class:`Quaternion`."""
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(float(value), 0.0, 0.0, 0.0)
    if isinstance(value, str):
        return parse_quaternion(value)
    w, x, y, z = value
    return Quaternion(float(w), float(x), float(y), float(z))


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a b``."""
    return a * b


def qinv(a: Quaternion) -> Quaternion:
    n2 = a.norm2()
    if math.sqrt(n2) <= ZERO_TOL:
        raise QuaternionZeroDivision(f"cannot invert {format_quaternion(a)}")
    return Quaternion(a[0] / n2, -a[1] / n2, -a[2] / n2, -a[3] / n2)


class SliceCoordinates(NamedTuple):
    x0: float
    y0: float
    I: Quaternion

    def reconstruct(self) -> Quaternion:
        return Quaternion(self.x0, self.I[1] * self.y0, self.I[2] * self.y0,
                          self.I[3] * self.y0)

    def point(self, unit: Quaternion) -> Quaternion:
        """The point of the same sphere lying on the plane of ``unit``."""
        return Quaternion(self.x0, unit[1] * self.y0, unit[2] * self.y0,
                          unit[3] * self.y0)


def slice_decompose(q: Quaternion, tol: float = REAL_TOL) -> SliceCoordinates:
    """Write ``q = x0 + I y0`` with ``y0 > 0`` and ``I`` a unit imaginary."""
    y0 = q.imag_norm()
    if y0 <= tol:
        raise RealPoint(f"{format_quaternion(q)} is real; no imaginary unit")
    return SliceCoordinates(q[0], y0, Quaternion(0.0, q[1] / y0, q[2] / y0, q[3] / y0))


def same_slice(p: Quaternion, q: Quaternion, tol: float = 1e-12) -> bool:
    """True when ``p`` and ``q`` lie on a common plane ``L_I``."""
    np_, nq = p.imag_norm(), q.imag_norm()
    if np_ <= tol or nq <= tol:
        return True
    cx = p[2] * q[3] - p[3] * q[2]
    cy = p[3] * q[1] - p[1] * q[3]
    cz = p[1] * q[2] - p[2] * q[1]
    return math.sqrt(cx * cx + cy * cy + cz * cz) <= tol * np_ * nq


def random_unit(rng) -> Quaternion:
    """Uniform point of the unit 3-sphere (Shoemake's construction)."""
    u1, u2, u3 = rng.random(3)
    return unit_from_cube(u1, u2, u3)


def unit_from_cube(u1: float, u2: float, u3: float) -> Quaternion:
    a, b = math.sqrt(1.0 - u1), math.sqrt(u1)
    t1, t2 = 2.0 * math.pi * u2, 2.0 * math.pi * u3
    return Quaternion(b * math.cos(t2), a * math.sin(t1), a * math.cos(t1), b * math.sin(t2))


def random_in_ball(rng, radius: float = 1.0) -> Quaternion:
    """Volume-uniform point of the open 4-ball of the given radius."""
    r = radius * rng.random() ** 0.25
    return random_unit(rng) * r


def random_imaginary_unit(rng) -> Quaternion:
    v = rng.normal(size=3)
    v /= math.sqrt(float(v @ v))
    return Quaternion(0.0, float(v[0]), float(v[1]), float(v[2]))


# -- text form -----------------------------------------------------------

_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TERM = re.compile(r"\s*([+-]?)\s*(" + _NUMBER + r"|inf|nan)?\s*([ijk]?)\s*")


def parse_quaternion(text: str) -> Quaternion:
    """Parse ``"w+xi+yj+zk"``; terms may be omitted, reordered or repeated.

    >>> parse_quaternion("1 - 2.5j + k")
    Quaternion(w=1.0, x=0.0, y=-2.5, z=1.0)
    """
    s = text.strip()
    if not s:
        raise ValueError("empty quaternion literal")
    parts: list = [None, None, None, None]
    pos, first = 0, True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse quaternion literal {text!r}")
        sign, number, unit = m.groups()
        if not sign and not first:
            raise ValueError(f"missing sign between terms in {text!r}")
        if number is None and not unit:
            raise ValueError(f"cannot parse quaternion literal {text!r}")
        value = float(number) if number is not None else 1.0
        if sign == "-":
            value = -value
        slot = " ijk".index(unit) if unit else 0
        # first assignment keeps the sign of -0.0
        parts[slot] = value if parts[slot] is None else parts[slot] + value
        pos, first = m.end(), False
    return Quaternion(*(0.0 if p is None else p for p in parts))


def format_quaternion(q: Quaternion) -> str:
    """17-significant-digit text form; :func:`parse_quaternion` inverts it up to the sign of zero."""
    w, x, y, z = (c + 0.0 for c in q)  # -0.0 + 0.0 is 0.0
    return f"{w:.17g}{x:+.17g}i{y:+.17g}j{z:+.17g}k"
