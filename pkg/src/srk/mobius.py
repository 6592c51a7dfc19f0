"""Regular and classical Möbius transformations of the unit ball.

Matrix convention: ``QuatMatrix2(a, c, b, d)`` is the matrix ``[[a, c], [b, d]]``
and acts on the right of a regular function by

    f.A = (f c + d)^{-*} * (f a + b),

so that ``id.A`` is the regular fractional transformation
``(q c + d)^{-*} * (q a + b)``.  The left action is
``A^t.f = (a f + b) * (c f + d)^{-*}``.  Constants in both actions multiply
series coefficients on the side they are written on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateDenominator, OutOfDomain, QuaternionZeroDivision, SingularMatrix
from .quaternion import ONE, ZERO, Quaternion, as_quaternion, qinv
from .rational import RegularQuotient, as_regular
from .series import StarSeries

MEMBERSHIP_TOL = 1e-10
SINGULAR_TOL = 1e-12
IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class RegularMobius:
    """``(q - q0) * (1 - q q0bar)^{-*} u`` with ``|q0| < 1`` and ``|u| = 1``."""

    q0: Quaternion
    u: Quaternion = ONE

    def __post_init__(self):
        object.__setattr__(self, "q0", as_quaternion(self.q0))
        object.__setattr__(self, "u", as_quaternion(self.u))
        if abs(self.q0) >= 1.0:
            raise ValueError(f"|q0| = {abs(self.q0)} must be < 1")
        if abs(abs(self.u) - 1.0) > 1e-12:
            raise ValueError(f"|u| = {abs(self.u)} must be 1")

    def as_quotient(self) -> RegularQuotient:
        # (1 - q q0bar)^{-*} * (q - q0) u, with q0bar * q = q q0bar
        denom = StarSeries((ONE, -self.q0.conj()))
        numer = StarSeries((-(self.q0 * self.u), self.u))
        return RegularQuotient(denom, numer, "left")

    def __call__(self, q) -> Quaternion:
        return eval_regular_mobius(self, q)


def eval_regular_mobius(M: RegularMobius, q) -> Quaternion:
    q = as_quaternion(q)
    if abs(q) >= 1.0:
        raise OutOfDomain(f"|q| = {abs(q)} outside the unit ball")
    return M.as_quotient()(q)


def moebius_q0(q0) -> RegularQuotient:
    """``M_{q0}(q) = (q - q0) * (1 - q q0bar)^{-*}``."""
    return RegularMobius(as_quaternion(q0), ONE).as_quotient()


@dataclass(frozen=True)
class ClassicalMobius:
    """``g(q) = v (q - q0) (1 - q0bar q)^{-1} u`` (pointwise products)."""

    v: Quaternion
    q0: Quaternion
    u: Quaternion

    def __post_init__(self):
        for name in ("v", "q0", "u"):
            object.__setattr__(self, name, as_quaternion(getattr(self, name)))

    def __call__(self, q) -> Quaternion:
        return eval_classical_mobius(self, q)


def eval_classical_mobius(M: ClassicalMobius, q) -> Quaternion:
    q = as_quaternion(q)
    den = ONE - M.q0.conj() * q
    try:
        inv = qinv(den)
    except QuaternionZeroDivision:
        raise QuaternionZeroDivision(f"1 - q0bar q vanishes at {q}") from None
    return M.v * (q - M.q0) * inv * M.u


@dataclass(frozen=True)
class QuatMatrix2:
    """``[[a, c], [b, d]]``; see the module docstring for the action convention."""

    a: Quaternion
    c: Quaternion
    b: Quaternion
    d: Quaternion

    def __post_init__(self):
        for name in ("a", "c", "b", "d"):
            object.__setattr__(self, name, as_quaternion(getattr(self, name)))

    @classmethod
    def identity(cls) -> "QuatMatrix2":
        return cls(ONE, ZERO, ZERO, ONE)

    @classmethod
    def from_rows(cls, rows) -> "QuatMatrix2":
        (a, c), (b, d) = rows
        return cls(a, c, b, d)

    def rows(self):
        return ((self.a, self.c), (self.b, self.d))

    def to_json(self) -> list:
        return [[str(x) for x in row] for row in self.rows()]

    def __matmul__(self, other: "QuatMatrix2") -> "QuatMatrix2":
        (a1, c1), (b1, d1) = self.rows()
        (a2, c2), (b2, d2) = other.rows()
        return QuatMatrix2(a1 * a2 + c1 * b2, a1 * c2 + c1 * d2,
                           b1 * a2 + d1 * b2, b1 * c2 + d1 * d2)

    def scale(self, t: float) -> "QuatMatrix2":
        return QuatMatrix2(self.a * t, self.c * t, self.b * t, self.d * t)

    def conj(self) -> "QuatMatrix2":
        """Entrywise conjugate."""
        return QuatMatrix2(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())

    def transpose(self) -> "QuatMatrix2":
        """Plain transpose; over H it does not reverse products."""
        return QuatMatrix2(self.a, self.b, self.c, self.d)

    def conj_transpose(self) -> "QuatMatrix2":
        return QuatMatrix2(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())

    def is_hermitian(self, tol: float = MEMBERSHIP_TOL) -> bool:
        return self.max_distance(self.conj_transpose()) <= tol

    def max_distance(self, other: "QuatMatrix2") -> float:
        return max(abs(x - y) for x, y in zip((self.a, self.c, self.b, self.d),
                                              (other.a, other.c, other.b, other.d)))

    def is_invertible(self, tol: float = SINGULAR_TOL) -> bool:
        """Column rank test: the columns must be right-linearly independent.

        With ``a != 0`` the second column is a right multiple of the first
        iff the Schur complement ``d - b a^{-1} c`` vanishes; with ``a = 0``
        both ``b`` and ``c`` must be nonzero.
        """
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d), 1e-300)
        if abs(self.a) > tol * scale:
            return abs(self.d - self.b * qinv(self.a) * self.c) > tol * scale
        return abs(self.b) > tol * scale and abs(self.c) > tol * scale

    def in_sp11(self, tol: float = MEMBERSHIP_TOL) -> bool:
        """``conj(A)^t H A = H`` with ``H = diag(1, -1)``."""
        H = QuatMatrix2(ONE, ZERO, ZERO, -ONE)
        return (self.conj_transpose() @ H @ self).max_distance(H) <= tol


def translation_matrix(q0) -> QuatMatrix2:
    """``C(q0) = [[1, -q0bar], [-q0, 1]]`` scaled into Sp(1,1); ``id.C(q0) = M_{q0}``."""
    q0 = as_quaternion(q0)
    t = 1.0 / math.sqrt(1.0 - q0.norm2())
    return QuatMatrix2(ONE, -q0.conj(), -q0, ONE).scale(t)


def rotation_matrix(v, w=ONE) -> QuatMatrix2:
    return QuatMatrix2(as_quaternion(v), ZERO, ZERO, as_quaternion(w))


def right_action(f, A: QuatMatrix2) -> RegularQuotient:
    """``f.A = (f c + d)^{-*} * (f a + b)`` as a left quotient."""
    if not A.is_invertible():
        raise SingularMatrix("matrix is not invertible")
    F = as_regular(f)
    if F.side == "left":
        # (X^{-*} Y).A = (Y c + X d)^{-*} * (Y a + X b): X cancels without symmetrizing
        n, d = F.numer, F.denom
    else:
        # the common central denominator cancels between the two factors
        n, d = F.central_numer, F.central_denom
    denom = n * A.c + d * A.d
    numer = n * A.a + d * A.b
    if denom.is_zero(1e-14):
        raise DegenerateDenominator("f c + d vanishes identically")
    return RegularQuotient(denom, numer, "left")


def left_action(A: QuatMatrix2, f) -> RegularQuotient:
    """``A^t.f = (a f + b) * (c f + d)^{-*}`` as a right quotient."""
    if not A.is_invertible():
        raise SingularMatrix("matrix is not invertible")
    F = as_regular(f)
    if F.side == "right":
        # A^t.(Y X^{-*}) = (a Y + b X) * (c Y + d X)^{-*}
        n, d = F.numer, F.denom
    else:
        n, d = F.central_numer, F.central_denom
    denom = A.c * n + A.d * d
    numer = A.a * n + A.b * d
    if denom.is_zero(1e-14):
        raise DegenerateDenominator("c f + d vanishes identically")
    return RegularQuotient(denom, numer, "right")


def mobius_fixing(q0, v) -> tuple:
    """Parameters ``(a, u)`` of the regular Möbius map fixing ``q0`` labelled by ``v``.

    The map is ``(1 - q abar)^{-*} * (q - a) u``; ``v = 1`` gives the identity.
    """
    q0, v = as_quaternion(q0), as_quaternion(v)
    q0b = q0.conj()
    r2 = q0.norm2()
    u = qinv(ONE - q0 * v * q0b) * (v - r2)
    a = q0 * (ONE - v.conj()) * qinv(ONE - q0 * v.conj() * q0b)
    return a, u


class _IdentitySentinel:
    def __repr__(self):
        return "IDENTITY"


#: returned by :func:`fixed_points` when the map is the identity
IDENTITY = _IdentitySentinel()


def fixed_point_polynomial(a, u) -> StarSeries:
    """``P(q) = (q - a) u - (1 - q abar) * q = q^2 abar + q (u - 1) - a u``."""
    a, u = as_quaternion(a), as_quaternion(u)
    return StarSeries((-(a * u), u - ONE, a.conj()))


def fixed_points(M, closed_ball_tol: float = 1e-9):
    """Fixed points of ``(1 - q abar)^{-*} * (q - a) u`` in the closed unit ball.

    ``M`` is a :class:`RegularMobius` ``(q0, u)`` (so ``a = q0``) or a pair
    ``(a, u)``.  Since ``f(q) - q = (1 - q abar)^{-*} * P(q)``, the fixed
    points are the images of the zeros ``p`` of ``P`` under
    ``T_{h^c}(p) = h(p)^{-1} p h(p)`` with ``h(q) = 1 - q abar``.  Returns
    :data:`IDENTITY` when ``P`` vanishes identically; whole-sphere fixed sets
    are reported as ``("sphere", x, y)`` tuples.
    """
    from .zeros import locate_zeros

    if isinstance(M, RegularMobius):
        a, u = M.q0, M.u
    else:
        a, u = (as_quaternion(x) for x in M)
    P = fixed_point_polynomial(a, u)
    if P.max_coeff() < IDENTITY_TOL:
        return IDENTITY
    ab = a.conj()
    out = []
    for z in locate_zeros(P.trimmed(1e-300)):
        if math.hypot(z.x0, z.y0) > 1.0 + closed_ball_tol:
            continue
        if z.kind == "sphere":
            out.append(("sphere", z.x0, z.y0))
            continue
        p = z.point
        h = ONE - p * ab
        out.append(qinv(h) * p * h)
    return out


def find_preimage(f, w, start=ZERO, tol: float = 1e-12, max_iter: int = 60) -> Quaternion:
    """Damped Newton search in R^4 for ``q`` in the ball with ``f(q) = w``."""
    import numpy as np

    from .calculus import real_differential

    w = as_quaternion(w)
    q = as_quaternion(start)
    res = abs(f(q) - w)
    for _ in range(max_iter):
        if res < tol:
            break
        J = real_differential(f, q, h=1e-7)
        step = Quaternion(*np.linalg.solve(J, -np.array(f(q) - w)).tolist())
        t = 1.0
        while t > 1e-6:
            cand = q + step * t
            if abs(cand) < 1.0:
                cand_res = abs(f(cand) - w)
                if cand_res < res:
                    q, res = cand, cand_res
                    break
            t *= 0.5
        else:
            break
    return q
