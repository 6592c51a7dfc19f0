"""Regular quotients ``f^{-*} * g`` and ``g * h^{-*}``.

Every quotient is carried together with a *central form* ``N * D^{-*}`` in
which ``D`` has real coefficients.  Real-coefficient series commute with
everything under ``*`` and ``D^{-*}(q) = D(q)^{-1}``, so the value of the
quotient is simply ``D(q)^{-1} N(q)``; for a left quotient ``D = f^s`` and
``N = f^c * g``, which is the symmetrization formula.  The field operations
below are all done on central forms, which keeps them closed and exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NearPole, ZeroFunction
from .quaternion import ONE, ZERO_TOL, Quaternion, as_quaternion, qinv
from .series import (
    StarSeries,
    coeff_distance,
    conjugate,
    cullen_derivative,
    divide_linear,
    eval_series,
    star_mul,
    symmetrize,
)

POLE_RTOL = 1e-10
ROOT_MERGE_TOL = 1e-6
CLUSTER_LOOSE_TOL = 1e-3
CLUSTER_VANISH_RTOL = 1e-13


def _real_poly_mul(a: StarSeries, b: StarSeries) -> StarSeries:
    """Product of two real-coefficient series, kept exactly real."""
    ra = np.array([c[0] for c in a.coeffs])
    rb = np.array([c[0] for c in b.coeffs])
    return StarSeries.real(np.convolve(ra, rb).tolist())


def _cluster(roots: list, tol: float) -> list:
    used = [False] * len(roots)
    clusters = []
    for i, r in enumerate(roots):
        if used[i]:
            continue
        cluster = [r]
        used[i] = True
        for j in range(i + 1, len(roots)):
            if not used[j] and abs(roots[j] - r) < tol * (1.0 + abs(r)):
                cluster.append(roots[j])
                used[j] = True
        clusters.append(cluster)
    return clusters


def sphere_roots(s: StarSeries, tol: float = 1e-9) -> list:
    """Zero spheres ``(x, y)`` of a real-coefficient series, ``y >= 0``.

    The series is restricted to the complex slice ``L_i`` where it is an
    ordinary real polynomial; its complex roots come in conjugate pairs and
    each pair is one sphere.  A root of multiplicity ``m`` comes back from
    the eigenvalue solver as ``m`` roots spread by about ``eps^(1/m)``; their
    mean is accurate to about ``eps``, so a loose cluster is kept when the
    polynomial vanishes at its mean and otherwise split with a tight
    tolerance.  Multiplicities are returned as repeated entries.
    """
    coeffs = [c[0] for c in s.coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    roots = [complex(r) for r in np.roots(coeffs[::-1])]
    poly = np.polynomial.Polynomial(coeffs)
    clusters = []
    for cluster in _cluster(roots, CLUSTER_LOOSE_TOL):
        mean = sum(cluster) / len(cluster)
        mag = sum(abs(c) * abs(mean) ** k for k, c in enumerate(coeffs))
        if len(cluster) == 1 or abs(poly(mean)) <= CLUSTER_VANISH_RTOL * mag:
            clusters.append(cluster)
        else:
            clusters.extend(_cluster(cluster, ROOT_MERGE_TOL))
    spheres = []
    for cluster in clusters:
        mean = sum(cluster) / len(cluster)
        if abs(mean.imag) <= tol:
            spheres.extend([(mean.real, 0.0)] * len(cluster))
        elif mean.imag > 0:
            # the conjugate cluster describes the same spheres
            spheres.extend([(mean.real, mean.imag)] * len(cluster))
    return sorted(spheres)


def distance_to_sphere(q: Quaternion, sphere: tuple) -> float:
    x, y = sphere
    return math.hypot(q[0] - x, q.imag_norm() - y)


@dataclass(frozen=True)
class RegularQuotient:
    """``denom^{-*} * numer`` (side ``"left"``) or ``numer * denom^{-*}`` (``"right"``)."""

    denom: StarSeries
    numer: StarSeries
    side: str = "left"
    denom_conj: StarSeries = field(init=False, repr=False, compare=False)
    central_numer: StarSeries = field(init=False, repr=False, compare=False)
    central_denom: StarSeries = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', not {self.side!r}")
        if self.denom.is_zero():
            raise ZeroFunction("denominator is identically zero")
        f, g = self.denom, self.numer
        fc = conjugate(f)
        object.__setattr__(self, "denom_conj", fc)
        if f.is_real():
            # D^{-*} is central already; skip the squaring
            n, d = g, f
        elif self.side == "left":
            n, d = star_mul(fc, g), symmetrize(f)
        else:
            n, d = star_mul(g, fc), symmetrize(f)
        object.__setattr__(self, "central_numer", n)
        object.__setattr__(self, "central_denom", d)

    # -- construction -----------------------------------------------------
    @classmethod
    def central(cls, numer: StarSeries, denom: StarSeries) -> "RegularQuotient":
        """Quotient ``numer * denom^{-*}`` with a real-coefficient ``denom``."""
        return cls(denom, numer, "left")

    @classmethod
    def from_series(cls, f: StarSeries) -> "RegularQuotient":
        return cls(StarSeries((ONE,)), f, "left")

    @classmethod
    def from_json(cls, obj: dict) -> "RegularQuotient":
        return cls(StarSeries.from_json(obj["denom"]), StarSeries.from_json(obj["numer"]),
                   obj.get("side", "left"))

    def to_json(self) -> dict:
        return {"side": self.side, "denom": self.denom.to_json(), "numer": self.numer.to_json()}

    @property
    def denom_sym(self) -> StarSeries:
        return self.central_denom

    # -- evaluation -------------------------------------------------------
    def __call__(self, q) -> Quaternion:
        return eval_quotient(self, q)

    def excluded_spheres(self) -> list:
        return sorted(set(sphere_roots(self.central_denom)))

    def nearest_excluded(self, q: Quaternion):
        spheres = self.excluded_spheres()
        if not spheres:
            return None
        return min(spheres, key=lambda s: distance_to_sphere(q, s))

    # -- field operations (results in central form) ----------------------
    def _parts(self):
        return self.central_numer, self.central_denom

    def __add__(self, other):
        other = as_regular(other)
        if other is None:
            return NotImplemented
        n1, d1 = self._parts()
        n2, d2 = other._parts()
        if _same(d1, d2):
            return RegularQuotient.central(n1 + n2, d1)
        return RegularQuotient.central(n1 * d2 + n2 * d1, _real_poly_mul(d1, d2))

    __radd__ = __add__

    def __neg__(self):
        n, d = self._parts()
        return RegularQuotient.central(-n, d)

    def __sub__(self, other):
        other = as_regular(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = as_regular(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        """Regular product; constants multiply the numerator on the right."""
        if isinstance(other, (Quaternion, int, float)):
            n, d = self._parts()
            return RegularQuotient.central(n * as_quaternion(other), d)
        other = as_regular(other)
        if other is None:
            return NotImplemented
        n1, d1 = self._parts()
        n2, d2 = other._parts()
        return RegularQuotient.central(star_mul(n1, n2), _real_poly_mul(d1, d2))

    def __rmul__(self, other):
        if isinstance(other, (Quaternion, int, float)):
            n, d = self._parts()
            return RegularQuotient.central(as_quaternion(other) * n, d)
        other = as_regular(other)
        if other is None:
            return NotImplemented
        return other * self

    def inverse(self) -> "RegularQuotient":
        """``F^{-*}``: for ``F = N D^{-*}`` this is ``D N^c (N^s)^{-*}``."""
        n, d = self._parts()
        if n.is_zero():
            raise ZeroFunction("cannot invert the zero function")
        return RegularQuotient.central(star_mul(d, conjugate(n)), symmetrize(n))

    def right_div(self, other) -> "RegularQuotient":
        """``self * other^{-*}``, cancelling a shared central denominator."""
        other = as_regular(other)
        n1, d1 = self._parts()
        n2, d2 = other._parts()
        if n2.is_zero():
            raise ZeroFunction("division by the zero function")
        if _same(d1, d2):
            return RegularQuotient.central(star_mul(n1, conjugate(n2)), symmetrize(n2))
        return self * other.inverse()

    def conjugate(self) -> "RegularQuotient":
        n, d = self._parts()
        return RegularQuotient.central(conjugate(n), d)

    def symmetrize(self) -> "RegularQuotient":
        n, d = self._parts()
        return RegularQuotient.central(symmetrize(n), _real_poly_mul(d, d))

    def cullen_derivative(self) -> "RegularQuotient":
        n, d = self._parts()
        dn, dd = cullen_derivative(n), cullen_derivative(d)
        return RegularQuotient.central(star_mul(dn, d) - star_mul(n, dd),
                                       _real_poly_mul(d, d))

    def cullen_derivatives(self, order: int) -> list:
        """``[F, d_c F, ..., d_c^order F]`` with denominators ``D^(k+1)``.

        Uses ``d(N_k / D^(k+1)) = (N_k' D - (k+1) N_k D') / D^(k+2)`` so the
        denominator degree grows linearly rather than doubling.
        """
        n, d = self._parts()
        dd = cullen_derivative(d)
        out = [RegularQuotient.central(n, d)]
        nk, dk = n, d
        for k in range(order):
            nk = star_mul(cullen_derivative(nk), d) - star_mul(nk, dd) * float(k + 1)
            dk = _real_poly_mul(dk, d)
            out.append(RegularQuotient.central(nk, dk))
        return out

    def diff_quotient(self, q0) -> "RegularQuotient":
        """``R_{q0} F = (q - q0)^{-*} * (F - F(q0))``."""
        q0 = as_quaternion(q0)
        n, d = self._parts()
        c = eval_quotient(self, q0)
        # F - c = (N - D c) D^{-*}, and N - D c vanishes at q0
        return RegularQuotient.central(divide_linear(n - d * c, q0), d)

    def is_polynomial(self) -> bool:
        d = self.central_denom
        return d.degree == 0


def _same(a: StarSeries, b: StarSeries) -> bool:
    return a is b or (len(a.coeffs) == len(b.coeffs) and coeff_distance(a, b) == 0.0)


def as_regular(value):
    """Lift series and constants into the quotient field (``None`` if impossible)."""
    if isinstance(value, RegularQuotient):
        return value
    if isinstance(value, StarSeries):
        return RegularQuotient.from_series(value)
    if isinstance(value, (Quaternion, int, float)):
        return RegularQuotient.from_series(StarSeries.constant(value))
    return None


def central_value(numer: StarSeries, denom: StarSeries, q: Quaternion) -> Quaternion:
    d = eval_series(denom, q)
    scale = denom.magnitude(abs(q))
    if abs(d) < max(POLE_RTOL * scale, ZERO_TOL):
        raise NearPole(f"denominator vanishes near {q}")
    return qinv(d) * eval_series(numer, q)


def eval_quotient(Q: RegularQuotient, q) -> Quaternion:
    """Value by the symmetrization formula ``f^s(q)^{-1} (f^c * g)(q)``."""
    q = as_quaternion(q)
    try:
        return central_value(Q.central_numer, Q.central_denom, q)
    except NearPole as exc:
        raise NearPole(str(exc), Q.nearest_excluded(q)) from None


def T_transform(f: StarSeries, q) -> Quaternion:
    """``T_f(q) = f^c(q)^{-1} q f^c(q)``; keeps ``q`` on its sphere."""
    q = as_quaternion(q)
    fc = eval_series(conjugate(f), q)
    if abs(fc) < max(POLE_RTOL * f.magnitude(abs(q)), ZERO_TOL):
        raise NearPole(f"f^c vanishes near {q}")
    return qinv(fc) * q * fc


def eval_via_T(Q: RegularQuotient, q) -> Quaternion:
    """Left quotient value ``f(T_f(q))^{-1} g(T_f(q))``; independent of the central form."""
    if Q.side != "left":
        raise ValueError("the T-route only exists for left quotients")
    q = as_quaternion(q)
    fs_q = eval_series(symmetrize(Q.denom), q)
    if abs(fs_q) < max(POLE_RTOL * symmetrize(Q.denom).magnitude(abs(q)), ZERO_TOL):
        raise NearPole(f"denominator vanishes near {q}", Q.nearest_excluded(q))
    t = T_transform(Q.denom, q)
    return qinv(eval_series(Q.denom, t)) * eval_series(Q.numer, t)


def reciprocal(f: StarSeries) -> RegularQuotient:
    if f.is_zero():
        raise ZeroFunction("f is identically zero")
    return RegularQuotient(f, StarSeries((ONE,)), "left")


def quotient_symmetrize(Q: RegularQuotient) -> RegularQuotient:
    """``(f^{-*} * g)^s = (f^s)^{-*} g^s``, a quotient of real series."""
    if Q.side != "left":
        raise ValueError("quotient_symmetrize expects a left quotient")
    return RegularQuotient(symmetrize(Q.denom), symmetrize(Q.numer), "left")
