"""Schwarz-Pick inequalities for regular self-maps of the unit ball.

For a self-map ``f`` and a base point ``q0`` with ``c = f(q0)`` everything is
expressed through the transformed map

    f~ = (f - c) * (1 - cbar * f)^{-*},

which is again a self-map and vanishes at ``q0``.  Writing ``f = N D^{-*}``
with ``D`` real, ``f~ = (N - D c) * (D - cbar N)^{-*}`` and the common factor
``D`` never has to be inverted.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .calculus import (
    FD_TOL,
    cullen_derivatives_at,
    real_differential,
    spherical_expansion,
    spherical_pair,
)
from .errors import (
    DegenerateSymmetrization,
    InconsistentConditions,
    NearPole,
    PreconditionFailed,
    RealPoint,
)
from .mobius import RegularMobius, moebius_q0
from .quaternion import (
    ONE,
    ZERO_TOL,
    Quaternion,
    as_quaternion,
    format_quaternion,
    qinv,
    random_in_ball,
    random_unit,
    unit_from_cube,
)
from .rational import POLE_RTOL, RegularQuotient, _real_poly_mul, as_regular, reciprocal
from .series import StarSeries, conjugate, divide_linear, sphere_polynomial, star_mul, symmetrize
from .zeros import locate_zeros

PRECONDITION_TOL = 1e-9
DEGENERATE_SYM_TOL = 1e-12
RIGIDITY_TOL = 1e-9


@dataclass(frozen=True)
class Tolerances:
    eq_tol: float = 1e-9
    strict_margin: float = 1e-6
    violation_tol: float = 1e-9

    def scaled(self, factor: float) -> "Tolerances":
        return Tolerances(self.eq_tol * factor, self.strict_margin * factor,
                          self.violation_tol * factor)

    @classmethod
    def from_env(cls) -> "Tolerances":
        return cls().scaled(float(os.environ.get("SRK_TOLERANCE_SCALE", "1")))


DEFAULT_TOLERANCES = Tolerances()


@dataclass
class SPRecord:
    name: str
    lhs: float
    rhs: float
    q0: Quaternion
    q: Optional[Quaternion] = None
    classification: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return self.rhs - self.lhs

    def classify(self, tol: Tolerances = DEFAULT_TOLERANCES) -> "SPRecord":
        r = self.residual
        if abs(r) <= tol.eq_tol:
            self.classification = "equality"
        elif r > tol.strict_margin:
            self.classification = "strict"
        elif r < -tol.violation_tol:
            self.classification = "violation"
        else:
            self.classification = "indeterminate"
        return self

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "q0": format_quaternion(self.q0),
            "q": None if self.q is None else format_quaternion(self.q),
            "classification": self.classification,
        }
        out.update(self.extra)
        return out


# -- self-maps ----------------------------------------------------------------

@dataclass(frozen=True)
class SelfMap:
    """A regular self-map of the ball with the reason it is one."""

    func: object  # StarSeries | RegularQuotient
    kind: str
    certificate: str
    is_mobius: bool = False
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, q) -> Quaternion:
        return self.func(as_quaternion(q))

    def as_quotient(self) -> RegularQuotient:
        return as_regular(self.func)


def _unwrap(f):
    if isinstance(f, SelfMap):
        return f.func
    if isinstance(f, RegularMobius):
        return f.as_quotient()
    return f


_KIND = re.compile(r"^(mobius|blaschke-product|bounded-series)(?:\((\d+)\))?$")


def parse_kind(kind: str) -> tuple:
    m = _KIND.match(kind.strip())
    if not m:
        raise ValueError(f"unknown self-map kind {kind!r}")
    return m.group(1), (int(m.group(2)) if m.group(2) else None)


def sample_self_map(kind: str, seed=0, radius: float = 0.9) -> SelfMap:
    """Deterministic pseudo-random self-map.

    ``kind`` is ``"mobius"``, ``"blaschke-product(k)"`` or
    ``"bounded-series(deg)"``.  ``seed`` may be an int or a numpy Generator.
    Möbius parameters are drawn with ``|a| < radius``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    name, arg = parse_kind(kind)
    if name == "mobius":
        a, u = random_in_ball(rng, radius), random_unit(rng)
        return SelfMap(RegularMobius(a, u).as_quotient(), "mobius", "mobius", True,
                       {"a": str(a), "u": str(u)})
    if name == "blaschke-product":
        k = arg or 2
        F = None
        params = []
        for _ in range(k):
            a, u = random_in_ball(rng, radius), random_unit(rng)
            params.append({"a": str(a), "u": str(u)})
            M = RegularMobius(a, u).as_quotient()
            F = M if F is None else F * M
        return SelfMap(F, f"blaschke-product({k})", "product-of-mobius", k == 1,
                       {"factors": params})
    deg = arg or 4
    rho = float(rng.uniform(0.5, 0.95))
    raw = rng.normal(size=(deg + 1, 4))
    raw /= np.linalg.norm(raw, axis=1).sum()
    coeffs = [Quaternion(*(rho * row).tolist()) for row in raw]
    return SelfMap(StarSeries(tuple(coeffs)), f"bounded-series({deg})", "coefficient-sum", False,
                   {"coefficient_sum": rho})


def is_self_map_sampled(f, points) -> bool:
    return all(abs(f(q)) < 1.0 for q in points)


# -- the transformed map -------------------------------------------------------

def pick_transform(f, a) -> RegularQuotient:
    """``(f - a) * (1 - abar * f)^{-*}`` as a right quotient."""
    F = as_regular(_unwrap(f))
    a = as_quaternion(a)
    N, D = F.central_numer, F.central_denom
    return RegularQuotient(D - a.conj() * N, N - D * a, "right")


@dataclass(frozen=True)
class FactoredQuotient:
    """``numer * (prod factor_k^{p_k})^{-1}`` with real-coefficient factors.

    Each factor is checked for a pole separately; a single expanded
    denominator would lose the scale of its small but nonzero value.
    """

    numer: StarSeries
    factors: tuple  # ((real StarSeries, power), ...)

    def __call__(self, q) -> Quaternion:
        q = as_quaternion(q)
        den = ONE
        for factor, power in self.factors:
            value = factor(q)
            if abs(value) < max(POLE_RTOL * factor.magnitude(abs(q)), ZERO_TOL):
                raise NearPole(f"denominator factor vanishes near {q}")
            for _ in range(power):
                den = den * value
        return qinv(den) * self.numer(q)


def _times_pick_reciprocal(M: StarSeries, D: StarSeries, power: int,
                           H: StarSeries) -> FactoredQuotient:
    """``(M D^{-power}) * H^{-*}``: numerator ``M H^c``, denominator ``H^s D^power``."""
    if H.is_real():
        return FactoredQuotient(M, ((H, 1), (D, power)))
    return FactoredQuotient(star_mul(M, conjugate(H)), ((symmetrize(H), 1), (D, power)))


class PickContext:
    """Precomputed pieces of all Schwarz-Pick inequalities at a base point ``q0``."""

    def __init__(self, f, q0, tol: Tolerances = DEFAULT_TOLERANCES):
        self.f = _unwrap(f)
        self.F = as_regular(self.f)
        self.q0 = as_quaternion(q0)
        self.tol = tol
        N, D = self.F.central_numer, self.F.central_denom
        self.N, self.D = N, D
        self.c = self.F(self.q0)
        self.H = D - self.c.conj() * N  # (1 - cbar f) D
        self.tilde = RegularQuotient(self.H, N - D * self.c, "right")
        self.R_numer = divide_linear(N - D * self.c, self.q0)
        self.R_tilde = RegularQuotient(self.H, self.R_numer, "right")
        self.mobius = moebius_q0(self.q0)
        self.mobius_recip = reciprocal(StarSeries((ONE, -self.q0.conj())))
        self._one = StarSeries((ONE,))

    def _record(self, name, lhs, rhs, q=None, **extra) -> SPRecord:
        return SPRecord(name, float(lhs), float(rhs), self.q0, q, extra=extra).classify(self.tol)

    def main(self, q) -> SPRecord:
        q = as_quaternion(q)
        return self._record("main", abs(self.tilde(q)), abs(self.mobius(q)), q)

    def R(self, q) -> SPRecord:
        q = as_quaternion(q)
        return self._record("R", abs(self.R_tilde(q)), abs(self.mobius_recip(q)), q)

    def cullen_quotient(self) -> FactoredQuotient:
        """``d_c f * (1 - cbar f)^{-*}`` as a quotient."""
        N, D = self.N, self.D
        dN = N.cullen_derivative()
        dD = D.cullen_derivative()
        M = star_mul(dN, D) - star_mul(N, dD)
        # d_c f = M / D^2 and (1 - cbar f)^{-*} = D H^{-*}
        return _times_pick_reciprocal(M, D, 1, self.H)

    def cullen(self) -> SPRecord:
        # (g * h)(q0) depends only on g(q0), and R_{q0} f(q0) = d_c f(q0)
        lhs = abs(self.R_tilde(self.q0))
        rhs = 1.0 / (1.0 - self.q0.norm2())
        extra = {"derivative_route": abs(self.cullen_quotient()(self.q0))}
        if isinstance(self.f, StarSeries):
            extra["tilde_lhs"], extra["tilde_lhs_pointwise"] = tilde_q0_cullen_lhs(self.f, self.q0)
        return self._record("cullen", lhs, rhs, **extra)

    def spherical(self) -> SPRecord:
        if self.q0.is_real():
            raise RealPoint("spherical inequality needs a non-real base point")
        ds = spherical_pair(self.F, self.q0).derivative
        fs = self.F.symmetrize()(self.q0)
        den = ONE - fs
        if abs(den) < DEGENERATE_SYM_TOL:
            raise DegenerateSymmetrization("f^s(q0) = 1")
        lhs = abs(ds) / abs(den)
        q0b = self.q0.conj()
        rhs = 1.0 / abs(ONE - q0b * q0b)
        # d_s f~(q0) = (1 - conj(f^s(q0)))^{-1} d_s f(q0)
        predicted = qinv(ONE - fs.conj()) * ds
        actual = spherical_pair(self.tilde, self.q0).derivative
        return self._record("spherical", lhs, rhs, cross_check=abs(predicted - actual))

    def all_records(self, q) -> list:
        recs = [self.main(q), self.R(q), self.cullen()]
        if not self.q0.is_real():
            recs.append(self.spherical())
        return recs


def tilde_q0_cullen_lhs(f: StarSeries, q0: Quaternion) -> tuple:
    """Pointwise forms of ``|d_c f * (1 - cbar * f)^{-*}|`` at ``q0``.

    With ``q~0 = T_g(d_c f(q0)^{-1} q0 d_c f(q0))`` and ``g = 1 - cbar * f``
    the value is ``|d_c f(q0)| / |g(q~0)|``.  A constant on the left of a
    *-product conjugates the point, ``(cbar * f)(t) = cbar f(cbar^{-1} t cbar)``,
    so the pointwise ``1 - cbar f(q~0)`` only agrees when ``cbar`` commutes
    with the coefficients.  Returns ``(exact, pointwise)``.
    """
    c = f(q0)
    cb = c.conj()
    g = StarSeries((ONE,)) - cb * f
    dc = f.cullen_derivative()(q0)
    if abs(dc) == 0.0:
        return 0.0, 0.0
    p = qinv(dc) * q0 * dc
    gc_p = conjugate(g)(p)
    t = qinv(gc_p) * p * gc_p
    inner = t if abs(cb) == 0.0 else qinv(cb) * t * cb
    return abs(dc) / abs(ONE - cb * f(inner)), abs(dc) / abs(ONE - cb * f(t))


def sp_main(f, q0, q, tol: Tolerances = DEFAULT_TOLERANCES) -> SPRecord:
    return PickContext(f, q0, tol).main(q)


def sp_R(f, q0, q, tol: Tolerances = DEFAULT_TOLERANCES) -> SPRecord:
    return PickContext(f, q0, tol).R(q)


def sp_cullen(f, q0, tol: Tolerances = DEFAULT_TOLERANCES) -> SPRecord:
    return PickContext(f, q0, tol).cullen()


def sp_spherical(f, q0, tol: Tolerances = DEFAULT_TOLERANCES) -> SPRecord:
    return PickContext(f, q0, tol).spherical()


@dataclass
class SPReport:
    records: list
    seed: Optional[int] = None

    @property
    def min_residual(self) -> float:
        return min(r.residual for r in self.records)

    def count(self, classification: str) -> int:
        return sum(1 for r in self.records if r.classification == classification)

    def summary(self) -> dict:
        return {
            "min_residual": self.min_residual if self.records else None,
            "equality_count": self.count("equality"),
            "strict_count": self.count("strict"),
            "indeterminate_count": self.count("indeterminate"),
            "violation_count": self.count("violation"),
        }


def sp_report(f, q0, points, tol: Tolerances = DEFAULT_TOLERANCES, seed=None) -> SPReport:
    """All four inequalities at ``q0`` and every point of ``points``."""
    ctx = PickContext(f, q0, tol)
    records = []
    for q in points:
        records += [ctx.main(q), ctx.R(q)]
    records.append(ctx.cullen())
    if not ctx.q0.is_real():
        records.append(ctx.spherical())
    bad = [r for r in records if r.residual < -tol.violation_tol]
    if bad:
        raise AssertionError(f"Schwarz-Pick violated: {bad[0].to_json()}")
    return SPReport(records, seed)


# -- higher order -------------------------------------------------------------

def mobius_power(q0, n: int) -> RegularQuotient:
    """``M_{q0}^{*n}``; numerator and central denominator are raised separately."""
    M = moebius_q0(q0)
    N, D = M.central_numer, M.central_denom
    Nn, Dn = StarSeries((ONE,)), StarSeries((ONE,))
    for _ in range(n):
        Nn, Dn = star_mul(Nn, N), _real_poly_mul(Dn, D)
    return RegularQuotient.central(Nn, Dn)


def sp_higher_cullen(f, q0, n: int, q=None, tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    """Value bound ``|f~(q)| <= |M_{q0}^{*n}(q)|`` and ``n``-th Cullen derivative bound.

    Requires ``d_c^m f(q0) = 0`` for ``1 <= m <= n - 1``, relative to the
    bound ``m!/(1 - |q0|^2)^m`` on that derivative.
    """
    ctx = PickContext(f, q0, tol)
    # d_c^m f(q0) = m! (R_{q0}^m f)(q0); iterating R keeps the denominator D
    G = ctx.F
    for m in range(1, n + 1):
        G = G.diff_quotient(ctx.q0)
        if m == n:
            break
        v = G(ctx.q0) * float(math.factorial(m))
        # m!/(1 - |q0|^2)^m bounds the m-th derivative of any self-map
        scale = max(1.0, math.factorial(m) / (1.0 - ctx.q0.norm2()) ** m)
        if abs(v) > PRECONDITION_TOL * scale:
            raise PreconditionFailed(f"d_c^{m} f(q0) = {abs(v):.3e} is not zero")
    lhs = math.factorial(n) * abs(RegularQuotient(ctx.H, G.central_numer, "right")(ctx.q0))
    # d_c^n f = N_n / D^(n+1); times (1 - cbar f)^{-*} = D H^{-*}
    Nn = ctx.F.cullen_derivatives(n)[n].central_numer
    derivative_route = abs(_times_pick_reciprocal(Nn, ctx.D, n, ctx.H)(ctx.q0))
    rhs = math.factorial(n) / (1.0 - ctx.q0.norm2()) ** n
    records = [ctx._record(f"higher-cullen-{n}-derivative", lhs, rhs,
                           derivative_route=derivative_route)]
    if q is not None:
        q = as_quaternion(q)
        records.insert(0, ctx._record(f"higher-cullen-{n}", abs(ctx.tilde(q)),
                                      abs(mobius_power(ctx.q0, n)(q)), q))
    return records


def sp_higher_spherical(f, q0, n: int, q, odd: bool = False,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    """Higher-order spherical bounds; needs ``A_m = 0`` for ``1 <= m <= 2n - 1`` (and ``A_2n`` if ``odd``)."""
    ctx = PickContext(f, q0, tol)
    if ctx.q0.is_real():
        raise RealPoint("spherical expansion needs a non-real centre")
    q = as_quaternion(q)
    exp = spherical_expansion(ctx.F, ctx.q0, n)
    last = 2 * n if odd else 2 * n - 1
    for m in range(1, last + 1):
        if abs(exp.coeffs[m]) > PRECONDITION_TOL:
            raise PreconditionFailed(f"A_{m} = {abs(exp.coeffs[m]):.3e} is not zero")
    x0, y0 = exp.x0, exp.y0
    ms_den = StarSeries.real((1.0, -2.0 * x0, x0 * x0 + y0 * y0))  # (1 - q x0)^2 + (q y0)^2
    ms_num = sphere_polynomial(x0, y0)
    den_q = ms_den(q)
    ms_abs = abs(qinv(den_q) * ms_num(q))
    # (R_{q0bar} R_{q0})^n keeps the central denominator D
    G = ctx.F
    for _ in range(n):
        G = G.diff_quotient(ctx.q0).diff_quotient(ctx.q0.conj())
    lhs_main = abs(ctx.tilde(q))
    records = [
        ctx._record(f"higher-spherical-{n}", lhs_main, ms_abs ** n, q),
        ctx._record(f"higher-spherical-R-{n}",
                    abs(RegularQuotient(ctx.H, G.central_numer, "right")(q)),
                    abs(den_q) ** (-n), q),
    ]
    if odd:
        G1 = G.diff_quotient(ctx.q0)
        records += [
            ctx._record(f"higher-spherical-odd-{n}", lhs_main,
                        ms_abs ** n * abs(ctx.mobius(q)), q),
            ctx._record(f"higher-spherical-odd-R-{n}",
                        abs(RegularQuotient(ctx.H, G1.central_numer, "right")(q)),
                        abs(den_q) ** (-n) * abs(ctx.mobius_recip(q)), q),
        ]
    return records


# -- rigidity -----------------------------------------------------------------

@dataclass
class RigidityReport:
    identity: bool
    conditions: dict
    other_fixed_points: list
    fixed_point_search: str

    @property
    def classification(self) -> str:
        return "identity" if self.identity else "non-identity"

    def to_json(self) -> dict:
        return {
            "classification": self.classification,
            "conditions": self.conditions,
            "other_fixed_points": [str(p) if isinstance(p, Quaternion) else p
                                   for p in self.other_fixed_points],
            "fixed_point_search": self.fixed_point_search,
        }


def default_probes(q0: Quaternion, count: int = 6, seed: int = 12345) -> list:
    rng = np.random.default_rng(seed)
    return [q0] + [random_in_ball(rng, 0.9) for _ in range(count)]


def check_rigidity(f, q0, probes=None, tol: float = RIGIDITY_TOL) -> RigidityReport:
    """Evaluate the equivalent rigidity conditions at a fixed point ``q0``.

    Conditions: (1) identity, (2) real differential is the identity,
    (3) ``d_c f(q0) = 1``, (4) ``d_s f(q0) = 1`` (non-real ``q0`` only),
    (5) ``R_{q0} f(q) = (1 - q0bar q)^{-*} * (1 - q0bar f(q))`` at a probe point.
    Raises :class:`InconsistentConditions` if they disagree, or if a
    non-identity map has a second fixed point.
    """
    F = as_regular(_unwrap(f))
    q0 = as_quaternion(q0)
    if abs(F(q0) - q0) >= 1e-10:
        raise PreconditionFailed(f"q0 is not a fixed point: |f(q0) - q0| = {abs(F(q0) - q0):.3e}")
    N, D = F.central_numer, F.central_denom
    # f - id = (N - q D) D^{-*}; D has no zeros in the ball
    fixed_poly = N - D.shift(1)
    scale = 1.0 + max(N.max_coeff(), D.max_coeff())
    conditions = {"identity": fixed_poly.max_coeff() <= 1e-12 * scale}
    J = real_differential(F, q0)
    conditions["differential"] = bool(np.max(np.abs(J - np.eye(4))) < FD_TOL)
    conditions["cullen"] = abs(F.cullen_derivative()(q0) - ONE) < tol
    if not q0.is_real():
        conditions["spherical"] = abs(spherical_pair(F, q0).derivative - ONE) < tol
    R = F.diff_quotient(q0)
    Q = reciprocal(StarSeries((ONE, -q0.conj()))) * (ONE - q0.conj() * F)
    probes = default_probes(q0) if probes is None else [as_quaternion(p) for p in probes]
    conditions["extremal_quotient"] = any(abs(R(p) - Q(p)) < tol for p in probes)

    others = []
    if not conditions["identity"]:
        for z in locate_zeros(fixed_poly.trimmed(1e-300), search_radius=1.0):
            if math.hypot(z.x0, z.y0) >= 1.0:
                continue
            if z.kind == "sphere":
                others.append({"sphere": [z.x0, z.y0]})
            elif abs(z.point - q0) > 1e-7:
                others.append(z.point)
    values = set(conditions.values())
    if len(values) != 1:
        raise InconsistentConditions(f"rigidity conditions disagree: {conditions}", conditions)
    if not conditions["identity"] and others:
        raise InconsistentConditions(f"non-identity map with extra fixed points {others}",
                                     conditions)
    return RigidityReport(conditions["identity"], conditions, others, "central-polynomial")


# -- maximum modulus ------------------------------------------------------------

def sphere_samples(count: int, seed: int = 0) -> list:
    from scipy.stats import qmc

    pts = qmc.Halton(d=3, scramble=True, seed=seed).random(count)
    return [unit_from_cube(*row) for row in pts.tolist()]


def max_modulus_probe(f, radii, samples: int = 2000, seed: int = 0, tol: float = 1e-10) -> dict:
    """Max of ``|f|`` on each sphere ``|q| = r``; non-constant maps must increase."""
    g = _unwrap(f)
    units = sphere_samples(samples, seed)
    radii = sorted(float(r) for r in radii)
    maxima = [max(abs(g(u * r)) for u in units) for r in radii]
    if isinstance(g, StarSeries) and g.trimmed(1e-14).degree <= 0:
        return {"radii": radii, "maxima": maxima, "constant": True, "violations": []}
    violations = [(radii[i], radii[i + 1]) for i in range(len(radii) - 1)
                  if maxima[i + 1] <= maxima[i] - tol]
    return {"radii": radii, "maxima": maxima, "constant": False, "violations": violations}


def modulus_product_check(f, g, h, points, tol: float = 1e-10) -> list:
    """Points where ``|f| <= |g|`` but ``|h * f| > |h * g| + tol`` (should be empty)."""
    hf, hg = as_regular(h) * as_regular(f), as_regular(h) * as_regular(g)
    bad = []
    for q in points:
        if abs(f(q)) <= abs(g(q)) and abs(hf(q)) > abs(hg(q)) + tol:
            bad.append(q)
    return bad


def record_dicts(records) -> list:
    return [r.to_json() for r in records]


__all__ = [
    "PickContext",
    "SPRecord",
    "SPReport",
    "SelfMap",
    "Tolerances",
    "check_rigidity",
    "max_modulus_probe",
    "pick_transform",
    "sample_self_map",
    "sp_cullen",
    "sp_higher_cullen",
    "sp_higher_spherical",
    "sp_main",
    "sp_R",
    "sp_spherical",
]
