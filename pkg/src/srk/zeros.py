"""Zero location for quaternionic polynomials.

The zeros of ``f`` lie on the spheres ``x + y S`` where the symmetrization
``f^s`` vanishes.  On each such sphere ``f(q) = v_s f + Im(q) d_s f``: either
both spherical quantities vanish (the whole sphere is zero) or the unique
zero has imaginary part ``-v_s f (d_s f)^{-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .calculus import spherical_pair
from .errors import ZeroFunction
from .quaternion import I, Quaternion, qinv
from .rational import sphere_roots
from .series import StarSeries, symmetrize

SPHERE_TOL = 1e-8


@dataclass(frozen=True)
class Zero:
    x0: float
    y0: float
    kind: str  # "real" | "point" | "sphere"
    point: Optional[Quaternion] = None
    multiplicity: int = 1

    def to_json(self) -> dict:
        out = {"kind": self.kind, "x0": self.x0, "y0": self.y0, "multiplicity": self.multiplicity}
        if self.point is not None:
            out["point"] = str(self.point)
        return out


def locate_zeros(f: StarSeries, search_radius: float = math.inf,
                 sphere_tol: float = SPHERE_TOL) -> list:
    if f.is_zero():
        raise ZeroFunction("the zero series vanishes everywhere")
    fs = symmetrize(f)
    spheres = sphere_roots(fs)
    scale = 1.0 + f.max_coeff()
    out = []
    seen = {}
    for sphere in spheres:
        seen[sphere] = seen.get(sphere, 0) + 1
    for (x0, y0), mult in sorted(seen.items()):
        if math.hypot(x0, y0) > search_radius:
            continue
        if y0 == 0.0:
            # f^s real root => f(x0) = 0; multiplicity counts f^s = f f^c
            out.append(Zero(x0, 0.0, "real", Quaternion(x0, 0.0, 0.0, 0.0), max(1, mult // 2)))
            continue
        pair = spherical_pair(f, Quaternion(x0, y0, 0.0, 0.0))
        tol = 1e-8 * scale
        if abs(pair.value) <= tol and abs(pair.derivative) <= tol:
            out.append(Zero(x0, y0, "sphere", None, mult))
            continue
        if abs(pair.derivative) <= 1e-14 * scale:
            continue
        im = -(pair.value * qinv(pair.derivative))
        if abs(im.imag_norm() - y0) >= sphere_tol * max(1.0, y0) or abs(im[0]) > sphere_tol:
            continue
        # adding 0.0 clears negative zeros
        out.append(Zero(x0, y0, "point", Quaternion(x0 + 0.0, im[1] + 0.0, im[2] + 0.0, im[3] + 0.0),
                        mult))
    return out


def zero_points(f: StarSeries, search_radius: float = math.inf) -> list:
    """Sample points of each zero: the isolated zero itself, or ``x0 + i y0`` for a sphere."""
    pts = []
    for z in locate_zeros(f, search_radius):
        if z.point is not None:
            pts.append(z.point)
        else:
            pts.append(Quaternion(z.x0, 0.0, 0.0, 0.0) + I * z.y0)
    return pts
