"""Seeded sweeps of the Schwarz-Pick inequalities over families of self-maps.

Every sample ``i`` of a run with seed ``s`` draws its map from
``SeedSequence([s, i])`` and its points from one scrambled Halton sequence,
so results do not depend on the number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.stats import qmc

from .quaternion import unit_from_cube
from .schwarz_pick import DEFAULT_TOLERANCES, PickContext, Tolerances, sample_self_map

FAMILIES = ("mobius", "blaschke-product", "bounded-series", "non-mobius", "mixed")


def ball_points(count: int, seed: int, radius: float, dims: int = 2) -> list:
    """``count`` tuples of ``dims`` low-discrepancy points in the ball of ``radius``.

    Radii use the fourth root so points are uniform in 4-dimensional volume.
    """
    raw = qmc.Halton(d=4 * dims, scramble=True, seed=seed).random(count)
    out = []
    for row in raw.tolist():
        pts = []
        for k in range(dims):
            u0, u1, u2, u3 = row[4 * k:4 * k + 4]
            pts.append(unit_from_cube(u1, u2, u3) * (radius * u0 ** 0.25))
        out.append(tuple(pts))
    return out


def family_kind(family: str, rng: np.random.Generator) -> str:
    """Concrete kind for one sample of a family."""
    if family == "mobius":
        return "mobius"
    if family == "blaschke-product":
        return f"blaschke-product({int(rng.integers(2, 4))})"
    if family == "bounded-series":
        return f"bounded-series({int(rng.integers(2, 9))})"
    if family == "non-mobius":
        return family_kind(("blaschke-product", "bounded-series")[int(rng.integers(0, 2))], rng)
    if family == "mixed":
        return family_kind(("mobius", "blaschke-product", "bounded-series")[int(rng.integers(0, 3))], rng)
    if "(" in family:
        return family
    raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def _evaluate(task) -> list:
    family, seed, index, q0, q, tol = task
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    f = sample_self_map(family_kind(family, rng), rng)
    ctx = PickContext(f, q0, tol)
    records = ctx.all_records(q)
    out = []
    for r in records:
        d = r.to_json()
        d["index"] = index
        d["kind"] = f.kind
        d["same_point"] = abs(q - q0) < 1e-12
        out.append(d)
    return out


def run_check(family: str, count: int, seed: int, radius: float = 0.95,
              tol: Tolerances = DEFAULT_TOLERANCES, workers: int = 1) -> dict:
    """Evaluate the four inequalities on ``count`` samples; returns the JSON report."""
    points = ball_points(count, seed, radius)
    tasks = [(family, seed, i, q0, q, tol) for i, (q0, q) in enumerate(points)]
    if workers > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_evaluate, tasks, chunksize=max(1, count // (8 * workers))))
    else:
        chunks = [_evaluate(t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    return {
        "meta": {
            "family": family,
            "seed": seed,
            "count": count,
            "radius": radius,
            "tolerances": {"eq_tol": tol.eq_tol, "strict_margin": tol.strict_margin,
                           "violation_tol": tol.violation_tol},
        },
        "records": records,
        "summary": summarize(records, tol),
    }


def summarize(records: list, tol: Tolerances = DEFAULT_TOLERANCES) -> dict:
    residuals = [r["residual"] for r in records]
    counts = {c: 0 for c in ("equality", "strict", "indeterminate", "violation")}
    for r in records:
        counts[r["classification"]] += 1
    return {
        "min_residual": min(residuals) if residuals else None,
        "equality_count": counts["equality"],
        "strict_count": counts["strict"],
        "indeterminate_count": counts["indeterminate"],
        "violation_count": counts["violation"],
        "record_count": len(records),
        "passed": all(x >= -tol.violation_tol for x in residuals),
    }


def strict_fraction(report: dict, names=("main", "R")) -> float:
    """Share of pointwise records (``q != q0``) whose residual exceeds the strict margin."""
    rel = [r for r in report["records"] if r["name"] in names and not r["same_point"]]
    if not rel:
        return math.nan
    return sum(r["classification"] == "strict" for r in rel) / len(rel)


def falsify(budget: int, seed: int = 0, radius: float = 0.95,
            tol: Tolerances = DEFAULT_TOLERANCES, workers: int = 1) -> dict:
    """Search ``budget`` mixed samples for a violated inequality."""
    report = run_check("mixed", budget, seed, radius, tol, workers)
    worst = min(report["records"], key=lambda r: r["residual"], default=None)
    report["meta"]["mode"] = "falsify"
    report["summary"]["worst"] = worst
    report["records"] = [r for r in report["records"] if r["classification"] == "violation"]
    return report


__all__ = ["FAMILIES", "ball_points", "falsify", "run_check", "strict_fraction", "summarize"]
