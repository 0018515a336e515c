"""Numerical membership checks: class H, its sufficient conditions,
super-Frechet and super-Pareto.

Every check evaluates on a finite grid and therefore only ever says a law
is *numerically consistent* with a property; a ``fail`` verdict, on the
other hand, comes with an explicit witness.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .combinators import recentre
from .distributions import Distribution, QuantileError
from .grid import Grid, as_grid

__all__ = [
    "MembershipReport", "check_subadditive", "check_sufficient_conditions",
    "check_super_frechet", "check_super_pareto", "subadditivity_margin",
]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

# g(x) = 1/(-log F(x)) at this point must be below 1/log(1e10)
_LIMIT_PROBE = 1e-300
_LIMIT_CDF = 1e-10


@dataclass
class MembershipReport:
    criterion: str
    verdict: str
    grid: Grid
    tol: float
    worst_margin: float | None
    witness: list[float] | None
    dist: str
    details: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "verdict": self.verdict,
            "grid": self.grid.to_dict(),
            "tol": self.tol,
            "worst_margin": _json_float(self.worst_margin),
            "witness": self.witness,
            "dist": self.dist,
            "details": self.details,
            "notes": self.notes,
        }


def _json_float(v):
    if v is None:
        return None
    v = float(v)
    if np.isfinite(v):
        return v
    return "inf" if v > 0 else ("-inf" if v < 0 else "nan")


def subadditivity_margin(dist: Distribution, x, y):
    """``h(x) + h(y) - h(x + y)`` for the recentred law (>= 0 iff subadditive there)."""
    d = recentre(dist)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return d.h(x) + d.h(y) - d.h(x + y)


def check_subadditive(dist: Distribution, grid: Grid | None = None, tol: float = 1e-9,
                      strict: bool = False) -> MembershipReport:
    """Test ``h(x+y) <= h(x) + h(y)`` over all ordered pairs of grid points.

    A pair violates when its margin is below ``-tol * max(1, |h(x)+h(y)|)``.
    The strict variant additionally needs every absolute margin strictly
    above ``tol`` on pairs of interior grid points (a relative threshold
    would drown genuine positive margins at pairs like ``(1e-6, 1e6)``).
    """
    grid = as_grid(grid)
    d = recentre(dist)
    x = grid.values()
    hx = d.h(x)
    hs = d.h(x[:, None] + x[None, :])
    pair = hx[:, None] + hx[None, :]
    criterion = "class-h-strict" if strict else "class-h"
    notes = []
    if dist.essinf != 0:
        notes.append(f"recentred by essinf={dist.essinf!r}")
    if not (np.all(np.isfinite(hx)) and np.all(np.isfinite(hs))):
        return MembershipReport(criterion, INCONCLUSIVE, grid, tol, None, None, dist.expr,
                                {"h_infinite": True},
                                notes + ["h_F is infinite on part of the grid"])
    margin = pair - hs
    scale = np.maximum(1.0, np.abs(pair))
    rel = margin / scale
    worst = float(margin.min())
    bad = rel < -tol
    interior = np.zeros_like(bad)
    interior[1:-1, 1:-1] = True
    strict_ok = bool(np.all(margin[interior] > tol))
    details = {"pairs": int(margin.size), "strict": strict_ok,
               "worst_relative_margin": float(rel.min())}
    if bad.any():
        # most negative relative margin; ties go to the smallest x + y
        order = np.lexsort(((x[:, None] + x[None, :]).ravel(), np.round(rel.ravel(), 12)))
        k = order[0]
        i, j = np.unravel_index(k, rel.shape)
        witness = [float(x[i]), float(x[j])]
        details["witness_margin"] = float(margin[i, j])
        return MembershipReport(criterion, FAIL, grid, tol, worst, witness, dist.expr,
                                details, notes)
    if strict and not strict_ok:
        k = int(np.argmin(np.where(interior, margin, np.inf)))
        i, j = np.unravel_index(k, rel.shape)
        details["witness_margin"] = float(margin[i, j])
        # a positive margin below tol is unresolved, not a counterexample
        verdict = FAIL if margin[i, j] <= 0 else INCONCLUSIVE
        return MembershipReport(criterion, verdict, grid, tol, worst, [float(x[i]), float(x[j])],
                                dist.expr, details,
                                notes + ["margin not resolvably positive at an interior pair"])
    return MembershipReport(criterion, PASS, grid, tol, worst, None, dist.expr, details,
                            notes + ["numerically consistent on the grid"])


def _concavity_defects(x, v):
    """Relative increase of consecutive divided differences (> 0 means convex kink)."""
    s = np.diff(v) / np.diff(x)
    ds = np.diff(s)
    scale = np.maximum(np.maximum(np.abs(s[:-1]), np.abs(s[1:])), np.finfo(float).tiny)
    return ds / scale


def check_sufficient_conditions(dist: Distribution, grid: Grid | None = None,
                                tol: float = 1e-9) -> MembershipReport:
    """Check the two easy sufficient conditions for class H:
    (a) ``h(x)/x`` non-increasing, (b) ``h`` concave (discrete second differences).

    Passing either one passes the report; failing both is *not* evidence
    against membership in H.
    """
    grid = as_grid(grid)
    d = recentre(dist)
    x = grid.values()
    hx = d.h(x)
    if not np.all(np.isfinite(hx)):
        return MembershipReport("sufficient", INCONCLUSIVE, grid, tol, None, None, dist.expr,
                                {"h_infinite": True}, ["h_F is infinite on part of the grid"])
    ratio = hx / x
    rdef = np.diff(ratio) / np.maximum(np.abs(ratio[:-1]), np.finfo(float).tiny)
    ratio_ok = bool(np.all(rdef <= tol))
    cdef = _concavity_defects(x, hx)
    concave_ok = bool(np.all(cdef <= tol))
    details = {"ratio_decreasing": ratio_ok, "concave": concave_ok,
               "worst_ratio_increase": float(rdef.max()),
               "worst_concavity_defect": float(cdef.max())}
    worst = -float(min(rdef.max(), cdef.max()))
    if ratio_ok or concave_ok:
        return MembershipReport("sufficient", PASS, grid, tol, worst, None, dist.expr, details,
                                ["numerically consistent on the grid"])
    k = int(np.argmax(cdef))
    witness = [float(x[k]), float(x[k + 1]), float(x[k + 2])]
    return MembershipReport("sufficient", FAIL, grid, tol, worst, witness, dist.expr, details,
                            ["neither sufficient condition holds; says nothing about H itself"])


def check_super_frechet(dist: Distribution, grid: Grid | None = None,
                        tol: float = 1e-9) -> MembershipReport:
    """``g(x) = 1/(-log F(x))`` must be strictly increasing, concave and tend to 0 at 0+.

    Grid points where ``F`` is 0 or 1 are dropped (flagged as truncation).
    The limit at 0 is probed at ``x = 1e-300``: ``F`` must be below 1e-10
    there and ``g`` must decrease along the decades between that point and
    the grid minimum.
    """
    grid = as_grid(grid)
    d = recentre(dist)
    x = grid.values()
    lf = d.logcdf(x)
    keep = (lf < 0) & np.isfinite(lf)
    notes = []
    details: dict = {}
    if not keep.all():
        details["truncated_points"] = int((~keep).sum())
        notes.append("CDF is 0 or 1 on part of the grid; interior sub-grid used")
    x, lf = x[keep], lf[keep]
    if x.size < 3:
        return MembershipReport("super-frechet", INCONCLUSIVE, grid, tol, None, None, dist.expr,
                                details, notes + ["fewer than three interior grid points"])
    g = -1.0 / lf
    steps = np.diff(g)
    inc_ok = bool(np.all(steps > 0))
    cdef = _concavity_defects(x, g)
    concave_ok = bool(np.all(cdef <= tol))
    probe = np.geomspace(_LIMIT_PROBE, x[0], 301)
    lp = d.logcdf(probe)
    with np.errstate(divide="ignore"):
        gp = -1.0 / lp
    limit_ok = bool(lp[0] <= np.log(_LIMIT_CDF) and np.all(np.diff(gp) >= 0))
    details.update({"strictly_increasing": inc_ok, "concave": concave_ok,
                    "vanishes_at_zero": limit_ok, "g_at_probe": float(gp[0]),
                    "worst_concavity_defect": float(cdef.max())})
    worst = -float(cdef.max())
    if not d.continuous:
        notes.append("law has atoms, so it cannot be super-Frechet")
    witness = None
    if not inc_ok:
        k = int(np.flatnonzero(steps <= 0)[0])
        witness = [float(x[k]), float(x[k + 1])]
    elif not concave_ok:
        k = int(np.argmax(cdef))
        witness = [float(x[k]), float(x[k + 1]), float(x[k + 2])]
    elif not limit_ok:
        witness = [float(probe[0])]
    ok = inc_ok and concave_ok and limit_ok and d.continuous
    if ok:
        notes.append("numerically consistent on the grid")
    return MembershipReport("super-frechet", PASS if ok else FAIL, grid, tol, worst, witness,
                            dist.expr, details, notes)


def check_super_pareto(dist: Distribution, grid: Grid | None = None,
                       tol: float = 1e-9) -> MembershipReport:
    """Build ``f(x) = F^{-1}(1 - 1/(x+1))`` (so ``X = f(Y)``, ``Y ~ Pareto(1)``)
    and test that ``f`` is non-decreasing, non-constant and midpoint convex.

    ``f(0+)`` equals the essential infimum, which is 0 after recentring.
    The midpoint test runs over all pairs of finite grid values plus the
    pairs ``(0, x)``.
    """
    grid = as_grid(grid)
    d = recentre(dist)
    xg = grid.values()
    details: dict = {"f0": 0.0}
    notes = []
    try:
        with np.errstate(over="ignore"):
            fx = d.isf(1.0 / (1.0 + xg))
    except QuantileError as exc:
        return MembershipReport("super-pareto", INCONCLUSIVE, grid, tol, None, None, dist.expr,
                                details, [f"quantile failure: {exc}"])
    keep = np.isfinite(fx)
    if not keep.all():
        details["truncated_points"] = int((~keep).sum())
        notes.append("f overflows on part of the grid; finite sub-grid used")
    x = np.concatenate(([0.0], xg[keep]))
    f = np.concatenate(([0.0], fx[keep]))
    with np.errstate(invalid="ignore"):
        nondecreasing = bool(np.all(np.diff(f) >= 0))
    nonconstant = bool(f[-1] > f[0])
    i, j = np.triu_indices(x.size, k=1)
    mid = 0.5 * (x[i] + x[j])
    try:
        with np.errstate(over="ignore"):
            fm = d.isf(1.0 / (1.0 + mid))
    except QuantileError as exc:
        return MembershipReport("super-pareto", INCONCLUSIVE, grid, tol, None, None, dist.expr,
                                details, notes + [f"quantile failure: {exc}"])
    rhs = 0.5 * (f[i] + f[j])
    gap = (rhs - fm) / np.maximum(1.0, np.abs(rhs))
    worst = float(gap.min())
    convex_ok = bool(worst >= -tol)
    details.update({"nondecreasing": nondecreasing, "nonconstant": nonconstant,
                    "midpoint_convex": convex_ok, "pairs": int(gap.size)})
    witness = None
    if not nondecreasing:
        k = int(np.flatnonzero(np.diff(f) < 0)[0])
        witness = [float(x[k]), float(x[k + 1])]
    elif not convex_ok:
        k = int(np.argmin(gap))
        witness = [float(x[i[k]]), float(x[j[k]])]
    ok = nondecreasing and nonconstant and convex_ok
    if ok:
        notes.append("numerically consistent on the grid")
    return MembershipReport("super-pareto", PASS if ok else FAIL, grid, tol, worst, witness,
                            dist.expr, details, notes)
