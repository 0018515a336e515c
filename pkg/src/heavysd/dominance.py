"""Dominance engines: the exact product-bound certificate, quadrature and
Monte Carlo comparisons of ``X`` against ``sum_i theta_i X_i``, VaR
superadditivity, asymptotic VaR ratios, random weights, majorization and
deadly risks.

Every engine returns a :class:`DominanceReport` whose per-point margin is
``F_target(x) - F_sum(x)``; the verdict is ``pass`` exactly when the
smallest margin is at least ``-epsilon``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import optimize, stats

from ._rng import BLOCK_SIZE, block_generators, open_uniform
from .combinators import recentre
from .dependence import DependenceModel, independent, sample_joint, verify_nlod_empirical
from .distributions import Deadly, DomainError, Distribution
from .grid import Grid, as_grid
from .quadrature import DEFAULT_ATOL, sum_cdf_independent, sum_sf_independent
from .weights import as_weights, is_majorized_by

__all__ = [
    "DominanceReport", "ScalingHypothesisError", "dkw_epsilon", "check_product_bound",
    "check_dominance_quadrature", "check_dominance_empirical", "var",
    "check_var_superadditivity", "asymptotic_var_ratio", "check_scaling_hypothesis",
    "TriggeringWeights", "ConstantWeights", "check_random_weight_bound",
    "majorization_experiment", "deadly_experiment", "sample_weighted_sum",
    "check_quadrature_oracle", "check_r_monotonicity",
]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
PRODUCT_BOUND_TOL = 1e-12


def dkw_epsilon(m: int, delta: float) -> float:
    """One-sided DKW half-width ``sqrt(ln(1/delta) / (2 m))``."""
    if m <= 0 or not (0 < delta < 1):
        raise ValueError("need m > 0 and delta in (0, 1)")
    return math.sqrt(math.log(1.0 / delta) / (2.0 * m))


@dataclass
class DominanceReport:
    mode: str
    dist: str
    weights: list[float]
    dep: str | None
    m: int | None
    delta: float | None
    seed: int | None
    grid: dict
    min_margin: float
    epsilon: float
    verdict: str
    extras: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    table: dict | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return {"mode": self.mode, "dist": self.dist, "weights": self.weights,
                "dep": self.dep, "m": self.m, "delta": self.delta, "seed": self.seed,
                "grid": self.grid, "min_margin": self.min_margin, "epsilon": self.epsilon,
                "verdict": self.verdict, "extras": self.extras, "notes": self.notes}

    def rows(self) -> list[tuple]:
        """Per-point ``(x, F_target, F_sum, margin)`` rows for CSV output."""
        if not self.table:
            return []
        t = self.table
        return list(zip(t["x"], t["F_target"], t["F_sum"], t["margin"]))


def _verdict(min_margin: float, eps: float) -> str:
    return PASS if min_margin >= -eps else FAIL


def _table(x, ft, fs) -> dict:
    x, ft, fs = (np.asarray(v, dtype=float) for v in (x, ft, fs))
    return {"x": x.tolist(), "F_target": ft.tolist(), "F_sum": fs.tolist(),
            "margin": (ft - fs).tolist()}


def check_product_bound(dist: Distribution, weights, grid: Grid | None = None,
                        tol: float = PRODUCT_BOUND_TOL) -> DominanceReport:
    """Certificate ``prod_i F(x / theta_i) <= F(x)`` on the grid.

    Since ``sum_i theta_i X_i <= x`` forces every ``X_i <= x / theta_i``,
    NLOD gives ``P(sum <= x) <= prod_i F(x / theta_i)``; the certificate
    therefore covers every NLOD joint law at once.  The product is formed
    in log space.
    """
    w = as_weights(weights)
    grid = as_grid(grid)
    d = recentre(dist)
    x = grid.values()
    log_prod = np.sum([d.logcdf(x / t) for t in w], axis=0)
    bound = np.exp(log_prod)
    fx = d.cdf(x)
    margin = fx - bound
    min_margin = float(margin.min())
    with np.errstate(invalid="ignore"):
        log_margin = d.logcdf(x) - log_prod
    extras = {"argmin_x": float(x[int(np.argmin(margin))]),
              "min_log_margin": float(np.nanmin(log_margin))}
    rep = DominanceReport("analytic-bound", dist.expr, w.tolist(), None, None, None, None,
                          grid.to_dict(), min_margin, tol, _verdict(min_margin, tol), extras,
                          ["certificate valid for every NLOD joint law with these marginals"],
                          _table(x, fx, bound))
    if rep.verdict == FAIL:
        rep.extras["witness_x"] = rep.extras["argmin_x"]
    return rep


def check_dominance_quadrature(target: Distribution, marginals: Sequence[Distribution], weights,
                               grid: Grid | None = None,
                               atol: float = DEFAULT_ATOL) -> DominanceReport:
    """Independent-sum comparison with the sum CDF computed by quadrature."""
    w = as_weights(weights, len(marginals))
    grid = as_grid(grid)
    x = grid.values()
    fs = sum_cdf_independent(marginals, w, x, atol=atol)
    ft = target.cdf(x)
    margin = ft - fs
    mm = float(margin.min())
    return DominanceReport("quadrature", target.expr, w.tolist(), "indep", None, None, None,
                           grid.to_dict(), mm, atol, _verdict(mm, atol),
                           {"marginals": [d.expr for d in marginals],
                            "argmin_x": float(x[int(np.argmin(margin))])},
                           [], _table(x, ft, fs))


def sample_weighted_sum(marginals: Sequence[Distribution], weights, dep: DependenceModel,
                        seed: int, m: int, *, workers: int = 1,
                        block_size: int = BLOCK_SIZE) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(X, S)``: the joint sample matrix and ``S = X @ weights``."""
    w = np.asarray(weights, dtype=float)
    xs = sample_joint(dep, marginals, seed, m, workers=workers, block_size=block_size)
    return xs, _weighted(xs, w)


def _weighted(xs: np.ndarray, w: np.ndarray) -> np.ndarray:
    # zero weight times an infinite loss contributes nothing
    with np.errstate(invalid="ignore"):
        prod = xs * w
    return np.where(w > 0, prod, 0.0).sum(axis=-1)


def _ecdf(sorted_s: np.ndarray, x: np.ndarray) -> np.ndarray:
    # infinite samples sort last and are never <= a finite grid point
    return np.searchsorted(sorted_s, x, side="right") / sorted_s.size


def _empirical_grid(grid: Grid, s: np.ndarray) -> np.ndarray:
    finite = s[np.isfinite(s)]
    extra = np.quantile(finite, np.arange(1, 10) / 10.0) if finite.size else np.array([])
    return np.unique(np.concatenate([grid.values(), extra]))


def check_dominance_empirical(target: Distribution, marginals: Sequence[Distribution], weights,
                              dep: DependenceModel | None = None, seed: int = 0, m: int = 10**6,
                              delta: float = 1e-3, grid: Grid | None = None, *,
                              workers: int = 1) -> DominanceReport:
    """Monte Carlo check of ``F_target(x) >= F_hat_sum(x) - eps`` with one-sided DKW ``eps``.

    The grid is the log-spaced grid plus the deciles of the simulated sum.
    Clayton samples are first run through :func:`verify_nlod_empirical`;
    a failed NLOD check turns the verdict into ``inconclusive``.
    Dependence models that are not NLOD are labelled exploratory.
    """
    dep = dep or independent()
    w = as_weights(weights, len(marginals))
    grid = as_grid(grid)
    xs, s = sample_weighted_sum(marginals, w, dep, seed, m, workers=workers)
    x = _empirical_grid(grid, s)
    ss = np.sort(s)
    fs = _ecdf(ss, x)
    ft = target.cdf(x)
    margin = ft - fs
    eps = dkw_epsilon(m, delta)
    mm = float(margin.min())
    verdict = _verdict(mm, eps)
    extras = {"marginals": [d.expr for d in marginals], "nlod": dep.nlod,
              "argmin_x": float(x[int(np.argmin(margin))]),
              "infinite_fraction": float(np.isinf(s).mean())}
    notes = []
    if dep.nlod == "empirical":
        nl = verify_nlod_empirical(xs, delta=delta)
        extras["nlod_check"] = nl.to_dict()
        if not nl.passed:
            verdict = INCONCLUSIVE
            notes.append("sampler failed its empirical NLOD check")
    elif dep.nlod == "no":
        extras["exploratory"] = True
        notes.append("dependence model is not NLOD; exploratory run")
    return DominanceReport("empirical", target.expr, w.tolist(), dep.expr, m, delta, seed,
                           grid.to_dict(), mm, eps, verdict, extras, notes, _table(x, ft, fs))


def var(dist: Distribution, p):
    """Value-at-Risk ``F^{-1}(p)`` (generalized inverse); may be ``inf``."""
    return dist.quantile(p)


def _check_p(p_grid) -> np.ndarray:
    p = np.atleast_1d(np.asarray(p_grid, dtype=float))
    if p.size == 0 or np.any(~((p > 0) & (p < 1))):
        raise DomainError(f"p-grid must lie in (0, 1), got {p.tolist()}")
    return p


def _rel_diff(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(a), abs(b), 1.0)


def check_var_superadditivity(dist: Distribution, weights, p_grid=(0.9, 0.99, 0.999),
                              dep: DependenceModel | None = None, seed: int = 0, m: int = 10**6,
                              delta: float = 1e-3, *, workers: int = 1) -> DominanceReport:
    """Check ``sum_i VaR_p(theta_i X_i) = VaR_p(X) <= VaR_p(sum_i theta_i X_i)``.

    The sum's VaR is bounded above by the order statistic ``S_(j)`` with
    ``j = Binom(m, p).ppf(1 - delta') + 1``, which exceeds the true VaR
    with probability at least ``1 - delta'``; ``delta`` is split evenly over
    the p-grid.  A violation is declared only when that upper bound falls
    below the single-risk VaR.  The margin is relative to the VaR.
    """
    dep = dep or independent()
    p = _check_p(p_grid)
    w = as_weights(weights)
    n = w.size
    _, s = sample_weighted_sum([dist] * n, w, dep, seed, m, workers=workers)
    ss = np.sort(s)
    d_each = delta / p.size
    rows, margins = [], []
    for pi in p:
        v1 = float(var(dist, pi))
        como = float(np.sum(w * v1)) if np.isfinite(v1) else math.inf
        k = max(int(math.ceil(m * pi)), 1)
        point = float(ss[k - 1])
        j = int(stats.binom.ppf(1 - d_each, m, pi)) + 1
        upper = float(ss[min(j, m) - 1])
        if math.isinf(v1):
            marg = 0.0 if math.isinf(upper) else -math.inf
        else:
            marg = (upper - v1) / max(abs(v1), 1e-300) if math.isfinite(upper) else math.inf
        margins.append(marg)
        rows.append({"p": float(pi), "var_single": v1, "var_comonotone_sum": como,
                     "comonotone_additive": _rel_diff(como, v1) <= 1e-12,
                     "var_sum_hat": point, "order_stat_index": j, "var_sum_upper": upper,
                     "relative_margin": marg, "pass": marg >= 0})
    mm = float(min(margins))
    return DominanceReport("var", dist.expr, w.tolist(), dep.expr, m, delta, seed,
                           {"p_grid": p.tolist()}, mm, 0.0, _verdict(mm, 0.0),
                           {"p_grid": p.tolist(), "var_table": rows, "nlod": dep.nlod}, [])


def asymptotic_var_ratio(dist: Distribution, n: int = 2,
                         p_seq=(0.5, 0.9, 0.99, 0.999, 0.9999), method: str = "quadrature",
                         seed: int = 0, m: int = 10**6, asymptotic_from: float = 0.99,
                         limit_rtol: float = 0.15) -> DominanceReport:
    """Ratio ``VaR_p(X_1 + ... + X_n) / (n VaR_p(X_1))`` for iid heavy tails.

    With tail index ``alpha <= 1`` the ratio tends to ``n**(1/alpha - 1)``.
    The quadrature method root-finds the sum's survival function in log
    space; ``monte-carlo`` uses the empirical quantile.  Entries with
    ``p < asymptotic_from`` are reported but not compared with the limit.
    """
    alpha = dist.tail_index
    if alpha is None or alpha > 1:
        raise DomainError(f"{dist.expr}: needs a tail index <= 1 (got {alpha})")
    if n < 2:
        raise ValueError("n must be at least 2")
    p = _check_p(p_seq)
    if np.any(np.diff(p) <= 0):
        raise ValueError("p-sequence must be increasing")
    limit = float(n ** (1.0 / alpha - 1.0)) if alpha > 0 else math.inf
    eq = [1.0 / n] * n
    if method == "monte-carlo":
        _, s = sample_weighted_sum([dist] * n, np.ones(n), independent(), seed, m)
        ss = np.sort(s)
    elif method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    rows, margins = [], []
    for pi in p:
        v1 = float(var(dist, pi))
        if method == "quadrature":
            tail = 1.0 - pi
            lo = math.log(v1 / n)
            hi = math.log(float(dist.isf(tail / n)))

            def f(t):
                return math.log(sum_sf_independent([dist] * n, eq, math.exp(t))) - math.log(tail)

            if hi <= lo:
                vs = v1
            else:
                # sf(lo) >= tail >= sf(hi) by the single-summand and union bounds
                t = optimize.brentq(f, lo, hi, xtol=1e-10, rtol=1e-12) if f(lo) * f(hi) < 0 \
                    else (lo if f(lo) == 0 else hi)
                vs = n * math.exp(t)
        else:
            vs = float(ss[max(int(math.ceil(m * pi)), 1) - 1])
        ratio = vs / (n * v1)
        checked = bool(pi >= asymptotic_from and math.isfinite(limit))
        rel = abs(ratio - limit) / limit if math.isfinite(limit) else None
        if checked:
            margins.append(limit_rtol - rel)
        rows.append({"p": float(pi), "var_single": v1, "var_sum": vs, "ratio": ratio,
                     "limit": limit, "relative_error": rel, "in_limit_check": checked})
    notes = ["limit comparison is a tail statement; small-p rows are pre-asymptotic"]
    if alpha == 1:
        notes.append("tail index 1 is the boundary case; limit 1 is an empirical observation")
    # the verdict refers to the last (most extreme) level only
    last = rows[-1]
    mm = float(limit_rtol - last["relative_error"]) if last["in_limit_check"] else 0.0
    verdict = PASS if (not last["in_limit_check"] or mm >= 0) else FAIL
    return DominanceReport("ratio", dist.expr, [1.0] * n, "indep",
                           m if method == "monte-carlo" else None, None,
                           seed if method == "monte-carlo" else None,
                           {"p_grid": p.tolist()}, mm, 0.0, verdict,
                           {"method": method, "n": n, "tail_index": alpha,
                            "ratio_table": rows, "limit_rtol": limit_rtol}, notes)


class ScalingHypothesisError(ValueError):
    """``P(cX > t) >= c P(X > t)`` failed at ``witness = (c, t)``."""

    def __init__(self, message: str, witness: tuple[float, float]):
        super().__init__(message)
        self.witness = witness


def check_scaling_hypothesis(dist: Distribution, c_grid=None, t_grid=None,
                             rtol: float = 1e-12) -> dict:
    """Test ``P(cX > t) >= c P(X > t)`` on a (c, t) grid (default 25 x 40 = 10**3 pairs).

    Raises :class:`ScalingHypothesisError` with the worst pair on failure.
    """
    c = np.linspace(0.04, 1.0, 25) if c_grid is None else np.asarray(c_grid, dtype=float)
    t = np.geomspace(1e-3, 1e6, 40) if t_grid is None else np.asarray(t_grid, dtype=float)
    if np.any((c <= 0) | (c > 1)):
        raise ValueError("c must lie in (0, 1]")
    cc, tt = np.meshgrid(c, t, indexing="ij")
    lhs = dist.sf(tt / cc)
    rhs = cc * dist.sf(tt)
    gap = lhs - rhs
    rel = gap / np.maximum(np.abs(rhs), np.finfo(float).tiny)
    k = int(np.argmin(rel))
    i, j = np.unravel_index(k, rel.shape)
    out = {"pairs": int(gap.size), "worst_relative_gap": float(rel[i, j]),
           "worst_pair": [float(c[i]), float(t[j])]}
    if rel[i, j] < -rtol:
        raise ScalingHypothesisError(
            f"P(cX>t) >= c P(X>t) fails at c={float(c[i])!r}, t={float(t[j])!r}",
            (float(c[i]), float(t[j])))
    return out


@dataclass(frozen=True)
class TriggeringWeights:
    """``xi_i = theta_i 1{A_i}`` with independent events ``P(A_i) = probs_i``."""

    theta: tuple
    probs: tuple

    @property
    def n(self) -> int:
        return len(self.theta)

    @property
    def label(self) -> str:
        return "triggering(p=" + ",".join(repr(float(v)) for v in self.probs) + ")"

    def mean_total(self) -> float:
        return float(np.dot(self.theta, self.probs))

    def sample(self, rng: np.random.Generator, rows: int) -> np.ndarray:
        u = open_uniform(rng, (rows, self.n))
        return np.asarray(self.theta) * (u < np.asarray(self.probs))


@dataclass(frozen=True)
class ConstantWeights:
    theta: tuple

    @property
    def n(self) -> int:
        return len(self.theta)

    @property
    def label(self) -> str:
        return "constant"

    def mean_total(self) -> float:
        return float(np.sum(self.theta))

    def sample(self, rng: np.random.Generator, rows: int) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.theta, dtype=float), (rows, self.n))


def check_random_weight_bound(dist: Distribution, sampler, seed: int = 0, m: int = 10**6,
                              grid: Grid | None = None, delta: float = 1e-3,
                              dep: DependenceModel | None = None) -> DominanceReport:
    """Check ``P(sum_i xi_i X_i > x) >= E(sum_i xi_i) P(X > x) - eps``.

    The weights are drawn from their own block streams, independently of
    the risks.  ``eps`` combines a one-sided DKW band for the empirical
    survival function with a Hoeffding bound for the estimated
    ``E(sum xi)``, each at level ``delta / 2``.  The scaling hypothesis is
    checked first; its failure raises :class:`ScalingHypothesisError`.
    """
    scaling = check_scaling_hypothesis(dist)
    dep = dep or independent()
    grid = as_grid(grid)
    n = sampler.n
    xs = sample_joint(dep, [dist] * n, seed, m)
    xi = np.concatenate([np.array(sampler.sample(rng, rows), dtype=float)
                         for rng, rows in block_generators(seed, m, 2)])
    if np.any(xi < 0) or np.any(xi.sum(axis=1) > 1 + 1e-12):
        raise ValueError("random weights must be non-negative with sum at most 1")
    with np.errstate(invalid="ignore"):
        s = np.where(xi > 0, xi * xs, 0.0).sum(axis=1)
    mean_hat = float(xi.sum(axis=1).mean())
    x = _empirical_grid(grid, s)
    ss = np.sort(s)
    sf_hat = 1.0 - _ecdf(ss, x)
    target_sf = mean_hat * dist.sf(x)
    eps = dkw_epsilon(m, delta / 2) + dkw_epsilon(m, delta / 2)
    margin = sf_hat - target_sf
    mm = float(margin.min())
    # the table keeps the CDF convention: F_target = 1 - bound, F_sum = 1 - sf_hat
    table = _table(x, 1.0 - target_sf, 1.0 - sf_hat)
    extras = {"weights_sampler": sampler.label, "mean_total_weight": mean_hat,
              "mean_total_weight_exact": sampler.mean_total(), "scaling_check": scaling,
              "argmin_x": float(x[int(np.argmin(margin))]), "nlod": dep.nlod}
    return DominanceReport("random-weights", dist.expr, [float(v) for v in sampler.theta],
                           dep.expr, m, delta, seed, grid.to_dict(), mm, eps,
                           _verdict(mm, eps), extras, [], table)


def majorization_experiment(dist: Distribution, eta, gamma, dep: DependenceModel | None = None,
                            seed: int = 0, m: int = 10**6, grid: Grid | None = None,
                            delta: float = 1e-3) -> DominanceReport:
    """Exploratory: is ``sum eta_i X_i <=_st sum gamma_i X_i`` when gamma is majorized by eta?

    Both sums reuse the same sample matrix.  The band is
    ``2 * DKW(delta / 2)`` (one band per empirical CDF).  A failure only
    marks a violation candidate.
    """
    eta = as_weights(eta)
    gamma = as_weights(gamma, eta.size)
    if not is_majorized_by(gamma, eta):
        raise ValueError(f"{gamma.tolist()} is not majorized by {eta.tolist()}")
    dep = dep or independent()
    grid = as_grid(grid)
    xs = sample_joint(dep, [dist] * eta.size, seed, m)
    s_eta = _weighted(xs, eta)
    s_gamma = _weighted(xs, gamma)
    x = _empirical_grid(grid, s_gamma)
    f_eta = _ecdf(np.sort(s_eta), x)
    f_gamma = _ecdf(np.sort(s_gamma), x)
    eps = 2.0 * dkw_epsilon(m, delta / 2)
    margin = f_eta - f_gamma
    mm = float(margin.min())
    verdict = _verdict(mm, eps)
    label = "consistent with the majorization ordering" if verdict == PASS \
        else "violation candidate"
    return DominanceReport("majorize", dist.expr, gamma.tolist(), dep.expr, m, delta, seed,
                           grid.to_dict(), mm, eps, verdict,
                           {"eta": eta.tolist(), "gamma": gamma.tolist(), "label": label,
                            "exploratory": True, "max_abs_difference": float(np.abs(margin).max()),
                            "argmin_x": float(x[int(np.argmin(margin))])},
                           ["exploratory: no general result is claimed"],
                           _table(x, f_eta, f_gamma))


def _deadly_exact(p: float, n: int, dep: DependenceModel) -> float | None:
    if dep.kind == "indep":
        return 1.0 - (1.0 - p) ** n
    if dep.kind == "comono":
        return p
    if dep.kind == "countermono":
        return min(2.0 * p, 1.0)
    return None


def deadly_experiment(p: float, n: int = 2, dep: DependenceModel | None = None, seed: int = 0,
                      m: int = 10**6, weights=None) -> DominanceReport:
    """Deadly risks: ``P(sum = inf)`` against its exact value and the bound ``>= p``.

    The exact values are ``1 - (1-p)**n`` (independent), ``p``
    (comonotone) and ``min(2p, 1)`` (counter-monotone).  The agreement test
    allows three binomial standard deviations.  Dominance itself,
    ``P(sum = inf) >= p``, is checked exactly on counts: every row with an
    infinite coordinate has an infinite sum, so the infinite-sum count can
    never fall below any column's infinite count.
    """
    dep = dep or independent()
    w = as_weights(weights if weights is not None else [1.0 / n] * n, n)
    d = Deadly(p)
    xs, s = sample_weighted_sum([d] * n, w, dep, seed, m)
    inf_rows = int(np.isinf(s).sum())
    col_counts = np.isinf(xs).sum(axis=0)
    frac = inf_rows / m
    exact = _deadly_exact(p, n, dep)
    counts_ok = bool(inf_rows >= col_counts.max())
    extras = {"p": p, "n": n, "infinite_fraction": frac, "infinite_rows": inf_rows,
              "column_infinite_counts": col_counts.tolist(), "counts_dominate": counts_ok,
              "exact": exact, "nlod": dep.nlod}
    # P(sum <= x) = 1 - frac for every finite x >= 0, F(x) = 1 - p
    margin = frac - p
    eps = dkw_epsilon(m, 1e-3)
    ok = counts_ok and margin >= -eps
    if exact is not None:
        sd = math.sqrt(exact * (1 - exact) / m)
        z = (frac - exact) / sd if sd > 0 else (0.0 if frac == exact else math.inf)
        extras.update({"binomial_sd": sd, "z": z, "within_3sd": abs(z) <= 3})
        ok = ok and abs(z) <= 3
    notes = [] if dep.nlod != "no" else ["positively dependent coupling; exploratory"]
    return DominanceReport("deadly", d.expr, w.tolist(), dep.expr, m, 1e-3, seed,
                           {"points": "all finite x >= 0"}, margin, eps,
                           PASS if ok else FAIL, extras, notes)


def check_quadrature_oracle(dists: Sequence[Distribution], weights, x=None, seed: int = 0,
                            m: int = 10**7, delta: float = 1e-3, *,
                            workers: int = 1) -> DominanceReport:
    """Two-route agreement: quadrature CDF of an independent sum against Monte Carlo.

    Passes when ``|F_quad(x) - F_hat(x)| <= 3 sqrt(ln(2/delta) / (2m))`` at
    every point (20 log-spaced points in ``[0.05, 1000]`` by default).
    """
    w = as_weights(weights, len(dists))
    xs = np.geomspace(0.05, 1e3, 20) if x is None else np.asarray(x, dtype=float)
    fq = sum_cdf_independent(dists, w, xs)
    _, s = sample_weighted_sum(dists, w, independent(), seed, m, workers=workers)
    fm = _ecdf(np.sort(s), xs)
    eps = 3.0 * math.sqrt(math.log(2.0 / delta) / (2.0 * m))
    diff = np.abs(fq - fm)
    mm = -float(diff.max())
    return DominanceReport("oracle", "; ".join(d.expr for d in dists), w.tolist(), "indep", m,
                           delta, seed, {"points": xs.tolist()}, mm, eps, _verdict(mm, eps),
                           {"max_abs_difference": -mm, "argmax_x": float(xs[int(np.argmax(diff))])},
                           ["F_target is the quadrature value, F_sum the Monte Carlo estimate"],
                           _table(xs, fq, fm))


def check_r_monotonicity(dists: Sequence[Distribution], weights, rs=(0.0, 1.0, 2.0),
                         grid: Grid | None = None, tol: float = 1e-12) -> DominanceReport:
    """Pointwise ``M_r0 <= M_r1 <= ...`` for increasing ``rs`` on the grid."""
    from .combinators import generalized_r_mean

    w = as_weights(weights, len(dists))
    rs = sorted(float(r) for r in rs)
    grid = as_grid(grid)
    x = grid.values()
    vals = np.array([generalized_r_mean(dists, w, r).cdf(x) for r in rs])
    gaps = np.diff(vals, axis=0)
    mm = float(gaps.min())
    k = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
    return DominanceReport("r-monotone", "; ".join(d.expr for d in dists), w.tolist(), None,
                           None, None, None, grid.to_dict(), mm, tol, _verdict(mm, tol),
                           {"r": rs, "argmin_pair": [rs[k[0]], rs[k[0] + 1]],
                            "argmin_x": float(x[k[1]])}, [])
