"""Joint samplers with prescribed marginals and NLOD / PLOD dependence.

Each model produces, row by row, a vector of uniforms with the model's
copula; coordinates are then pushed through the marginal quantile
functions.  Rows are generated in blocks of ``2**16`` from block-keyed
seeds, so output depends only on ``(seed, block_size)``.

NLOD status per model:

* ``indep``, ``countermono`` and ``gauss`` with non-positive correlations
  are NLOD by construction (a Gaussian vector with non-positive
  correlations is negatively associated);
* ``clayton`` with ``theta < 0`` is only checked empirically, see
  :func:`verify_nlod_empirical`;
* ``comono`` is PLOD and exists for the positive-dependence experiments.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import ndtr

from ._rng import BLOCK_SIZE, block_generators, open_uniform
from .distributions import Distribution, fmt_num

__all__ = ["DependenceModel", "independent", "countermonotone", "gaussian", "clayton",
           "comonotone", "sample_joint", "verify_nlod_empirical", "NLODReport",
           "clayton_cdf"]

KINDS = ("indep", "countermono", "gauss", "clayton", "comono")
_PSD_TOL = 1e-12
_JITTER = 1e-12
_Q_FLOOR = 2.0**-53


@dataclass(frozen=True, eq=False)
class DependenceModel:
    """Joint-law specification for ``(X_1, ..., X_n)``.

    ``rho`` is an equicorrelation for ``gauss``; a full correlation matrix
    may be passed as ``corr`` instead.  ``theta`` is the Clayton parameter
    in ``[-1, 0)``.
    """

    kind: str
    rho: float | None = None
    corr: np.ndarray | None = field(default=None, repr=False)
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown dependence kind {self.kind!r}")
        if self.kind == "gauss":
            if (self.rho is None) == (self.corr is None):
                raise ValueError("gauss needs exactly one of rho or corr")
            if self.corr is not None:
                c = np.array(self.corr, dtype=float)
                _check_correlation(c)
                object.__setattr__(self, "corr", c)
            elif not (-1 <= self.rho <= 1):
                raise ValueError(f"rho must lie in [-1, 1], got {self.rho}")
        if self.kind == "clayton":
            if self.theta is None or not (-1 <= self.theta < 0):
                raise ValueError(f"clayton theta must lie in [-1, 0), got {self.theta}")

    @property
    def expr(self) -> str:
        if self.kind == "gauss":
            if self.corr is not None:
                return "gauss(corr=" + ";".join(
                    " ".join(fmt_num(v) for v in row) for row in self.corr) + ")"
            return f"gauss(rho={fmt_num(self.rho)})"
        if self.kind == "clayton":
            return f"clayton(theta={fmt_num(self.theta)})"
        return self.kind

    @property
    def fixed_dimension(self) -> int | None:
        if self.kind in ("countermono", "clayton"):
            return 2
        if self.kind == "gauss" and self.corr is not None:
            return self.corr.shape[0]
        return None

    @property
    def nlod(self) -> str:
        """``"guaranteed"``, ``"empirical"`` (must be checked) or ``"no"``."""
        if self.kind in ("indep", "countermono"):
            return "guaranteed"
        if self.kind == "gauss":
            off = self.rho if self.corr is None else self.corr[~np.eye(len(self.corr), dtype=bool)]
            return "guaranteed" if np.all(np.asarray(off) <= 0) else "no"
        if self.kind == "clayton":
            return "empirical"
        return "no"

    def correlation(self, n: int) -> np.ndarray:
        if self.corr is not None:
            if self.corr.shape[0] != n:
                raise ValueError(f"correlation matrix is {self.corr.shape[0]}x"
                                 f"{self.corr.shape[0]} but {n} marginals were given")
            return self.corr
        if n > 1 and self.rho < -1.0 / (n - 1) - _PSD_TOL:
            raise ValueError(f"equicorrelation rho={self.rho} infeasible for n={n}: "
                             f"need rho >= {-1.0 / (n - 1)!r}")
        c = np.full((n, n), float(self.rho))
        np.fill_diagonal(c, 1.0)
        return c

    def check_dimension(self, n: int) -> None:
        fixed = self.fixed_dimension
        if fixed is not None and fixed != n:
            raise ValueError(f"{self.expr} needs exactly {fixed} marginals, got {n}")
        if n < 1:
            raise ValueError("need at least one marginal")
        if self.kind == "gauss":
            self.correlation(n)


def _check_correlation(c: np.ndarray) -> None:
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError("correlation matrix must be square")
    if not np.allclose(c, c.T, atol=1e-12):
        raise ValueError("correlation matrix must be symmetric")
    if not np.allclose(np.diag(c), 1.0, atol=1e-12):
        raise ValueError("correlation matrix must have unit diagonal")
    lam = np.linalg.eigvalsh(c)
    if lam.min() < -_PSD_TOL:
        raise ValueError(f"correlation matrix is not positive semi-definite "
                         f"(smallest eigenvalue {lam.min()!r})")


def independent() -> DependenceModel:
    return DependenceModel("indep")


def countermonotone() -> DependenceModel:
    return DependenceModel("countermono")


def gaussian(rho: float | None = None, corr=None) -> DependenceModel:
    return DependenceModel("gauss", rho=rho, corr=corr)


def clayton(theta: float) -> DependenceModel:
    return DependenceModel("clayton", theta=float(theta))


def comonotone() -> DependenceModel:
    return DependenceModel("comono")


def clayton_cdf(u, v, theta: float):
    """Clayton copula ``max(u**-theta + v**-theta - 1, 0)**(-1/theta)``, theta in [-1, 0)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    s = np.maximum(np.power(u, -theta) + np.power(v, -theta) - 1.0, 0.0)
    return np.power(s, -1.0 / theta)


def _cholesky(c: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(c)
    except np.linalg.LinAlgError:
        return np.linalg.cholesky(c + _JITTER * np.eye(c.shape[0]))


def _block_levels(model: DependenceModel, rng: np.random.Generator, rows: int, n: int,
                  chol: np.ndarray | None) -> np.ndarray:
    """Survival levels ``q`` (rows x n); coordinates are ``isf_i(q_i)``."""
    if model.kind == "indep":
        return open_uniform(rng, (rows, n))
    if model.kind == "comono":
        u = open_uniform(rng, rows)
        return np.repeat(u[:, None], n, axis=1)
    if model.kind == "countermono":
        u = open_uniform(rng, rows)
        return np.column_stack([u, 1.0 - u])
    if model.kind == "gauss":
        z = rng.standard_normal((rows, n)) @ chol.T
        # survival scale; the Gaussian copula is radially symmetric
        return np.clip(ndtr(-z), _Q_FLOOR, 1.0)
    # clayton: conditional inversion on the CDF scale, then flip to survival
    theta = model.theta
    u = open_uniform(rng, rows)
    w = open_uniform(rng, rows)
    if theta == -1.0:
        v = 1.0 - u
    else:
        a = -theta / (1.0 + theta)
        inner = np.power(w * np.power(u, 1.0 + theta), a) + 1.0 - np.power(u, -theta)
        v = np.power(np.maximum(inner, 0.0), -1.0 / theta)
    return np.clip(np.column_stack([1.0 - u, 1.0 - v]), _Q_FLOOR, 1.0)


def sample_joint(model: DependenceModel, marginals: Sequence[Distribution], seed: int,
                 m: int, *, block_size: int = BLOCK_SIZE, workers: int = 1) -> np.ndarray:
    """Draw an ``m x n`` matrix whose rows are iid with the requested joint law."""
    n = len(marginals)
    model.check_dimension(n)
    chol = _cholesky(model.correlation(n)) if model.kind == "gauss" else None

    def block(args):
        rng, rows = args
        q = _block_levels(model, rng, rows, n, chol)
        return np.column_stack([d.isf(q[:, i]) for i, d in enumerate(marginals)])

    blocks = block_generators(seed, m, 1, block_size=block_size)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(block, blocks))
    else:
        parts = [block(b) for b in blocks]
    return np.concatenate(parts, axis=0)


@dataclass
class NLODReport:
    verdict: str
    worst_margin: float
    epsilon: float
    witness: list[float] | None
    corners: int
    m: int
    delta: float

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "worst_margin": self.worst_margin,
                "epsilon": self.epsilon, "witness": self.witness, "corners": self.corners,
                "m": self.m, "delta": self.delta}


def verify_nlod_empirical(samples: np.ndarray, levels: Sequence[float] | None = None,
                          delta: float = 1e-3) -> NLODReport:
    """Empirical check of ``P(X <= x) <= prod_i P(X_i <= x_i)`` at orthant corners.

    Corners are all combinations of per-column empirical quantiles at
    ``levels`` (deciles by default).  The statistical slack is a Hoeffding
    bound for the joint frequency at each corner, union-bounded over the
    corners, plus ``n`` one-sided-free DKW bands for the marginal factors;
    half of ``delta`` goes to each part.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 2:
        raise ValueError("samples must be an m x n matrix")
    m, n = x.shape
    if levels is None:
        levels = np.arange(1, 10) / 10.0 if n <= 3 else np.array([0.2, 0.4, 0.6, 0.8])
    levels = np.asarray(levels, dtype=float)
    # method="inverted_cdf" is the generalized inverse of the empirical CDF
    cuts = [np.quantile(x[:, i], levels, method="inverted_cdf") for i in range(n)]
    below = [np.stack([x[:, i] <= c for c in cuts[i]]) for i in range(n)]
    marg = [b.mean(axis=1) for b in below]
    k = len(levels)
    n_corners = k**n
    eps_joint = math.sqrt(math.log(2 * n_corners / (delta / 2)) / (2 * m))
    eps_marg = math.sqrt(math.log(2 * n / (delta / 2)) / (2 * m))
    eps = eps_joint + n * eps_marg
    worst, witness = math.inf, None
    for idx in np.ndindex(*(k,) * n):
        joint = below[0][idx[0]].copy()
        for i in range(1, n):
            joint &= below[i][idx[i]]
        margin = float(np.prod([marg[i][idx[i]] for i in range(n)]) - joint.mean())
        if margin < worst:
            worst = margin
            witness = [float(cuts[i][idx[i]]) for i in range(n)]
    verdict = "pass" if worst >= -eps else "fail"
    return NLODReport(verdict, worst, eps, witness, n_corners, m, delta)
