"""Catalog of extremely heavy-tailed distributions on [0, +inf].

All distributions here live on the extended non-negative reals: ``+inf`` is
a legitimate value (see :class:`Deadly` and :class:`InverseGeometric`) and
compares greater than every finite number.  Methods accept scalars or
arrays and return float arrays (0-d for scalar input).

Numerics follow one rule: each family evaluates its survival function and
its CDF in closed form, each accurate where it is small, and ``log F`` is
taken from whichever of the two keeps relative precision.  That keeps
``h(x) = -log F(1/x)`` accurate at both ends of a 12-decade grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rng import BLOCK_SIZE, block_generators, open_uniform

__all__ = [
    "Distribution", "DomainError", "QuantileError",
    "Frechet", "Pareto", "GeneralizedPareto", "Burr", "InverseBurr",
    "LogPareto", "Stoppa", "InverseGeometric", "Deadly",
    "paralogistic", "loglogistic",
    "cdf", "sf", "quantile", "h_f", "sample", "sample_mean_trajectory",
    "log1mexp", "fmt_num",
]


class DomainError(ValueError):
    """Argument outside the domain of an operation (e.g. p not in (0, 1))."""


class QuantileError(ArithmeticError):
    """Bisection could not bracket a quantile below 2**1000."""


def fmt_num(v: float) -> str:
    return repr(float(v))


def log1mexp(a):
    """``log(1 - exp(-a))`` for ``a >= 0`` without cancellation."""
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a < math.log(2.0), np.log(-np.expm1(-a)), np.log1p(-np.exp(-a)))


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _out(v: np.ndarray, like):
    v = np.asarray(v, dtype=float)
    return v if np.ndim(like) else v[()]


class Distribution:
    """Base class: a law on [0, +inf] with CDF, survival, quantile and h_F.

    Subclasses implement ``_sf`` and ``_cdf`` on finite ``x >= 0``.  They may
    override ``_logcdf``, ``_quantile``, ``_isf`` and ``_h`` with closed forms;
    the defaults fall back on log-space arithmetic and monotone bisection.
    """

    #: continuous on [0, inf) with no atoms (inverse-transform quadrature needs it)
    continuous: bool = True
    #: expected value is infinite: "yes", "no" or "unknown"
    infinite_mean: str = "unknown"
    #: regular-variation index of the survival function, when known
    tail_index: float | None = None

    # -- metadata -----------------------------------------------------------
    @property
    def expr(self) -> str:
        raise NotImplementedError

    @property
    def essinf(self) -> float:
        return 0.0

    @property
    def esssup(self) -> float:
        return math.inf

    @property
    def inf_mass(self) -> float:
        """P(X = +inf)."""
        return 0.0

    @property
    def h_valid(self) -> bool | None:
        """Whether the parameters are in the Table-style validity region for
        class H; ``None`` when no analytic statement is available."""
        return None

    def __str__(self) -> str:
        return self.expr

    # -- evaluation on finite x >= 0 -----------------------------------------
    def _sf(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _cdf(self, x: np.ndarray) -> np.ndarray:
        return 1.0 - self._sf(x)

    def _logcdf(self, x: np.ndarray) -> np.ndarray:
        s = self._sf(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(s < 0.5, np.log1p(-s), np.log(self._cdf(x)))

    def _quantile(self, p: np.ndarray) -> np.ndarray:
        pf = p.ravel()
        t = _bisect_smallest(lambda t: self.cdf(t) >= pf, pf.size, self.inf_mass > 0)
        return t.reshape(p.shape)

    def _isf(self, q: np.ndarray) -> np.ndarray:
        qf = q.ravel()
        t = _bisect_smallest(lambda t: self.sf(t) <= qf, qf.size, self.inf_mass > 0)
        return t.reshape(q.shape)

    def _h(self, x: np.ndarray) -> np.ndarray:
        return -self.logcdf(1.0 / x)

    # -- public API -----------------------------------------------------------
    def _split(self, x):
        x = _arr(x)
        if np.any(np.isnan(x)):
            raise DomainError("x must not be NaN")
        lo = x < 0
        top = np.isposinf(x)
        mid = ~(lo | top)
        return x, lo, top, mid

    def cdf(self, x):
        x, lo, top, mid = self._split(x)
        out = np.empty(x.shape)
        out[lo] = 0.0
        out[top] = 1.0
        out[mid] = np.clip(self._cdf(x[mid]), 0.0, 1.0)
        return _out(out, x)

    def sf(self, x):
        x, lo, top, mid = self._split(x)
        out = np.empty(x.shape)
        out[lo] = 1.0
        out[top] = 0.0
        out[mid] = np.clip(self._sf(x[mid]), 0.0, 1.0)
        return _out(out, x)

    def logcdf(self, x):
        x, lo, top, mid = self._split(x)
        out = np.empty(x.shape)
        out[lo] = -np.inf
        out[top] = 0.0
        out[mid] = np.minimum(self._logcdf(x[mid]), 0.0)
        return _out(out, x)

    def quantile(self, p):
        """Generalized inverse ``inf{t : F(t) >= p}`` for p in (0, 1)."""
        p = _arr(p)
        if np.any(~((p > 0) & (p < 1))):
            raise DomainError("quantile level must lie in the open interval (0, 1)")
        return _out(self._quantile(p), p)

    def isf(self, q):
        """``inf{t : S(t) <= q}`` for q in (0, 1]; equals ``quantile(1 - q)``
        but keeps relative precision for small q."""
        q = _arr(q)
        if np.any(~((q > 0) & (q <= 1))):
            raise DomainError("survival level must lie in (0, 1]")
        return _out(self._isf(q), q)

    def h(self, x):
        """``h_F(x) = -log F(1/x)`` for x > 0; ``+inf`` where ``F(1/x) = 0``."""
        x = _arr(x)
        if np.any(~(x > 0)):
            raise DomainError("h_F is defined for x > 0")
        with np.errstate(divide="ignore", over="ignore"):
            return _out(np.maximum(self._h(x), 0.0), x)

    def sample(self, seed: int, m: int, *, block_size: int = BLOCK_SIZE) -> np.ndarray:
        """Inverse-transform draws ``isf(U)``; bit-identical for a fixed seed."""
        parts = [self._isf(open_uniform(rng, rows))
                 for rng, rows in block_generators(seed, m, 0, block_size=block_size)]
        return np.concatenate(parts)


def _bisect_smallest(pred, n: int, allow_inf: bool, rtol: float = 1e-12,
                     max_steps: int = 200) -> np.ndarray:
    """Smallest ``t >= 0`` with ``pred(t)`` for a monotone (False..True) predicate.

    The bracket is geometric: first the power of two ``2**k`` with
    ``pred(2**(k-1))`` false and ``pred(2**k)`` true is located for
    k in [-1074, 1000], then ordinary bisection runs until the width is
    below ``rtol * hi``.  ``hi`` is returned, so ``pred`` holds at the result.
    """
    out = np.zeros(n)
    at_zero = np.asarray(pred(np.zeros(n)), dtype=bool)
    todo = ~at_zero
    if not todo.any():
        return out
    top = np.asarray(pred(np.full(n, 2.0**1000)), dtype=bool)
    missing = todo & ~top
    if missing.any():
        if not allow_inf:
            raise QuantileError("quantile not bracketed below 2**1000")
        out[missing] = np.inf
        todo &= top
    if not todo.any():
        return out
    idx = np.flatnonzero(todo)
    sub_pred = _subset_pred(pred, n, idx)
    klo = np.full(idx.size, -1075)   # pred false at 2**klo (2**-1075 == 0)
    khi = np.full(idx.size, 1000)    # pred true at 2**khi
    while np.any(khi - klo > 1):
        kmid = (klo + khi) // 2
        ok = sub_pred(np.ldexp(1.0, kmid))
        khi = np.where(ok, kmid, khi)
        klo = np.where(ok, klo, kmid)
    lo = np.ldexp(1.0, klo)
    hi = np.ldexp(1.0, khi)
    for _ in range(max_steps):
        active = (hi - lo) > rtol * hi
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        ok = sub_pred(mid)
        hi = np.where(active & ok, mid, hi)
        lo = np.where(active & ~ok, mid, lo)
    out[idx] = hi
    return out


def _subset_pred(pred, n, idx):
    """Evaluate an elementwise predicate on a subset of positions."""
    def f(t_sub):
        t = np.zeros(n)
        t[idx] = t_sub
        return np.asarray(pred(t), dtype=bool)[idx]
    return f


def _positive(name: str, v: float) -> float:
    v = float(v)
    if not (v > 0 and math.isfinite(v)):
        raise ValueError(f"{name} must be a positive finite number, got {v}")
    return v


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Frechet(Distribution):
    """F(x) = exp(-x**-alpha)."""

    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))

    @property
    def expr(self):
        return f"frechet(alpha={fmt_num(self.alpha)})"

    @property
    def h_valid(self):
        return self.alpha <= 1

    @property
    def infinite_mean(self):
        return "yes" if self.alpha <= 1 else "no"

    @property
    def tail_index(self):
        return self.alpha

    def _logcdf(self, x):
        with np.errstate(divide="ignore"):
            return -np.power(x, -self.alpha)

    def _cdf(self, x):
        return np.exp(self._logcdf(x))

    def _sf(self, x):
        return -np.expm1(self._logcdf(x))

    def _quantile(self, p):
        return np.power(-np.log(p), -1.0 / self.alpha)

    def _isf(self, q):
        with np.errstate(divide="ignore"):
            return np.power(-np.log1p(-q), -1.0 / self.alpha)

    def _h(self, x):
        return np.power(x, self.alpha)


@dataclass(frozen=True)
class Pareto(Distribution):
    """F(x) = 1 - (x + 1)**-alpha."""

    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))

    @property
    def expr(self):
        return f"pareto(alpha={fmt_num(self.alpha)})"

    @property
    def h_valid(self):
        return self.alpha <= 1

    @property
    def infinite_mean(self):
        return "yes" if self.alpha <= 1 else "no"

    @property
    def tail_index(self):
        return self.alpha

    def _sf(self, x):
        return np.exp(-self.alpha * np.log1p(x))

    def _cdf(self, x):
        return -np.expm1(-self.alpha * np.log1p(x))

    def _quantile(self, p):
        return np.expm1(-np.log1p(-p) / self.alpha)

    def _isf(self, q):
        return np.expm1(-np.log(q) / self.alpha)

    def _h(self, x):
        # F(1/x) = 1 - (x / (1 + x))**alpha
        return -log1mexp(self.alpha * np.log1p(1.0 / x))


@dataclass(frozen=True)
class GeneralizedPareto(Distribution):
    """F(x) = 1 - (1 + xi x / beta)**(-1/xi); exponential at xi = 0 and
    bounded support ``[0, -beta/xi]`` for xi < 0."""

    xi: float
    beta: float = 1.0

    def __post_init__(self):
        xi = float(self.xi)
        if not math.isfinite(xi):
            raise ValueError(f"xi must be finite, got {xi}")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "beta", _positive("beta", self.beta))

    @property
    def expr(self):
        return f"gpd(xi={fmt_num(self.xi)},beta={fmt_num(self.beta)})"

    @property
    def h_valid(self):
        return self.xi >= 1

    @property
    def infinite_mean(self):
        return "yes" if self.xi >= 1 else "no"

    @property
    def tail_index(self):
        return 1.0 / self.xi if self.xi > 0 else None

    @property
    def esssup(self):
        return -self.beta / self.xi if self.xi < 0 else math.inf

    def _log_sf(self, x):
        z = x / self.beta
        if self.xi == 0:
            return -z
        with np.errstate(divide="ignore", invalid="ignore"):
            arg = self.xi * z
            v = -np.log1p(arg) / self.xi
        if self.xi < 0:
            v = np.where(arg <= -1, -np.inf, v)
        return v

    def _sf(self, x):
        return np.exp(self._log_sf(x))

    def _cdf(self, x):
        return -np.expm1(self._log_sf(x))

    def _isf(self, q):
        ls = np.log(q)
        if self.xi == 0:
            return -self.beta * ls
        return self.beta / self.xi * np.expm1(-self.xi * ls)

    def _quantile(self, p):
        ls = np.log1p(-p)
        if self.xi == 0:
            return -self.beta * ls
        return self.beta / self.xi * np.expm1(-self.xi * ls)


@dataclass(frozen=True)
class Burr(Distribution):
    """F(x) = 1 - (x**tau + 1)**-alpha."""

    alpha: float
    tau: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))
        object.__setattr__(self, "tau", _positive("tau", self.tau))

    @property
    def expr(self):
        return f"burr(alpha={fmt_num(self.alpha)},tau={fmt_num(self.tau)})"

    @property
    def h_valid(self):
        return self.alpha <= 1 and self.tau <= 1

    @property
    def infinite_mean(self):
        return "yes" if self.alpha * self.tau <= 1 else "no"

    @property
    def tail_index(self):
        return self.alpha * self.tau

    def _sf(self, x):
        return np.exp(-self.alpha * np.log1p(np.power(x, self.tau)))

    def _cdf(self, x):
        return -np.expm1(-self.alpha * np.log1p(np.power(x, self.tau)))

    def _quantile(self, p):
        return np.power(np.expm1(-np.log1p(-p) / self.alpha), 1.0 / self.tau)

    def _isf(self, q):
        return np.power(np.expm1(-np.log(q) / self.alpha), 1.0 / self.tau)


def paralogistic(alpha: float) -> Burr:
    """Burr with alpha = tau."""
    return Burr(alpha, alpha)


def loglogistic(tau: float) -> Burr:
    """Burr with alpha = 1."""
    return Burr(1.0, tau)


@dataclass(frozen=True)
class InverseBurr(Distribution):
    """F(x) = (x**tau / (x**tau + 1))**alpha."""

    alpha: float
    tau: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))
        object.__setattr__(self, "tau", _positive("tau", self.tau))

    @property
    def expr(self):
        return f"invburr(alpha={fmt_num(self.alpha)},tau={fmt_num(self.tau)})"

    @property
    def h_valid(self):
        return self.tau <= 1

    @property
    def infinite_mean(self):
        return "yes" if self.tau <= 1 else "no"

    @property
    def tail_index(self):
        return self.tau

    def _logcdf(self, x):
        with np.errstate(divide="ignore", over="ignore"):
            return -self.alpha * np.log1p(np.power(x, -self.tau))

    def _cdf(self, x):
        return np.exp(self._logcdf(x))

    def _sf(self, x):
        return -np.expm1(self._logcdf(x))

    def _from_logp(self, logp):
        # x**tau = p**(1/alpha) / (1 - p**(1/alpha))
        a = logp / self.alpha
        with np.errstate(divide="ignore"):
            y = np.exp(a - np.log(-np.expm1(a)))
        return np.power(y, 1.0 / self.tau)

    def _quantile(self, p):
        return self._from_logp(np.log(p))

    def _isf(self, q):
        return self._from_logp(np.log1p(-q))

    def _h(self, x):
        return self.alpha * np.log1p(np.power(x, self.tau))


@dataclass(frozen=True)
class LogPareto(Distribution):
    """F(x) = 1 - (log(x + 1) + 1)**-alpha; slowly varying tail."""

    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))

    @property
    def expr(self):
        return f"logpareto(alpha={fmt_num(self.alpha)})"

    @property
    def h_valid(self):
        return self.alpha <= 1

    infinite_mean = "yes"
    tail_index = 0.0

    def _sf(self, x):
        return np.exp(-self.alpha * np.log1p(np.log1p(x)))

    def _cdf(self, x):
        return -np.expm1(-self.alpha * np.log1p(np.log1p(x)))

    def _quantile(self, p):
        with np.errstate(over="ignore"):
            return np.expm1(np.expm1(-np.log1p(-p) / self.alpha))

    def _isf(self, q):
        with np.errstate(over="ignore"):
            return np.expm1(np.expm1(-np.log(q) / self.alpha))


@dataclass(frozen=True)
class Stoppa(Distribution):
    """F(x) = (1 - (x + 1)**-alpha)**beta, a power of Pareto(alpha)."""

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))
        object.__setattr__(self, "beta", _positive("beta", self.beta))

    @property
    def expr(self):
        return f"stoppa(alpha={fmt_num(self.alpha)},beta={fmt_num(self.beta)})"

    @property
    def h_valid(self):
        return self.alpha <= 1

    @property
    def infinite_mean(self):
        return "yes" if self.alpha <= 1 else "no"

    @property
    def tail_index(self):
        return self.alpha

    def _logcdf(self, x):
        return self.beta * log1mexp(self.alpha * np.log1p(x))

    def _cdf(self, x):
        return np.exp(self._logcdf(x))

    def _sf(self, x):
        return -np.expm1(self._logcdf(x))

    def _from_logp(self, logp):
        # Pareto(alpha) quantile at p**(1/beta)
        return np.expm1(-np.log(-np.expm1(logp / self.beta)) / self.alpha)

    def _quantile(self, p):
        return self._from_logp(np.log(p))

    def _isf(self, q):
        with np.errstate(divide="ignore"):
            return self._from_logp(np.log1p(-q))


@dataclass(frozen=True)
class InverseGeometric(Distribution):
    """F(x) = exp(-c * ceil(1/x)) on (0, inf), F(inf) = 1.

    The law sits on {1/k : k >= 1} together with an atom of mass
    ``1 - exp(-c)`` at ``+inf``; h_F(x) = c * ceil(x).
    """

    c: float

    def __post_init__(self):
        object.__setattr__(self, "c", _positive("c", self.c))

    continuous = False
    infinite_mean = "yes"

    @property
    def expr(self):
        return f"invgeom(c={fmt_num(self.c)})"

    @property
    def h_valid(self):
        return True

    @property
    def inf_mass(self):
        return -math.expm1(-self.c)

    def _steps(self, x):
        # number k with x in [1/k, 1/(k-1)); a float equal to fl(1/k) is
        # read as the step point 1/k itself
        with np.errstate(divide="ignore"):
            r = 1.0 / x
            k = np.ceil(r)
            km1 = k - 1.0
            snap = (km1 >= 1) & (1.0 / np.where(km1 >= 1, km1, 1.0) == x)
        return np.where(snap, km1, k)

    def _logcdf(self, x):
        return -self.c * self._steps(x)

    def _cdf(self, x):
        return np.exp(self._logcdf(x))

    def _sf(self, x):
        return -np.expm1(self._logcdf(x))

    def _from_logp(self, logp):
        # largest integer k with exp(-c k) >= p, then t = 1/k (k = 0 -> inf)
        k = np.floor(-logp / self.c)
        for _ in range(2):  # repair floor() rounding in either direction
            k = np.where(-self.c * (k + 1) >= logp, k + 1, k)
            k = np.where((k >= 1) & (-self.c * k < logp), k - 1, k)
        with np.errstate(divide="ignore"):
            return np.where(k >= 1, 1.0 / np.maximum(k, 1.0), np.inf)

    def _quantile(self, p):
        return self._from_logp(np.log(p))

    def _isf(self, q):
        with np.errstate(divide="ignore"):
            return np.where(q >= 1, 0.0, self._from_logp(np.log1p(-q)))

    def _h(self, x):
        return self.c * np.ceil(x)


@dataclass(frozen=True)
class Deadly(Distribution):
    """P(X = 0) = 1 - p, P(X = inf) = p."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not (0 < p < 1):
            raise ValueError(f"p must lie in (0, 1), got {p}")
        object.__setattr__(self, "p", p)

    continuous = False
    infinite_mean = "yes"

    @property
    def expr(self):
        return f"deadly(p={fmt_num(self.p)})"

    @property
    def h_valid(self):
        return True

    @property
    def inf_mass(self):
        return self.p

    def _sf(self, x):
        return np.full(x.shape, self.p)

    def _cdf(self, x):
        return np.full(x.shape, 1.0 - self.p)

    def _logcdf(self, x):
        return np.full(x.shape, math.log1p(-self.p))

    def _quantile(self, p):
        return np.where(p <= 1.0 - self.p, 0.0, np.inf)

    def _isf(self, q):
        return np.where(q >= self.p, 0.0, np.inf)


# ---------------------------------------------------------------------------
# functional API
# ---------------------------------------------------------------------------

def cdf(dist: Distribution, x):
    return dist.cdf(x)


def sf(dist: Distribution, x):
    return dist.sf(x)


def quantile(dist: Distribution, p):
    return dist.quantile(p)


def h_f(dist: Distribution, x):
    return dist.h(x)


def sample(dist: Distribution, seed: int, m: int) -> np.ndarray:
    return dist.sample(seed, m)


def sample_mean_trajectory(dist: Distribution, seed: int, m: int) -> np.ndarray:
    """Running means of one sample path of length ``m``.

    For infinite-mean laws the path does not settle; this is the
    non-convergence picture used in reports.
    """
    if dist.inf_mass > 0:
        raise DomainError(f"{dist.expr} has an atom at +inf; running means are undefined")
    x = dist.sample(seed, m)
    return np.cumsum(x) / np.arange(1, x.size + 1)
