"""Closure operations that build new distributions from old ones.

Affine maps, powers of the CDF, independent maxima, non-decreasing convex
transforms, finite mixtures and generalized r-means of CDFs.  The nodes are
immutable, so a combinator tree can be shared freely between threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import logsumexp

from .distributions import Distribution, _bisect_smallest, fmt_num
from .grid import Grid, as_grid
from .weights import as_weights

__all__ = [
    "ScaleShift", "Power", "MaxOf", "ConvexTransform", "Mixture", "GeneralizedMean",
    "ConvexityError", "OrderingVerdict",
    "scale_shift", "power", "max_of", "convex_transform", "mixture",
    "generalized_r_mean", "check_stochastic_ordering", "recentre",
    "named_transform", "validate_convex",
]


def _combine_infinite_mean(children) -> str:
    flags = [c.infinite_mean for c in children]
    if "yes" in flags:
        return "yes"
    if all(f == "no" for f in flags):
        return "no"
    return "unknown"


def _min_tail(children) -> float | None:
    idx = [c.tail_index for c in children]
    return None if any(i is None for i in idx) else min(idx)


@dataclass(frozen=True, eq=False)
class ScaleShift(Distribution):
    """Law of ``a X + b``.  ``a = 0`` is the point mass at ``b``.

    The public constructor :func:`scale_shift` insists on ``b >= 0``; a
    negative ``b`` only appears through :func:`recentre`.
    """

    base: Distribution
    a: float
    b: float = 0.0

    @property
    def expr(self):
        return f"scale({self.base.expr},a={fmt_num(self.a)},b={fmt_num(self.b)})"

    @property
    def essinf(self):
        return self.b if self.a == 0 else self.a * self.base.essinf + self.b

    @property
    def esssup(self):
        return self.b if self.a == 0 else self.a * self.base.esssup + self.b

    @property
    def inf_mass(self):
        return 0.0 if self.a == 0 else self.base.inf_mass

    @property
    def continuous(self):
        return self.a > 0 and self.base.continuous

    @property
    def infinite_mean(self):
        return "no" if self.a == 0 else self.base.infinite_mean

    @property
    def tail_index(self):
        return None if self.a == 0 else self.base.tail_index

    @property
    def h_valid(self):
        return True if self.a == 0 else self.base.h_valid

    def _inner(self, x):
        return (x - self.b) / self.a

    def _cdf(self, x):
        if self.a == 0:
            return (x >= self.b).astype(float)
        return self.base.cdf(self._inner(x))

    def _sf(self, x):
        if self.a == 0:
            return (x < self.b).astype(float)
        return self.base.sf(self._inner(x))

    def _logcdf(self, x):
        if self.a == 0:
            return np.where(x >= self.b, 0.0, -np.inf)
        return self.base.logcdf(self._inner(x))

    def _quantile(self, p):
        if self.a == 0:
            return np.full(p.shape, float(self.b))
        return self.a * self.base.quantile(p) + self.b

    def _isf(self, q):
        if self.a == 0:
            return np.full(q.shape, float(self.b))
        return self.a * self.base.isf(q) + self.b


@dataclass(frozen=True, eq=False)
class Power(Distribution):
    """CDF ``F**beta``; for integer beta, the maximum of beta iid copies."""

    base: Distribution
    beta: float

    @property
    def expr(self):
        return f"power({self.base.expr},beta={fmt_num(self.beta)})"

    @property
    def essinf(self):
        return self.base.essinf

    @property
    def inf_mass(self):
        return -math.expm1(self.beta * math.log1p(-self.base.inf_mass))

    @property
    def continuous(self):
        return self.base.continuous

    @property
    def infinite_mean(self):
        return self.base.infinite_mean

    @property
    def tail_index(self):
        return self.base.tail_index

    @property
    def h_valid(self):
        return self.base.h_valid

    def _logcdf(self, x):
        return self.beta * self.base.logcdf(x)

    def _cdf(self, x):
        return np.exp(self._logcdf(x))

    def _sf(self, x):
        return -np.expm1(self._logcdf(x))

    def _quantile(self, p):
        return self.base.quantile(np.power(p, 1.0 / self.beta))

    def _isf(self, q):
        with np.errstate(divide="ignore"):
            return self.base.isf(-np.expm1(np.log1p(-q) / self.beta))

    def _h(self, x):
        return self.beta * self.base.h(x)


@dataclass(frozen=True, eq=False)
class MaxOf(Distribution):
    """Maximum of two independent variables: CDF ``F1 * F2``."""

    left: Distribution
    right: Distribution

    @property
    def expr(self):
        return f"max({self.left.expr},{self.right.expr})"

    @property
    def essinf(self):
        return max(self.left.essinf, self.right.essinf)

    @property
    def inf_mass(self):
        return 1.0 - (1.0 - self.left.inf_mass) * (1.0 - self.right.inf_mass)

    @property
    def continuous(self):
        return self.left.continuous and self.right.continuous

    @property
    def infinite_mean(self):
        return _combine_infinite_mean((self.left, self.right))

    @property
    def tail_index(self):
        return _min_tail((self.left, self.right))

    @property
    def h_valid(self):
        a, b = self.left.h_valid, self.right.h_valid
        return True if (a and b) else None

    def _cdf(self, x):
        return self.left.cdf(x) * self.right.cdf(x)

    def _sf(self, x):
        s1, s2 = self.left.sf(x), self.right.sf(x)
        return s1 + s2 - s1 * s2

    def _logcdf(self, x):
        return self.left.logcdf(x) + self.right.logcdf(x)

    def _h(self, x):
        return self.left.h(x) + self.right.h(x)


class ConvexityError(ValueError):
    """A user-supplied transform failed the numerical convexity gate."""

    def __init__(self, message: str, witness: tuple[float, float, float] | None = None):
        super().__init__(message)
        self.witness = witness


def validate_convex(f: Callable, grid: Grid | None = None, rtol: float = 1e-9) -> None:
    """Midpoint-convexity gate for a transform ``f`` on ``[0, inf)``.

    Checks ``f(0) = 0``, monotonicity, non-constancy and, for every pair of
    grid points (and every pair ``(0, x)``), ``f((x+y)/2) <= (f(x)+f(y))/2``
    up to ``rtol * max(1, |rhs|)``.  Necessary, not sufficient, for convexity.
    Raises :class:`ConvexityError` carrying ``(x, y, gap)`` on failure.
    """
    g = np.concatenate(([0.0], as_grid(grid).values()))
    with np.errstate(over="ignore", invalid="ignore"):
        fg = np.asarray(f(g), dtype=float)
    if abs(fg[0]) > 1e-12:
        raise ConvexityError(f"f(0) = {fg[0]!r}, expected 0", (0.0, 0.0, float(fg[0])))
    if np.any(np.isnan(fg)):
        raise ConvexityError("f returned NaN on the validation grid")
    with np.errstate(invalid="ignore"):
        drops = np.flatnonzero(np.diff(fg) < 0)
    if drops.size:
        i = drops[0]
        raise ConvexityError(f"f decreases between {float(g[i])!r} and {float(g[i + 1])!r}",
                             (float(g[i]), float(g[i + 1]), float(fg[i + 1] - fg[i])))
    if fg[-1] == fg[0]:
        raise ConvexityError("f is constant on the validation grid")
    i, j = np.triu_indices(g.size, k=1)
    with np.errstate(over="ignore", invalid="ignore"):
        lhs = np.asarray(f(0.5 * (g[i] + g[j])), dtype=float)
        rhs = 0.5 * (fg[i] + fg[j])
        gap = rhs - lhs
        bad = np.isfinite(rhs) & (gap < -rtol * np.maximum(1.0, np.abs(rhs)))
    if bad.any():
        k = int(np.argmin(np.where(bad, gap, np.inf)))
        raise ConvexityError(
            f"midpoint convexity fails at x={float(g[i[k]])!r}, y={float(g[j[k]])!r} "
            f"(gap {float(gap[k])!r})",
            (float(g[i[k]]), float(g[j[k]]), float(gap[k])))


def _fmt_params(params: dict) -> str:
    return ",".join(f"{k}={fmt_num(v)}" for k, v in params.items())


def named_transform(name: str, **params) -> tuple[Callable, Callable, str]:
    """Closed-form convex transforms usable from expressions.

    ``pow`` (x**k, k >= 1), ``shiftpow`` ((x+1)**k - 1, k >= 1),
    ``expm1`` (exp(s x) - 1, s > 0) and ``linear`` (a x, a > 0).
    Returns ``(f, f_inverse, label)``.
    """
    if name == "pow":
        k = float(params.pop("k", 2.0))
        if k < 1:
            raise ValueError("pow transform needs k >= 1")
        f = lambda x: np.power(x, k)  # noqa: E731
        finv = lambda y: np.power(y, 1.0 / k)  # noqa: E731
        p = {"k": k}
    elif name == "shiftpow":
        k = float(params.pop("k"))
        if k < 1:
            raise ValueError("shiftpow transform needs k >= 1")
        f = lambda x: np.expm1(k * np.log1p(x))  # noqa: E731
        finv = lambda y: np.expm1(np.log1p(y) / k)  # noqa: E731
        p = {"k": k}
    elif name == "expm1":
        s = float(params.pop("s", 1.0))
        if s <= 0:
            raise ValueError("expm1 transform needs s > 0")
        f = lambda x: np.expm1(s * np.asarray(x, dtype=float))  # noqa: E731
        finv = lambda y: np.log1p(y) / s  # noqa: E731
        p = {"s": s}
    elif name == "linear":
        a = float(params.pop("a"))
        if a <= 0:
            raise ValueError("linear transform needs a > 0")
        f = lambda x: a * np.asarray(x, dtype=float)  # noqa: E731
        finv = lambda y: np.asarray(y, dtype=float) / a  # noqa: E731
        p = {"a": a}
    else:
        raise ValueError(f"unknown transform {name!r}")
    if params:
        raise ValueError(f"unexpected parameters for {name}: {sorted(params)}")
    label = name if not p else f"{name},{_fmt_params(p)}"
    return f, finv, label


@dataclass(frozen=True, eq=False)
class ConvexTransform(Distribution):
    """Law of ``f(X)`` for a non-decreasing convex ``f`` with ``f(0) = 0``.

    ``cdf(x) = F(f_inv(x))`` with the right-continuous generalized inverse
    ``f_inv(y) = inf{x >= 0 : f(x) > y}``; when no closed form is supplied
    it is found by bisection on ``f``.
    """

    base: Distribution
    f: Callable = field(repr=False)
    f_inv: Callable | None = field(default=None, repr=False)
    label: str = "custom"

    @property
    def expr(self):
        return f"convex({self.base.expr},f={self.label})"

    @property
    def essinf(self):
        return float(self._f(np.asarray(self.base.essinf)))

    @property
    def inf_mass(self):
        return self.base.inf_mass

    @property
    def continuous(self):
        return self.base.continuous

    @property
    def infinite_mean(self):
        return "yes" if self.base.infinite_mean == "yes" else "unknown"

    @property
    def h_valid(self):
        return self.base.h_valid

    def _f(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            return np.where(np.isposinf(x), np.inf, self.f(np.where(np.isposinf(x), 0.0, x)))

    def inverse(self, y):
        """Right-continuous generalized inverse of ``f``."""
        y = np.asarray(y, dtype=float)
        if self.f_inv is not None:
            with np.errstate(over="ignore", invalid="ignore"):
                return np.asarray(self.f_inv(y), dtype=float)
        yf = y.ravel()
        t = _bisect_smallest(lambda t: self._f(t) > yf, yf.size, allow_inf=True)
        return t.reshape(y.shape)

    def _cdf(self, x):
        return self.base.cdf(self.inverse(x))

    def _sf(self, x):
        return self.base.sf(self.inverse(x))

    def _logcdf(self, x):
        return self.base.logcdf(self.inverse(x))

    def _quantile(self, p):
        return self._f(self.base.quantile(p))

    def _isf(self, q):
        return self._f(self.base.isf(q))


@dataclass(frozen=True, eq=False)
class Mixture(Distribution):
    """CDF ``sum_i w_i F_i``."""

    children: tuple
    weights: np.ndarray = field(repr=False)

    @property
    def expr(self):
        parts = ",".join(f"{fmt_num(w)}:{c.expr}" for w, c in zip(self.weights, self.children))
        return f"mix({parts})"

    @property
    def essinf(self):
        return min(c.essinf for c in self.children)

    @property
    def inf_mass(self):
        return float(sum(w * c.inf_mass for w, c in zip(self.weights, self.children)))

    @property
    def continuous(self):
        return all(c.continuous for c in self.children)

    @property
    def infinite_mean(self):
        return _combine_infinite_mean(self.children)

    @property
    def tail_index(self):
        return _min_tail(self.children)

    def _cdf(self, x):
        return sum(w * c.cdf(x) for w, c in zip(self.weights, self.children))

    def _sf(self, x):
        return sum(w * c.sf(x) for w, c in zip(self.weights, self.children))


@dataclass(frozen=True, eq=False)
class GeneralizedMean(Distribution):
    """CDF ``(sum_i w_i F_i**r)**(1/r)``; ``r = 0`` is ``prod_i F_i**w_i``.

    Evaluated in log space: ``log1p(sum_i w_i expm1(r log F_i)) / r`` where the
    mean is above one half (keeps the survival function accurate in the far
    tail) and a log-sum-exp of ``r log F_i + log w_i`` below it (keeps small
    CDF values accurate).
    """

    children: tuple
    weights: np.ndarray = field(repr=False)
    r: float = 0.0

    @property
    def expr(self):
        parts = ",".join(f"{fmt_num(w)}:{c.expr}" for w, c in zip(self.weights, self.children))
        return f"gmean(r={fmt_num(self.r)},{parts})"

    @property
    def essinf(self):
        vals = [c.essinf for c in self.children]
        return max(vals) if self.r == 0 else min(vals)

    @property
    def inf_mass(self):
        lm = np.array([math.log1p(-c.inf_mass) if c.inf_mass < 1 else -math.inf
                       for c in self.children])
        return float(-np.expm1(self._combine(lm[:, None]))[0])

    @property
    def continuous(self):
        return all(c.continuous for c in self.children)

    @property
    def infinite_mean(self):
        return _combine_infinite_mean(self.children)

    @property
    def tail_index(self):
        return _min_tail(self.children)

    def _combine(self, logs: np.ndarray) -> np.ndarray:
        w = self.weights.reshape((-1,) + (1,) * (logs.ndim - 1))
        if self.r == 0:
            with np.errstate(invalid="ignore"):
                return np.sum(w * logs, axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            upper = np.log1p(np.sum(w * np.expm1(self.r * logs), axis=0)) / self.r
            lower = logsumexp(self.r * logs + np.log(w), axis=0) / self.r
        return np.where(self.r * lower < -math.log(2.0), lower, upper)

    def _logcdf(self, x):
        return self._combine(np.stack([c.logcdf(x) for c in self.children]))

    def _cdf(self, x):
        return np.exp(self._logcdf(x))

    def _sf(self, x):
        return -np.expm1(self._logcdf(x))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def scale_shift(dist: Distribution, a: float, b: float = 0.0) -> Distribution:
    a, b = float(a), float(b)
    if not (a >= 0 and math.isfinite(a)):
        raise ValueError(f"scale a must be finite and >= 0, got {a}")
    if not (b >= 0 and math.isfinite(b)):
        raise ValueError(f"shift b must be finite and >= 0, got {b}")
    return ScaleShift(dist, a, b)


def recentre(dist: Distribution) -> Distribution:
    """Shift ``dist`` so that its essential infimum is 0."""
    e = dist.essinf
    if e == 0:
        return dist
    if not math.isfinite(e):
        raise ValueError(f"cannot recentre {dist.expr}: essinf = {e}")
    return ScaleShift(dist, 1.0, -e)


def power(dist: Distribution, beta: float) -> Distribution:
    beta = float(beta)
    if not (beta > 0 and math.isfinite(beta)):
        raise ValueError(f"power beta must be positive, got {beta}")
    return Power(dist, beta)


def max_of(dist1: Distribution, dist2: Distribution) -> Distribution:
    return MaxOf(dist1, dist2)


def convex_transform(dist: Distribution, f: Callable | str, f_inv: Callable | None = None,
                     *, label: str | None = None, validate: bool = True,
                     grid: Grid | None = None, **params) -> Distribution:
    """Law of ``f(X)``.  ``f`` is a vectorised callable or the name of a
    :func:`named_transform`; user callables pass through :func:`validate_convex`
    unless ``validate=False``."""
    if isinstance(f, str):
        f, f_inv, label = named_transform(f, **params)
    elif params:
        raise TypeError(f"unexpected keyword arguments {sorted(params)}")
    if validate:
        validate_convex(f, grid)
    if label is None:
        label = getattr(f, "__name__", "custom")
        if not label.isidentifier():
            label = "custom"
    return ConvexTransform(dist, f, f_inv, label)


def mixture(dists: Sequence[Distribution], weights) -> Distribution:
    w = as_weights(weights, len(dists))
    return Mixture(tuple(dists), w)


def generalized_r_mean(dists: Sequence[Distribution], weights, r: float) -> Distribution:
    r = float(r)
    if not (r >= 0 and math.isfinite(r)):
        raise ValueError(f"r must be a finite number >= 0, got {r}")
    w = as_weights(weights, len(dists))
    return GeneralizedMean(tuple(dists), w, r)


@dataclass
class OrderingVerdict:
    ordered: bool
    #: indices from stochastically smallest to largest, when ordered
    order: list[int] | None
    #: crossing evidence when not ordered
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {"ordered": self.ordered, "order": self.order, "witness": self.witness}


def check_stochastic_ordering(dists: Sequence[Distribution], grid: Grid | None = None,
                              tol: float = 1e-12) -> OrderingVerdict:
    """Look for a permutation with ``F_(1) >= F_(2) >= ...`` on the grid.

    A larger CDF means stochastically smaller, so the returned order lists
    the distributions from smallest to largest in ``<=_st``.
    """
    if len(dists) < 2:
        raise ValueError("need at least two distributions")
    x = as_grid(grid).values()
    F = np.stack([d.cdf(x) for d in dists])
    # any total order on the grid must agree with the ordering by total mass
    order = sorted(range(len(dists)), key=lambda i: (-F[i].sum(), i))
    for a, b in zip(order, order[1:]):
        diff = F[a] - F[b]
        bad = np.flatnonzero(diff < -tol)
        if bad.size:
            k = bad[0]
            other = np.flatnonzero(diff > tol)
            return OrderingVerdict(False, None, {
                "pair": [a, b],
                "x": float(x[k]),
                "cdf": [float(F[a, k]), float(F[b, k])],
                "opposite_x": float(x[other[0]]) if other.size else None,
            })
    return OrderingVerdict(True, order)
