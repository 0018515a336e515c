"""Parsers for the distribution, dependence and weight mini-languages.

Distributions::

    pareto(alpha=1)  frechet(alpha=0.8)  gpd(xi=1,beta=1)  burr(alpha=0.8,tau=0.9)
    invburr(alpha=2,tau=0.8)  logpareto(alpha=0.9)  stoppa(alpha=0.9,beta=2)
    invgeom(c=1)  deadly(p=0.3)  paralogistic(alpha=0.8)  loglogistic(tau=0.9)
    scale(<d>,a=2,b=0)  power(<d>,beta=2)  max(<d>,<d>)
    convex(<d>,f=pow,k=2)  mix(0.3:<d>,0.7:<d>)  gmean(r=0,0.5:<d>,0.5:<d>)

Lists of distributions are separated by ``;``.  Dependence models are
``indep``, ``countermono``, ``comono``, ``gauss(rho=-0.4)``,
``gauss(corr=1 -0.2;-0.2 1)`` and ``clayton(theta=-0.5)``.  Every syntax
error names the offending token and its offset.
"""
from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from . import combinators as cb
from . import distributions as ds
from .dependence import DependenceModel
from .weights import as_weights

__all__ = ["ExpressionError", "parse_dist", "parse_dists", "parse_dep", "parse_weights",
           "FAMILIES"]


class ExpressionError(ValueError):
    """Malformed or invalid expression; ``token`` and ``pos`` locate the problem."""

    def __init__(self, message: str, token: str | None = None, pos: int | None = None):
        where = f" at offset {pos}" if pos is not None else ""
        tok = f" (offending token {token!r})" if token is not None else ""
        super().__init__(f"{message}{tok}{where}")
        self.token = token
        self.pos = pos


FAMILIES = {
    "pareto": (ds.Pareto, ("alpha",)),
    "frechet": (ds.Frechet, ("alpha",)),
    "gpd": (ds.GeneralizedPareto, ("xi", "beta")),
    "burr": (ds.Burr, ("alpha", "tau")),
    "invburr": (ds.InverseBurr, ("alpha", "tau")),
    "logpareto": (ds.LogPareto, ("alpha",)),
    "stoppa": (ds.Stoppa, ("alpha", "beta")),
    "invgeom": (ds.InverseGeometric, ("c",)),
    "deadly": (ds.Deadly, ("p",)),
    "paralogistic": (ds.paralogistic, ("alpha",)),
    "loglogistic": (ds.loglogistic, ("tau",)),
}
TRANSFORM_PARAMS = {"pow": ("k",), "shiftpow": ("k",), "expm1": ("s",), "linear": ("a",)}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>[-+]?(?:\d+\.?\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|inf))
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(),=:;/])
""", re.VERBOSE)


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if mt is None:
                raise ExpressionError("unexpected character", text[pos], pos)
            kind = mt.lastgroup
            if kind != "ws":
                self.items.append((kind, mt.group(), pos))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else ("end", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value:
            raise ExpressionError(f"expected {value!r}", val or "<end>", pos)

    def number(self) -> float:
        kind, val, pos = self.next()
        if kind != "num":
            raise ExpressionError("expected a number", val or "<end>", pos)
        return float(val)

    def name(self) -> tuple[str, int]:
        kind, val, pos = self.next()
        if kind != "name":
            raise ExpressionError("expected a name", val or "<end>", pos)
        return val, pos

    def at_end(self) -> bool:
        return self.i >= len(self.items)


def _kwargs(tk: _Tokens, allowed: tuple, owner: str, first: bool = True) -> dict:
    """Parse ``key=number`` pairs until ``)``; a leading comma is expected unless ``first``."""
    out: dict = {}
    while tk.peek()[1] != ")":
        if tk.peek()[0] == "end":
            raise ExpressionError("expected ')'", "<end>", tk.peek()[2])
        if not first:
            tk.expect(",")
        first = False
        key, pos = tk.name()
        if key not in allowed:
            raise ExpressionError(f"unknown parameter for {owner}", key, pos)
        if key in out:
            raise ExpressionError(f"duplicate parameter for {owner}", key, pos)
        tk.expect("=")
        out[key] = tk.number()
    return out


def _build(ctor, kwargs, token: str, pos: int):
    try:
        return ctor(**kwargs)
    except TypeError as exc:
        raise ExpressionError(f"bad arguments: {exc}", token, pos) from None
    except ValueError as exc:
        raise ExpressionError(f"invalid parameters: {exc}", token, pos) from None


def _weighted_children(tk: _Tokens) -> tuple[list, list]:
    ws, ch = [], []
    while True:
        ws.append(tk.number())
        tk.expect(":")
        ch.append(_dist(tk))
        if tk.peek()[1] != ",":
            break
        tk.next()
    return ws, ch


def _dist(tk: _Tokens) -> ds.Distribution:
    name, pos = tk.name()
    tk.expect("(")
    if name in FAMILIES:
        ctor, params = FAMILIES[name]
        kw = _kwargs(tk, params, name)
        tk.expect(")")
        return _build(ctor, kw, name, pos)
    if name == "scale":
        base = _dist(tk)
        kw = _kwargs(tk, ("a", "b"), name, first=False)
        tk.expect(")")
        if "a" not in kw:
            raise ExpressionError("scale needs a=", name, pos)
        return _build(lambda a, b=0.0: cb.scale_shift(base, a, b), kw, name, pos)
    if name == "power":
        base = _dist(tk)
        kw = _kwargs(tk, ("beta",), name, first=False)
        tk.expect(")")
        return _build(lambda beta: cb.power(base, beta), kw, name, pos)
    if name == "max":
        left = _dist(tk)
        tk.expect(",")
        right = _dist(tk)
        tk.expect(")")
        return cb.max_of(left, right)
    if name == "convex":
        base = _dist(tk)
        tk.expect(",")
        key, kpos = tk.name()
        if key != "f":
            raise ExpressionError("convex expects f=<transform>", key, kpos)
        tk.expect("=")
        fname, fpos = tk.name()
        if fname not in TRANSFORM_PARAMS:
            raise ExpressionError("unknown transform", fname, fpos)
        kw = _kwargs(tk, TRANSFORM_PARAMS[fname], fname, first=False)
        tk.expect(")")
        return _build(lambda **p: cb.convex_transform(base, fname, **p), kw, fname, fpos)
    if name == "mix":
        ws, ch = _weighted_children(tk)
        tk.expect(")")
        return _build(lambda: cb.mixture(ch, ws), {}, name, pos)
    if name == "gmean":
        key, kpos = tk.name()
        if key != "r":
            raise ExpressionError("gmean expects r= first", key, kpos)
        tk.expect("=")
        r = tk.number()
        tk.expect(",")
        ws, ch = _weighted_children(tk)
        tk.expect(")")
        return _build(lambda: cb.generalized_r_mean(ch, ws, r), {}, name, pos)
    raise ExpressionError("unknown distribution", name, pos)


def parse_dist(text: str) -> ds.Distribution:
    """Parse one distribution expression."""
    tk = _Tokens(text)
    d = _dist(tk)
    if not tk.at_end():
        kind, val, pos = tk.peek()
        raise ExpressionError("trailing input", val, pos)
    return d


def parse_dists(text: str) -> list[ds.Distribution]:
    """Parse a ``;``-separated list of distribution expressions."""
    tk = _Tokens(text)
    out = [_dist(tk)]
    while not tk.at_end():
        tk.expect(";")
        out.append(_dist(tk))
    return out


def parse_dep(text: str) -> DependenceModel:
    """Parse a dependence-model expression."""
    tk = _Tokens(text)
    name, pos = tk.name()
    if name in ("indep", "countermono", "comono"):
        if tk.peek()[1] == "(":
            tk.next()
            tk.expect(")")
        model = DependenceModel(name)
    elif name == "clayton":
        tk.expect("(")
        kw = _kwargs(tk, ("theta",), name)
        tk.expect(")")
        if "theta" not in kw:
            raise ExpressionError("clayton needs theta=", name, pos)
        model = _build(lambda theta: DependenceModel("clayton", theta=theta), kw, name, pos)
    elif name == "gauss":
        tk.expect("(")
        key, kpos = tk.name()
        tk.expect("=")
        if key == "rho":
            rho = tk.number()
            model = _build(lambda: DependenceModel("gauss", rho=rho), {}, name, pos)
        elif key == "corr":
            rows, row = [], []
            while tk.peek()[1] != ")":
                if tk.peek()[1] == ";":
                    tk.next()
                    rows.append(row)
                    row = []
                    continue
                row.append(tk.number())
            rows.append(row)
            if len({len(r) for r in rows}) != 1:
                raise ExpressionError("ragged correlation matrix", key, kpos)
            model = _build(lambda: DependenceModel("gauss", corr=np.array(rows)), {}, name, pos)
        else:
            raise ExpressionError("gauss expects rho= or corr=", key, kpos)
        tk.expect(")")
    else:
        raise ExpressionError("unknown dependence model", name, pos)
    if not tk.at_end():
        kind, val, p = tk.peek()
        raise ExpressionError("trailing input", val, p)
    return model


def parse_weights(text: str, n: int | None = None) -> np.ndarray:
    """Parse ``0.5,0.5`` or ``1/3,1/3,1/3`` into a validated weight vector."""
    parts = [p.strip() for p in text.split(",")]
    vals = []
    pos = 0
    for p in parts:
        try:
            vals.append(float(Fraction(p)) if "/" in p else float(p))
        except (ValueError, ZeroDivisionError):
            raise ExpressionError("bad weight", p, text.find(p, pos)) from None
        pos += len(p) + 1
    try:
        return as_weights(vals, n)
    except ValueError as exc:
        raise ExpressionError(str(exc)) from None
