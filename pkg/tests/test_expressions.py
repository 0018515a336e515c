from __future__ import annotations

import numpy as np
import pytest

from heavysd.dependence import DependenceModel
from heavysd.distributions import Burr, Pareto
from heavysd.expressions import (ExpressionError, parse_dep, parse_dist, parse_dists,
                                 parse_weights)

ROUND_TRIP = [
    "pareto(alpha=1)", "frechet(alpha=0.8)", "gpd(xi=1,beta=2)", "burr(alpha=0.8,tau=0.9)",
    "invburr(alpha=2,tau=0.8)", "logpareto(alpha=0.9)", "stoppa(alpha=0.9,beta=2)",
    "invgeom(c=1)", "deadly(p=0.3)", "scale(pareto(alpha=1),a=2,b=1)",
    "power(pareto(alpha=0.8),beta=2)", "max(pareto(alpha=1),frechet(alpha=0.8))",
    "convex(pareto(alpha=1),f=pow,k=2)", "mix(0.3:pareto(alpha=1),0.7:pareto(alpha=0.5))",
    "gmean(r=0,0.5:pareto(alpha=0.7),0.5:burr(alpha=0.8,tau=0.9))",
]


@pytest.mark.parametrize("text", ROUND_TRIP)
def test_round_trip(text):
    d = parse_dist(text)
    again = parse_dist(d.expr)
    assert again.expr == d.expr
    x = np.geomspace(1e-3, 1e3, 7)
    np.testing.assert_array_equal(again.cdf(x), d.cdf(x))


def test_values():
    assert parse_dist(" pareto( alpha = 1 ) ").cdf(1.0) == Pareto(1.0).cdf(1.0)
    b = parse_dists("pareto(alpha=1); burr(alpha=0.8,tau=0.9)")[1]
    assert b.cdf(2.0) == Burr(0.8, 0.9).cdf(2.0)


@pytest.mark.parametrize("text,token", [
    ("pareto(beta=1)", "beta"),
    ("nosuch(alpha=1)", "nosuch"),
    ("pareto(alpha=1", "<end>"),
    ("pareto(alpha=1) x", "x"),
    ("pareto(alpha=x)", "x"),
    ("pareto(alpha=1,alpha=2)", "alpha"),
    ("pareto(alpha=-1)", "pareto"),
    ("pareto(alpha=1)#", "#"),
    ("convex(pareto(alpha=1),f=sin)", "sin"),
])
def test_errors_name_token(text, token):
    with pytest.raises(ExpressionError) as info:
        parse_dist(text)
    assert info.value.token == token
    assert repr(token) in str(info.value)
    assert info.value.pos is not None


def test_dependence_models():
    assert parse_dep("indep").kind == "indep"
    assert parse_dep("countermono").nlod == "guaranteed"
    assert parse_dep("comono").nlod == "no"
    g = parse_dep("gauss(rho=-0.4)")
    assert g.rho == -0.4
    c = parse_dep("gauss(corr=1 -0.2;-0.2 1)")
    np.testing.assert_array_equal(np.asarray(c.corr), [[1, -0.2], [-0.2, 1]])
    assert parse_dep("clayton(theta=-0.5)").expr == DependenceModel("clayton", theta=-0.5).expr
    for bad in ("clayton(theta=2)", "gauss(rho=2)", "copula", "gauss(corr=1 0;0)"):
        with pytest.raises(ExpressionError):
            parse_dep(bad)


def test_weights():
    np.testing.assert_allclose(parse_weights("1/3,1/3,1/3"), [1 / 3] * 3)
    np.testing.assert_array_equal(parse_weights("0.5, 0.5", 2), [0.5, 0.5])
    for bad in ("0.5,0.4", "a,b", "0.5,0.5,0"[:3], "1/0,1"):
        with pytest.raises(ExpressionError):
            parse_weights(bad)
    with pytest.raises(ExpressionError):
        parse_weights("0.5,0.5", 3)
