from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from heavysd import dependence as dp
from heavysd.distributions import Burr, Deadly, Frechet, Pareto

P1 = Pareto(1.0)


def test_countermonotone_row_identity():
    x = dp.sample_joint(dp.countermonotone(), [P1, P1], 3, 100_000)
    np.testing.assert_allclose(1 / (x[:, 0] + 1) + 1 / (x[:, 1] + 1), 1.0, atol=1e-12)


def test_clayton_minus_one_is_countermonotone():
    x = dp.sample_joint(dp.clayton(-1.0), [P1, P1], 3, 100_000)
    np.testing.assert_allclose(1 / (x[:, 0] + 1) + 1 / (x[:, 1] + 1), 1.0, atol=1e-12)


@pytest.mark.parametrize("model,expected", [(dp.independent(), 1 - 0.7**2),
                                            (dp.comonotone(), 0.3)])
def test_deadly_infinite_sums(model, expected):
    m = 10**6
    x = dp.sample_joint(model, [Deadly(0.3)] * 2, 11, m)
    frac = np.isinf(x.sum(axis=1)).mean()
    assert abs(frac - expected) <= 3 * math.sqrt(expected * (1 - expected) / m)


@pytest.mark.parametrize("model", [dp.independent(), dp.countermonotone(), dp.gaussian(-0.4),
                                   dp.clayton(-0.5), dp.comonotone()], ids=lambda m: m.expr)
def test_marginal_fidelity(model):
    m, delta = 200_000, 1e-3
    margs = [Pareto(1.0), Burr(0.8, 0.9)]
    x = dp.sample_joint(model, margs, 5, m)
    eps = math.sqrt(math.log(2 / delta) / (2 * m))
    for j, d in enumerate(margs):
        s = np.sort(x[:, j])
        f = d.cdf(s)
        i = np.arange(1, m + 1)
        assert max(np.max(i / m - f), np.max(f - (i - 1) / m)) <= eps


def test_reproducible_and_worker_invariant():
    a = dp.sample_joint(dp.gaussian(-0.3), [P1] * 3, 9, 150_000)
    b = dp.sample_joint(dp.gaussian(-0.3), [P1] * 3, 9, 150_000, workers=4)
    assert np.array_equal(a, b)


def _empirical_copula(u, v, grid):
    return np.array([[np.mean((u <= a) & (v <= b)) for b in grid] for a in grid])


def test_clayton_near_zero_is_independent():
    m = 400_000
    x = dp.sample_joint(dp.clayton(-1e-3), [P1, P1], 4, m)
    u, v = P1.cdf(x[:, 0]), P1.cdf(x[:, 1])
    g = np.linspace(0.1, 0.9, 9)
    c = _empirical_copula(u, v, g)
    assert np.max(np.abs(c - np.outer(g, g))) <= 1e-2


def test_clayton_matches_its_copula():
    m, theta = 400_000, -0.5
    x = dp.sample_joint(dp.clayton(theta), [P1, P1], 4, m)
    u, v = P1.cdf(x[:, 0]), P1.cdf(x[:, 1])
    g = np.linspace(0.1, 0.9, 9)
    c = _empirical_copula(u, v, g)
    ref = dp.clayton_cdf(g[:, None], g[None, :], theta)
    assert np.max(np.abs(c - ref)) <= 5e-3


@given(u=st.floats(0.01, 0.99), v=st.floats(0.01, 0.99), theta=st.floats(-1.0, -1e-3))
def test_clayton_copula_is_nlod(u, v, theta):
    assert dp.clayton_cdf(u, v, theta) <= u * v + 1e-15


def test_nlod_verifier_oracles():
    m = 200_000
    for model, verdict in [(dp.countermonotone(), "pass"), (dp.independent(), "pass"),
                           (dp.comonotone(), "fail")]:
        x = dp.sample_joint(model, [P1, P1], 8, m)
        rep = dp.verify_nlod_empirical(x)
        assert rep.verdict == verdict, model.expr
    # analytic copula comparison: min(u,v) - uv at u=v=0.5 is 0.25
    x = dp.sample_joint(dp.comonotone(), [P1, P1], 8, m)
    assert dp.verify_nlod_empirical(x).worst_margin == pytest.approx(-0.25, abs=0.01)
    x = dp.sample_joint(dp.independent(), [P1, P1], 8, m)
    assert abs(dp.verify_nlod_empirical(x).worst_margin) < 0.01


def test_gaussian_validation():
    with pytest.raises(ValueError):
        dp.sample_joint(dp.gaussian(-0.6), [P1] * 3, 1, 10)
    dp.sample_joint(dp.gaussian(-0.5), [P1] * 3, 1, 10)
    with pytest.raises(ValueError):
        dp.gaussian(corr=[[1.0, 0.9, 0.9], [0.9, 1.0, -0.9], [0.9, -0.9, 1.0]])
    with pytest.raises(ValueError):
        dp.gaussian(corr=[[1.0, 0.2], [0.3, 1.0]])
    g = dp.gaussian(corr=[[1.0, -1.0], [-1.0, 1.0]])
    x = dp.sample_joint(g, [P1, P1], 1, 1000)
    # the 1e-12 diagonal jitter leaves noise of order sqrt(2e-12)
    np.testing.assert_allclose(1 / (x[:, 0] + 1) + 1 / (x[:, 1] + 1), 1.0, atol=1e-5)


def test_dimension_checks():
    with pytest.raises(ValueError):
        dp.sample_joint(dp.countermonotone(), [P1] * 3, 1, 10)
    with pytest.raises(ValueError):
        dp.sample_joint(dp.clayton(-0.5), [P1] * 3, 1, 10)
    with pytest.raises(ValueError):
        dp.clayton(0.5)


def test_nlod_labels():
    assert dp.independent().nlod == "guaranteed"
    assert dp.countermonotone().nlod == "guaranteed"
    assert dp.gaussian(-0.4).nlod == "guaranteed"
    assert dp.gaussian(0.4).nlod == "no"
    assert dp.clayton(-0.5).nlod == "empirical"
    assert dp.comonotone().nlod == "no"


def test_gaussian_negative_correlation_lowers_joint_cdf():
    x = dp.sample_joint(dp.gaussian(-0.4), [Frechet(1.0)] * 2, 2, 200_000)
    assert dp.verify_nlod_empirical(x).verdict == "pass"
