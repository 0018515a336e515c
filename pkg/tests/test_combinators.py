from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from heavysd import combinators as cb
from heavysd.distributions import Burr, Deadly, Frechet, LogPareto, Pareto, Stoppa
from heavysd.grid import Grid

GRID = np.geomspace(1e-6, 1e6, 200)


def test_scale_shift_examples():
    d = cb.scale_shift(Pareto(1.0), 2.0, 0.0)
    assert d.quantile(0.5) == pytest.approx(2.0)
    pm = cb.scale_shift(Pareto(1.0), 0.0, 5.0)
    assert pm.cdf(4.9) == 0.0 and pm.cdf(5.0) == 1.0
    ident = cb.scale_shift(Pareto(1.0), 1.0, 0.0)
    np.testing.assert_array_equal(ident.cdf(GRID), Pareto(1.0).cdf(GRID))
    with pytest.raises(ValueError):
        cb.scale_shift(Pareto(1.0), -1.0, 0.0)
    with pytest.raises(ValueError):
        cb.scale_shift(Pareto(1.0), 1.0, -1.0)


def test_shift_changes_essinf_and_recentre_undoes_it():
    d = cb.scale_shift(Pareto(1.0), 1.0, 3.0)
    assert d.essinf == 3.0
    r = cb.recentre(d)
    np.testing.assert_allclose(r.cdf(GRID), Pareto(1.0).cdf(GRID), rtol=1e-12, atol=1e-15)


def test_power_examples():
    assert cb.power(Pareto(1.0), 2.0).cdf(1.0) == pytest.approx(0.25)
    np.testing.assert_allclose(cb.power(Pareto(0.8), 1.0).cdf(GRID), Pareto(0.8).cdf(GRID),
                               rtol=1e-14)
    np.testing.assert_allclose(cb.power(Pareto(0.8), 1.5).cdf(GRID), Stoppa(0.8, 1.5).cdf(GRID),
                               rtol=1e-12, atol=1e-300)
    with pytest.raises(ValueError):
        cb.power(Pareto(1.0), 0.0)


@given(p=st.floats(1e-6, 1 - 1e-6), beta=st.floats(0.2, 5.0))
def test_power_quantile_inverts_cdf(p, beta):
    d = cb.power(Pareto(0.8), beta)
    assert d.cdf(d.quantile(p)) == pytest.approx(p, rel=1e-9)


def test_max_of_examples():
    f = Burr(0.8, 0.9)
    np.testing.assert_allclose(cb.max_of(f, f).cdf(GRID), f.cdf(GRID) ** 2, rtol=1e-12)
    two = cb.max_of(Frechet(1.0), Frechet(1.0))
    np.testing.assert_allclose(two.cdf(GRID), np.exp(-2.0 / GRID), rtol=1e-12, atol=1e-300)
    np.testing.assert_allclose(two.cdf(GRID), cb.scale_shift(Frechet(1.0), 2.0, 0.0).cdf(GRID),
                               rtol=1e-12, atol=1e-300)
    assert cb.max_of(Deadly(0.3), Deadly(0.2)).cdf(10.0) == pytest.approx(0.7 * 0.8)


def test_convex_transform_examples():
    sq = cb.convex_transform(Pareto(1.0), "pow", k=2.0)
    assert sq.cdf(4.0) == pytest.approx(2.0 / 3.0)
    # (x+1)^{1/alpha} - 1 with alpha = 0.5 maps Pareto(1) to Pareto(0.5)
    sp = cb.convex_transform(Pareto(1.0), "shiftpow", k=2.0)
    np.testing.assert_allclose(sp.cdf(GRID), Pareto(0.5).cdf(GRID), rtol=1e-10)
    lp = cb.convex_transform(Pareto(0.7), "expm1")
    x = np.geomspace(1e-6, 1e3, 100)
    np.testing.assert_allclose(lp.cdf(x), LogPareto(0.7).cdf(x), rtol=1e-10)


def test_convex_transform_identity():
    d = cb.convex_transform(Burr(0.8, 0.9), "linear", a=1.0)
    np.testing.assert_allclose(d.cdf(GRID), Burr(0.8, 0.9).cdf(GRID), rtol=1e-12)


def test_convex_transform_without_inverse_uses_bisection():
    d = cb.convex_transform(Pareto(1.0), lambda x: np.asarray(x, dtype=float) ** 3)
    ref = cb.convex_transform(Pareto(1.0), "pow", k=3.0)
    x = np.geomspace(1e-3, 1e3, 30)
    np.testing.assert_allclose(d.cdf(x), ref.cdf(x), rtol=1e-9)
    assert "custom" in d.expr


@given(y=st.floats(1e-6, 1e6))
def test_generalized_inverse_round_trip(y):
    d = cb.convex_transform(Pareto(1.0), lambda x: np.asarray(x, dtype=float) ** 2 + x)
    assert float(d._f(d.inverse(np.array([y]))[0])) == pytest.approx(y, rel=1e-9)


def test_convexity_validation_rejects_concave():
    with pytest.raises(cb.ConvexityError) as info:
        cb.convex_transform(Pareto(1.0), lambda x: np.sqrt(np.asarray(x, dtype=float)))
    assert info.value.witness is not None
    with pytest.raises(cb.ConvexityError):
        cb.convex_transform(Pareto(1.0), lambda x: np.asarray(x, dtype=float) + 1.0)


def test_mixture_examples():
    same = cb.mixture([Pareto(1.0), Pareto(1.0)], (0.5, 0.5))
    np.testing.assert_allclose(same.cdf(GRID), Pareto(1.0).cdf(GRID), rtol=1e-14)
    mix = cb.mixture([Pareto(1.0), Pareto(0.5)], (0.3, 0.7))
    assert mix.cdf(1.0) == pytest.approx(0.3 * 0.5 + 0.7 * (1 - 2 ** -0.5), rel=1e-14)
    assert mix.cdf(1.0) == pytest.approx(0.355025, abs=1e-6)
    with pytest.raises(ValueError):
        cb.mixture([Pareto(1.0), Pareto(0.5)], (1.0, 0.0))


@given(p=st.floats(1e-4, 1 - 1e-4))
def test_mixture_quantile_by_bisection(p):
    mix = cb.mixture([Pareto(1.0), Pareto(0.5)], (0.3, 0.7))
    assert mix.cdf(mix.quantile(p)) == pytest.approx(p, rel=1e-9)


def test_stochastic_ordering():
    v = cb.check_stochastic_ordering([Pareto(1.0), Pareto(0.5)])
    assert v.ordered and v.order == [0, 1]
    v = cb.check_stochastic_ordering([Pareto(0.5), Pareto(1.0)])
    assert v.ordered and v.order == [1, 0]
    assert cb.check_stochastic_ordering([Burr(0.8, 0.9), Burr(0.8, 0.9)]).ordered


def test_stochastic_ordering_crossing_decided_by_dense_scan():
    # dense-scan oracle: do the two CDFs cross on the grid?
    diff = Frechet(1.0).cdf(GRID) - Pareto(1.0).cdf(GRID)
    crosses = diff.max() > 1e-12 and diff.min() < -1e-12
    v = cb.check_stochastic_ordering([Frechet(1.0), Pareto(1.0)])
    assert v.ordered == (not crosses)
    if not v.ordered:
        assert v.witness is not None


def test_generalized_mean_examples():
    dists = [Pareto(0.7), Burr(0.8, 0.9)]
    m1 = cb.generalized_r_mean(dists, (0.4, 0.6), 1.0)
    mx = cb.mixture(dists, (0.4, 0.6))
    np.testing.assert_allclose(m1.cdf(GRID), mx.cdf(GRID), rtol=1e-12)
    m0 = cb.generalized_r_mean([Pareto(0.7), Pareto(0.7)], (0.5, 0.5), 0.0)
    np.testing.assert_allclose(m0.cdf(GRID), Pareto(0.7).cdf(GRID), rtol=1e-12)
    with pytest.raises(ValueError):
        cb.generalized_r_mean(dists, (0.5, 0.5), -1.0)


@given(r1=st.floats(0, 5), r2=st.floats(0, 5), w=st.floats(0.05, 0.95))
def test_generalized_mean_monotone_in_r(r1, r2, w):
    lo, hi = sorted((r1, r2))
    dists = [Pareto(0.7), Burr(0.8, 0.9)]
    a = cb.generalized_r_mean(dists, (w, 1 - w), lo).cdf(GRID)
    b = cb.generalized_r_mean(dists, (w, 1 - w), hi).cdf(GRID)
    assert np.all(a <= b + 1e-12)


@given(r=st.floats(0, 10))
def test_generalized_mean_is_a_cdf(r):
    d = cb.generalized_r_mean([Pareto(0.7), Frechet(0.5)], (0.5, 0.5), r)
    c = d.cdf(GRID)
    assert np.all(np.diff(c) >= -1e-15)
    assert d.cdf(1e-12) < 1e-3 and d.cdf(1e12) > 1 - 1e-3


def test_validate_convex_on_custom_grid():
    cb.validate_convex(lambda x: np.asarray(x, dtype=float) ** 2, Grid(1e-3, 1e3, 50))
    with pytest.raises(cb.ConvexityError):
        cb.validate_convex(lambda x: np.log1p(np.asarray(x, dtype=float)), Grid(1e-3, 1e3, 50))
