from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heavysd import dominance as dm
from heavysd.combinators import generalized_r_mean
from heavysd.dependence import clayton, comonotone, countermonotone, gaussian, independent
from heavysd.distributions import (Burr, Deadly, DomainError, Frechet, LogPareto, Pareto)
from heavysd.grid import Grid

SMALL = Grid(0.5, 2.0, 3)  # contains x = 1


def test_dkw_epsilon_formula():
    assert dm.dkw_epsilon(10**6, 1e-3) == pytest.approx(math.sqrt(math.log(1e3) / 2e6))
    with pytest.raises(ValueError):
        dm.dkw_epsilon(0, 0.1)


# product-bound certificate

def test_pareto_bound_at_one():
    rep = dm.check_product_bound(Pareto(1.0), (0.5, 0.5), SMALL)
    i = rep.table["x"].index(1.0)
    assert rep.table["F_sum"][i] == pytest.approx(4 / 9, rel=1e-14)
    assert rep.table["F_target"][i] == pytest.approx(0.5, rel=1e-14)
    assert rep.verdict == "pass"


def test_frechet_one_is_equality():
    rep = dm.check_product_bound(Frechet(1.0), (0.3, 0.7))
    assert max(abs(v) for v in rep.table["margin"]) <= 1e-12
    assert rep.verdict == "pass"


def test_frechet_two_fails_at_one():
    rep = dm.check_product_bound(Frechet(2.0), (0.5, 0.5), SMALL)
    i = rep.table["x"].index(1.0)
    assert rep.table["F_sum"][i] == pytest.approx(math.exp(-0.5), rel=1e-14)
    assert rep.table["F_target"][i] == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert rep.verdict == "fail"
    assert "witness_x" in rep.extras


@settings(max_examples=40)
@given(alpha=st.floats(0.1, 1.0), w1=st.floats(0.01, 0.99))
def test_pareto_bound_holds_for_all_weights(alpha, w1):
    rep = dm.check_product_bound(Pareto(alpha), (w1, 1 - w1))
    assert rep.verdict == "pass"


# empirical engine

@pytest.mark.parametrize("dep", [independent(), countermonotone(), gaussian(-0.4),
                                 clayton(-0.5)], ids=lambda d: d.expr)
@pytest.mark.parametrize("dist", [Pareto(1.0), Burr(0.8, 0.9), LogPareto(0.9), Frechet(0.5)],
                         ids=lambda d: d.expr)
def test_certificate_implies_empirical_pass(dist, dep):
    assert dm.check_product_bound(dist, (0.5, 0.5)).verdict == "pass"
    rep = dm.check_dominance_empirical(dist, [dist, dist], (0.5, 0.5), dep, seed=7, m=200_000)
    assert rep.verdict == "pass"
    assert rep.epsilon == pytest.approx(dm.dkw_epsilon(200_000, 1e-3))


def test_empirical_detects_violation():
    # Frechet(2) averages are lighter; the sum's CDF exceeds F near the bulk
    d = Frechet(2.0)
    rep = dm.check_dominance_empirical(d, [d, d], (0.5, 0.5), independent(), seed=1,
                                       m=200_000, grid=Grid(0.3, 10.0, 50))
    assert rep.verdict == "fail"


def test_comonotone_is_marked_exploratory():
    d = Pareto(1.0)
    rep = dm.check_dominance_empirical(d, [d, d], (0.5, 0.5), comonotone(), seed=1, m=50_000)
    assert rep.extras["nlod"] == "no"
    assert any("exploratory" in n for n in rep.notes)


def test_r_mean_targets():
    f1, f2 = Pareto(0.7), Burr(0.8, 0.9)
    for r in (0.0, 1.0):
        t = generalized_r_mean([f1, f2], (0.5, 0.5), r)
        rep = dm.check_dominance_empirical(t, [f1, f2], (0.5, 0.5), independent(), seed=3,
                                           m=200_000)
        assert rep.verdict == "pass"
    assert dm.check_r_monotonicity([f1, f2], (0.5, 0.5)).verdict == "pass"


def test_quadrature_engine_pareto():
    d = Pareto(1.0)
    rep = dm.check_dominance_quadrature(d, [d, d], (0.5, 0.5), Grid(0.01, 100.0, 30))
    assert rep.verdict == "pass"
    assert rep.min_margin > 0


@pytest.mark.slow
def test_quadrature_oracle_burr():
    d = Burr(0.8, 0.9)
    rep = dm.check_quadrature_oracle([d, d], (0.5, 0.5), seed=11, m=10**7)
    assert rep.verdict == "pass"


def test_deterministic_seed():
    d = Pareto(1.0)
    a = dm.check_dominance_empirical(d, [d, d], (0.5, 0.5), independent(), seed=5, m=50_000)
    b = dm.check_dominance_empirical(d, [d, d], (0.5, 0.5), independent(), seed=5, m=50_000)
    assert a.to_dict() == b.to_dict()


# VaR

def test_var_values():
    assert dm.var(Pareto(1.0), 0.99) == pytest.approx(99.0, rel=1e-12)
    assert dm.var(Pareto(1.0), 0.9) == pytest.approx(9.0, rel=1e-12)
    assert math.isinf(dm.var(Deadly(0.3), 0.8))


def test_var_superadditivity_pareto():
    rep = dm.check_var_superadditivity(Pareto(1.0), (0.5, 0.5), (0.9, 0.99, 0.999),
                                       independent(), seed=2, m=10**6)
    assert rep.verdict == "pass"
    for row in rep.extras["var_table"]:
        assert row["comonotone_additive"]
        assert row["var_sum_upper"] >= row["var_sum_hat"]
    assert rep.extras["var_table"][0]["var_sum_hat"] >= 9.0


def test_var_deadly_infinite():
    rep = dm.check_var_superadditivity(Deadly(0.3), (0.5, 0.5), (0.8,), independent(),
                                       seed=2, m=100_000)
    row = rep.extras["var_table"][0]
    assert math.isinf(row["var_single"]) and math.isinf(row["var_sum_upper"])
    assert rep.verdict == "pass"


# asymptotic ratio

def test_ratio_pareto_half():
    rep = dm.asymptotic_var_ratio(Pareto(0.5), 2, (0.5, 0.9, 0.99, 0.999, 0.9999))
    last = rep.extras["ratio_table"][-1]
    assert last["limit"] == pytest.approx(2.0)
    assert abs(last["ratio"] - 2.0) / 2.0 <= 0.15
    assert rep.verdict == "pass"
    assert not rep.extras["ratio_table"][0]["in_limit_check"]


def test_ratio_quadrature_matches_monte_carlo():
    # the quadrature VaR of the sum must be exceeded by Monte Carlo draws at rate 1 - p
    from heavysd.dominance import sample_weighted_sum
    m = 10**6
    q = dm.asymptotic_var_ratio(Pareto(0.5), 2, (0.9, 0.99))
    _, s = sample_weighted_sum([Pareto(0.5)] * 2, np.ones(2), independent(), 4, m)
    for row in q.extras["ratio_table"]:
        tail = 1 - row["p"]
        frac = np.mean(s > row["var_sum"])
        assert abs(frac - tail) <= 4 * math.sqrt(tail * (1 - tail) / m)


def test_ratio_needs_heavy_tail():
    with pytest.raises(DomainError):
        dm.asymptotic_var_ratio(Pareto(2.0))


# random weights

def test_scaling_hypothesis_pareto_identity():
    # P(cX > t) = c/(t+c) >= c/(t+1) = c P(X > t)
    out = dm.check_scaling_hypothesis(Pareto(1.0))
    assert out["pairs"] == 1000
    assert out["worst_relative_gap"] >= -1e-12


def test_scaling_hypothesis_fails_for_light_frechet():
    with pytest.raises(dm.ScalingHypothesisError) as info:
        dm.check_scaling_hypothesis(Frechet(2.0))
    c, t = info.value.witness
    assert 0 < c < 1 and t > 0


def test_random_weights_triggering_and_constant():
    d = Pareto(1.0)
    trig = dm.check_random_weight_bound(d, dm.TriggeringWeights((0.5, 0.5), (0.5, 0.5)),
                                        seed=8, m=200_000)
    assert trig.verdict == "pass"
    assert trig.extras["mean_total_weight_exact"] == pytest.approx(0.5)
    const = dm.check_random_weight_bound(d, dm.ConstantWeights((0.5, 0.5)), seed=8, m=200_000)
    assert const.verdict == "pass"
    assert const.extras["mean_total_weight"] == pytest.approx(1.0)


# majorization

def test_majorization_equal_weights_zero_margin():
    rep = dm.majorization_experiment(Pareto(0.5), (0.5, 0.5), (0.5, 0.5), seed=1, m=50_000)
    assert rep.min_margin == 0.0
    assert rep.extras["exploratory"]


def test_majorization_requires_ordering():
    with pytest.raises(ValueError):
        dm.majorization_experiment(Pareto(0.5), (0.5, 0.5), (0.9, 0.1), m=1000)


def test_majorization_pareto_half():
    rep = dm.majorization_experiment(Pareto(0.5), (0.7, 0.3), (0.5, 0.5), seed=1, m=200_000)
    assert rep.verdict == "pass"
    assert rep.extras["label"].startswith("consistent")


# deadly risks

@pytest.mark.parametrize("dep,exact", [(independent(), 1 - 0.7 ** 2), (comonotone(), 0.3),
                                       (countermonotone(), 0.6)], ids=["indep", "comono", "counter"])
def test_deadly_exact_fractions(dep, exact):
    rep = dm.deadly_experiment(0.3, 2, dep, seed=9, m=10**6)
    assert rep.extras["exact"] == pytest.approx(exact)
    assert rep.extras["within_3sd"] and rep.extras["counts_dominate"]
    assert rep.verdict == "pass"
