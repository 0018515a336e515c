from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from heavysd import combinators as cb
from heavysd import membership as mb
from heavysd.distributions import (Burr, Deadly, Frechet, GeneralizedPareto, InverseBurr,
                                   InverseGeometric, LogPareto, Pareto, Stoppa)
from heavysd.grid import Grid

H_VALID = [Frechet(0.5), Frechet(1.0), Pareto(0.5), Pareto(1.0), GeneralizedPareto(1.0),
           GeneralizedPareto(2.0), Burr(0.8, 0.9), InverseBurr(2.0, 0.8), LogPareto(0.9),
           Stoppa(0.9, 2.0), InverseGeometric(1.0)]
H_INVALID = [Frechet(1.5), Frechet(2.0), Pareto(2.0), Burr(1.2, 1.0)]


@pytest.mark.parametrize("dist", H_VALID, ids=lambda d: d.expr)
def test_valid_members_pass(dist):
    rep = mb.check_subadditive(dist)
    assert rep.verdict == "pass"
    assert rep.details["pairs"] == 40_000
    assert rep.worst_margin >= -1e-9 * max(1.0, 1.0)


@pytest.mark.parametrize("dist", H_INVALID, ids=lambda d: d.expr)
def test_invalid_members_fail_with_witness(dist):
    rep = mb.check_subadditive(dist)
    assert rep.verdict == "fail"
    x, y = rep.witness
    # independent recomputation of the margin at the witness
    m = dist.h(x) + dist.h(y) - dist.h(x + y)
    assert m < -rep.tol * max(1.0, abs(dist.h(x) + dist.h(y)))


def test_frechet2_witness_at_one_when_grid_contains_one():
    rep = mb.check_subadditive(Frechet(2.0), Grid(0.25, 4.0, 5))
    assert rep.verdict == "fail"
    assert rep.witness == [1.0, 1.0]
    assert rep.details["witness_margin"] == pytest.approx(-2.0)


def test_strict_variant():
    assert mb.check_subadditive(Frechet(0.8), strict=True).verdict == "pass"
    # additive boundary: margins are zero, so strictness is refuted
    rep = mb.check_subadditive(Frechet(1.0), strict=True)
    assert rep.verdict == "fail"
    plain = mb.check_subadditive(Frechet(1.0))
    assert plain.verdict == "pass" and abs(plain.worst_margin) <= 1e-9


def test_infinite_h_is_inconclusive():
    # h(x) = x**2 overflows to inf beyond 1e154
    rep = mb.check_subadditive(Frechet(2.0), Grid(1e-6, 1e200, 20))
    assert rep.verdict == "inconclusive"
    assert rep.details["h_infinite"]


def test_deadly_h_is_constant_and_subadditive():
    rep = mb.check_subadditive(Deadly(0.3), Grid(1e-6, 1e6, 20))
    assert rep.verdict == "pass"


def test_sufficient_conditions():
    rep = mb.check_sufficient_conditions(Pareto(1.0))
    assert rep.verdict == "pass" and rep.details["concave"]
    rep = mb.check_sufficient_conditions(Frechet(1.0))
    assert rep.verdict == "pass" and rep.details["ratio_decreasing"]
    ig = InverseGeometric(1.0)
    rep = mb.check_sufficient_conditions(ig)
    assert not rep.details["concave"]
    assert mb.check_subadditive(ig).verdict == "pass"


def test_super_frechet():
    for d in (Pareto(1.0), Frechet(0.9), Burr(0.9, 0.9)):
        assert mb.check_super_frechet(d).verdict == "pass", d.expr
    rep = mb.check_super_frechet(Frechet(1.0))
    assert rep.verdict == "pass"
    x = np.geomspace(1e-6, 1e6, 200)
    np.testing.assert_allclose(-1.0 / Frechet(1.0).logcdf(x), x, rtol=1e-12)
    rep = mb.check_super_frechet(InverseGeometric(1.0))
    assert rep.verdict == "fail" and not rep.details["strictly_increasing"]
    a, b = rep.witness
    d = InverseGeometric(1.0)
    assert -1 / d.logcdf(a) >= -1 / d.logcdf(b)


def test_super_pareto():
    for d in (Pareto(0.8), Burr(0.8, 0.9), LogPareto(0.9), Pareto(1.0)):
        assert mb.check_super_pareto(d).verdict == "pass", d.expr
    # Pareto(1) gives f = identity
    x = np.geomspace(1e-3, 1e3, 20)
    np.testing.assert_allclose(Pareto(1.0).isf(1 / (1 + x)), x, rtol=1e-9)


def test_super_pareto_frechet_half_regression_baseline():
    # no claim either way; this records the computed verdict
    rep = mb.check_super_pareto(Frechet(0.5))
    assert rep.verdict == "fail"


def test_report_schema():
    d = mb.check_subadditive(Frechet(2.0)).to_dict()
    for key in ("criterion", "verdict", "grid", "tol", "worst_margin", "witness", "dist"):
        assert key in d
    assert d["grid"] == {"min": 1e-6, "max": 1e6, "points": 200, "scale": "log"}
    assert d["dist"] == "frechet(alpha=2.0)"


def test_recentring_shifted_law():
    d = cb.scale_shift(Pareto(1.0), 1.0, 2.0)
    rep = mb.check_subadditive(d)
    assert rep.verdict == "pass" and any("recentred" in n for n in rep.notes)


@pytest.mark.parametrize("dist", [Pareto(0.8), Burr(0.8, 0.9), LogPareto(0.9), Frechet(0.9),
                                  Burr(0.9, 0.9), Pareto(1.0)], ids=lambda d: d.expr)
def test_subclass_implies_class_h(dist):
    if mb.check_super_frechet(dist).passed or mb.check_super_pareto(dist).passed:
        assert mb.check_subadditive(dist).passed


@given(a=st.floats(0.05, 1.0), b=st.floats(0.05, 1.0), w=st.floats(0.05, 0.95))
def test_ordered_mixture_of_members_is_member(a, b, w):
    dists = [Pareto(a), Pareto(b)]
    assert cb.check_stochastic_ordering(dists).ordered
    mix = cb.mixture(dists, (w, 1 - w))
    assert mb.check_subadditive(mix, Grid(1e-4, 1e4, 40)).passed


@given(alpha=st.floats(0.05, 1.0), beta=st.floats(0.1, 5.0))
def test_power_closure(alpha, beta):
    d = cb.power(Pareto(alpha), beta)
    assert mb.check_subadditive(d, Grid(1e-4, 1e4, 40)).passed


@given(alpha=st.floats(0.05, 1.0), k=st.floats(1.0, 4.0))
def test_convex_closure(alpha, k):
    d = cb.convex_transform(Frechet(alpha), "pow", k=k)
    assert mb.check_subadditive(d, Grid(1e-4, 1e4, 40)).passed


@given(a1=st.floats(0.05, 1.0), a2=st.floats(0.05, 1.0))
def test_max_closure(a1, a2):
    d = cb.max_of(Pareto(a1), Frechet(a2))
    assert mb.check_subadditive(d, Grid(1e-4, 1e4, 40)).passed


@given(alpha=st.floats(1.05, 4.0))
def test_frechet_above_one_always_refuted(alpha):
    assert mb.check_subadditive(Frechet(alpha), Grid(1e-2, 1e2, 40)).verdict == "fail"
