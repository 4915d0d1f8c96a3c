import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from coachnet.inequality import coverage_fraction, gini, inequality_report, lorenz
from oracles import gini_pairwise, net_from_pairs

values = st.lists(st.integers(0, 50), min_size=1, max_size=60).filter(lambda v: sum(v) > 0)


def test_gini_equal():
    assert gini([5, 5, 5, 5]) == 0.0


def test_gini_max_at_four():
    assert gini([1, 0, 0, 0]) == 0.75


def test_gini_all_zero():
    with pytest.raises(ValueError):
        gini([0, 0, 0])


def test_gini_negative():
    with pytest.raises(ValueError):
        gini([1, -1])


@settings(max_examples=200, deadline=None)
@given(values)
def test_gini_matches_pairwise(v):
    assert gini(v) == pytest.approx(gini_pairwise(v), abs=1e-12)
    assert 0 <= gini(v) <= 1 - 1 / len(v) + 1e-12


@settings(max_examples=100, deadline=None)
@given(values, st.floats(0.01, 100))
def test_gini_scale_invariant(v, c):
    assert gini(np.array(v) * c) == pytest.approx(gini(v), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(values)
def test_gini_lorenz_area(v):
    # descending curve: area between it and the diagonal, doubled, equals G
    curve = lorenz(v)
    auc = trapezoid(curve.share, curve.population)
    assert abs(2 * auc - 1) == pytest.approx(gini(v), abs=1e-9)


def test_lorenz_equal_pair():
    assert lorenz([1, 1]).points == ((0.0, 0.0), (0.5, 0.5), (1.0, 1.0))


def test_lorenz_three_one():
    assert lorenz([3, 1]).points == ((0.0, 0.0), (0.5, 0.75), (1.0, 1.0))


def test_lorenz_zero_sum():
    with pytest.raises(ValueError):
        lorenz([0, 0])


@settings(max_examples=100, deadline=None)
@given(values)
def test_lorenz_shape(v):
    pop, share = lorenz(v).population, lorenz(v).share
    assert (pop[0], share[0]) == (0, 0) and (pop[-1], share[-1]) == (1, 1)
    assert np.all(np.diff(pop) > 0) and np.all(np.diff(share) >= 0)
    assert np.all(share >= pop - 1e-12)  # descending curve sits on/above the diagonal
    slopes = np.diff(share) / np.diff(pop)
    assert np.all(np.diff(slopes) <= 1e-9)


def test_coverage_uniform():
    assert coverage_fraction([1, 1, 1, 1], 0.5) == 0.5


def test_coverage_dominant():
    assert coverage_fraction([7, 1, 1, 1], 0.5) == 0.25


def test_coverage_bad_target():
    with pytest.raises(ValueError):
        coverage_fraction([1, 2], 0.0)


@settings(max_examples=100, deadline=None)
@given(values, st.floats(0.01, 1.0), st.floats(0.01, 1.0))
def test_coverage_monotone(v, a, b):
    lo, hi = sorted((a, b))
    assert coverage_fraction(v, lo) <= coverage_fraction(v, hi)


def test_report_star():
    rep = inequality_report(net_from_pairs([("A", "B"), ("A", "C"), ("A", "D")]))
    assert rep.n_net_producers == 1 and rep.frac_net_producers == 0.25
    assert rep.gini_out == 0.75
    assert rep.gini_in == pytest.approx(0.25)
    assert rep.coverage_50 == 0.25


def test_report_includes_zero_degree_nodes():
    # B never produces: included with out-degree 0
    rep = inequality_report(net_from_pairs([("A", "B"), ("A", "A")]))
    assert rep.n_schools == 2
    assert rep.gini_out == pytest.approx(gini_pairwise([2, 0]))
