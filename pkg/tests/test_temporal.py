import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coachnet.ingest import CoachRecord, Stint
from coachnet.netcore import build_network
from coachnet.temporal import (Window, extract_windows, graduation_histogram, growth_time_histogram,
                               required_count, subnetwork, windows_from_years)
from oracles import random_network


def coach(cid, grad, start, school="B"):
    return CoachRecord(cid, cid, "A", grad, (Stint(school, start, start + 2),))


def one_per_year():
    return [coach(f"c{y}", y, y + 3) for y in range(2001, 2011)]


def test_first_window_hand_enumeration():
    ws = extract_windows(one_per_year(), 0.3)
    assert ws[0] == Window(2008, 2010, 3)
    assert [w.t_e for w in ws] == list(range(2010, 2002, -1))
    assert ws[-1] == Window(2001, 2003, 3)


def test_fraction_one_single_window():
    assert extract_windows(one_per_year(), 1.0) == [Window(2001, 2010, 10)]


def test_bad_fraction():
    with pytest.raises(ValueError):
        extract_windows(one_per_year(), 0.0)
    with pytest.raises(ValueError):
        extract_windows([], 0.3)


@pytest.mark.parametrize("total, fraction, expected", [(10, 0.3, 3), (10, 0.1, 1), (7, 0.3, 3), (100, 0.3, 30), (3, 1.0, 3)])
def test_required_count_exact(total, fraction, expected):
    assert required_count(total, fraction) == expected


def test_windows_skip_missing_years():
    # distinct years only: no duplicate windows for empty calendar years
    ws = windows_from_years([1990, 1990, 1995, 2000], 0.5)
    assert ws == [Window(1995, 2000, 2), Window(1990, 1995, 3), Window(1990, 1990, 2)]


def test_window_validation_and_label():
    with pytest.raises(ValueError):
        Window(2000, 1999, 1)
    w = Window(1990, 1999, 4)
    assert w.label == "1990-1999" and 1990 in w and 2000 not in w


def test_graduation_histogram():
    recs = [coach("a", 1980, 1985), coach("b", 1980, 1990), coach("c", 1975, 1976)]
    assert graduation_histogram(recs) == {1975: 1, 1980: 2}


def test_growth_time():
    recs = [coach("a", 1980, 1985), coach("b", 1980, 1990), coach("c", 1975, 1975)]
    hist, mean = growth_time_histogram(recs)
    assert hist == {0: 1, 5: 1, 10: 1}
    assert mean == 5.0
    assert growth_time_histogram([]) == ({}, None)


def test_subnetwork_full_range_is_identity():
    net = random_network(np.random.default_rng(3), 10, 40)
    years = [e.grad_year for e in net.edges]
    sub = subnetwork(net, Window(min(years), max(years), len(years)))
    assert sub.edges == net.edges
    assert set(sub.nodes) <= set(net.nodes)
    assert set(sub.nodes) == {e.src for e in net.edges} | {e.dst for e in net.edges}


def test_subnetwork_empty_names_window():
    net = random_network(np.random.default_rng(3), 5, 10)
    with pytest.raises(ValueError, match="1800-1801"):
        subnetwork(net, Window(1800, 1801, 1))


@pytest.mark.parametrize("seed", range(5))
def test_subnetwork_filter_oracle(seed):
    rng = np.random.default_rng(seed)
    net = random_network(rng, 12, 60)
    w = Window(1970, 1990, 1)
    sub = subnetwork(net, w)
    assert Counter(sub.edges) == Counter(e for e in net.edges if 1970 <= e.grad_year <= 1990)


def test_windows_from_records_match_network_windows():
    recs = [coach(f"c{i}", 1980 + i % 7, 1990 + i) for i in range(30)]
    net = build_network(recs)
    ws = extract_windows(recs, 0.3)
    for w in ws:
        sub = subnetwork(net, w)
        assert len({e.coach_id for e in sub.edges}) == w.coach_count


years = st.lists(st.integers(1950, 2015), min_size=1, max_size=200)


@settings(max_examples=100, deadline=None)
@given(years, st.sampled_from([0.1, 0.25, 0.3, 0.5, 0.9, 1.0]))
def test_windows_minimal(ys, fraction):
    need = math.ceil(round(fraction * len(ys), 9))
    counts = Counter(ys)
    ws = windows_from_years(ys, fraction)
    assert ws, "the latest year always yields at least the widest window"
    assert [w.t_e for w in ws] == sorted({w.t_e for w in ws}, reverse=True)
    for w in ws:
        inside = sum(c for y, c in counts.items() if w.t_s <= y <= w.t_e)
        assert inside == w.coach_count >= need
        assert inside - counts[w.t_s] < need
        assert w.t_s in counts and w.t_e in counts
