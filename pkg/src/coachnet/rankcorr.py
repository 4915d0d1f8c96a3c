"""AP poll aggregation over multi-year spans and Kendall correlation with production rankings."""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .ingest import PollTable
from .ranking import Method, RankEntry, Ranking
from .temporal import Window


FILL_MODES = ("formula", "midrank")


def fill_average_rank(year_poll: Sequence[str], universe, mode: str = "formula") -> dict[str, float]:
    """Complete one year's poll over ``universe``.

    Ranked schools keep their position (1-based). With ``m`` ranked and
    ``n`` unranked schools, the unranked ones all get ``(m + 1 + n) / 2``
    in ``"formula"`` mode. Note this can sit at or above the last ranked
    position (m=2, n=1 gives 2.0). ``"midrank"`` mode instead uses the
    mean of the vacant ranks ``m+1 .. m+n``, i.e. ``m + (n + 1) / 2``.
    """
    if mode not in FILL_MODES:
        raise ValueError(f"unknown fill mode {mode!r}")
    universe = set(universe)
    outside = [s for s in year_poll if s not in universe]
    if outside:
        raise ValueError(f"ranked school(s) outside the universe: {', '.join(outside[:5])}")
    if len(set(year_poll)) != len(year_poll):
        raise ValueError("a school is ranked twice")
    m = len(year_poll)
    n = len(universe) - m
    filled = {s: float(i + 1) for i, s in enumerate(year_poll)}
    fill = (m + 1 + n) / 2 if mode == "formula" else m + (n + 1) / 2
    for s in universe - filled.keys():
        filled[s] = fill
    return filled


def median_rank_aggregate(filled_rankings: Sequence[Mapping[str, float]]) -> Ranking:
    """Order schools by their median rank across years.

    Ties on the median fall back to the mean rank, then to school id.
    """
    if not filled_rankings:
        raise ValueError("need at least one ranking")
    universe = set(filled_rankings[0])
    for r in filled_rankings[1:]:
        if set(r) != universe:
            raise ValueError("rankings cover different universes")
    key = {}
    for s in universe:
        vals = [r[s] for r in filled_rankings]
        key[s] = (statistics.median(vals), statistics.fmean(vals))
    ordered = sorted(universe, key=lambda s: (key[s], s))
    return Ranking(Method.AGGREGATED, tuple(RankEntry(s, float(key[s][0]), i + 1) for i, s in enumerate(ordered)))


@dataclass(frozen=True)
class AggregatedPoll:
    span: tuple[int, int]
    universe: frozenset
    ranking: Ranking
    n_years: int

    @property
    def label(self) -> str:
        return f"{self.span[0]}-{self.span[1]}"


def poll_spans(years: Sequence[int], span: int = 20, stride: int | None = None) -> list[tuple[int, int]]:
    """Spans ``[start, start + span - 1]`` from the earliest poll year, stepping by ``stride``.

    ``stride`` defaults to ``span`` (consecutive blocks); spans without any
    poll year are dropped.
    """
    if span < 1:
        raise ValueError("span must be >= 1")
    stride = span if stride is None else stride
    if stride < 1:
        raise ValueError("stride must be >= 1")
    years = sorted(set(years))
    if not years:
        return []
    out = []
    start = years[0]
    while start <= years[-1]:
        end = start + span - 1
        if any(start <= y <= end for y in years):
            out.append((start, end))
        start += stride
    return out


def aggregate_span(polls: Mapping[int, Sequence[str]], span: tuple[int, int],
                   universe_mode: str = "any", fill: str = "formula") -> AggregatedPoll | None:
    """Median-aggregate the yearly polls falling inside ``span``.

    ``universe_mode="any"``: schools ranked in at least one year of the
    span. ``"all"``: only schools ranked in every poll year of the span.
    Returns None when the span holds no poll or the universe is empty.
    """
    years = [y for y in sorted(polls) if span[0] <= y <= span[1]]
    if not years:
        return None
    sets = [set(polls[y]) for y in years]
    if universe_mode == "any":
        universe = set().union(*sets)
    elif universe_mode == "all":
        universe = set.intersection(*sets)
    else:
        raise ValueError(f"unknown universe mode {universe_mode!r}")
    if not universe:
        return None
    filled = [fill_average_rank([s for s in polls[y] if s in universe], universe, fill) for y in years]
    return AggregatedPoll(span, frozenset(universe), median_rank_aggregate(filled), len(years))


def aggregate_polls(table: PollTable, span: int = 20, stride: int | None = None,
                    universe_mode: str = "any", fill: str = "formula") -> list[AggregatedPoll]:
    polls = table.by_year()
    out = []
    for sp in poll_spans(list(polls), span, stride):
        agg = aggregate_span(polls, sp, universe_mode, fill)
        if agg is not None:
            out.append(agg)
    return out


def _merge_count_inversions(a: list) -> tuple[list, int]:
    n = len(a)
    if n < 2:
        return a, 0
    left, inv_l = _merge_count_inversions(a[: n // 2])
    right, inv_r = _merge_count_inversions(a[n // 2:])
    merged = []
    inv = inv_l + inv_r
    i = j = 0
    while i < len(left) and j < len(right):
        if right[j] < left[i]:
            merged.append(right[j])
            inv += len(left) - i
            j += 1
        else:
            merged.append(left[i])
            i += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, inv


def _tie_pairs(values) -> int:
    _, counts = np.unique(values, return_counts=True)
    return int(np.sum(counts * (counts - 1) // 2))


def kendall_tau(x: Sequence[float], y: Sequence[float]) -> float:
    """Kendall tau-b with tie correction, O(n log n) (Knight's method).

    ``tau_b = (C - D) / sqrt((n0 - n1)(n0 - n2))`` with ``n0 = n(n-1)/2`` and
    ``n1``/``n2`` the pairs tied in x/y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("kendall_tau needs two equal-length 1-D sequences")
    n = x.size
    if n < 2:
        raise ValueError("kendall_tau needs at least two observations")
    n0 = n * (n - 1) // 2
    n1 = _tie_pairs(x)
    n2 = _tie_pairs(y)
    if n1 == n0 or n2 == n0:
        raise ValueError("kendall_tau is undefined when one variable is constant")
    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]
    pairs = np.stack([xs, ys], axis=1)
    _, joint = np.unique(pairs, axis=0, return_counts=True)
    n3 = int(np.sum(joint * (joint - 1) // 2))
    # after sorting by (x, y), inversions in y are exactly the discordant pairs
    _, swaps = _merge_count_inversions(ys.tolist())
    numer = n0 - n1 - n2 + n3 - 2 * swaps
    return float(numer / math.sqrt((n0 - n1) * (n0 - n2)))


@dataclass(frozen=True)
class CorrelationGrid:
    rows: tuple[Window, ...]
    cols: tuple[tuple[int, int], ...]
    tau: np.ndarray  # rows x cols, NaN where undefined

    def long_rows(self):
        for i, w in enumerate(self.rows):
            for j, c in enumerate(self.cols):
                yield f"{c[0]}-{c[1]}", w.label, self.tau[i, j]


def production_ranks_for(universe: Sequence[str], production: Ranking) -> list[float]:
    """Production rank of each school; schools outside the ranking share ``worst + 1``."""
    ranks = production.ranks()
    missing = len(production) + 1
    return [float(ranks.get(s, missing)) for s in universe]


def poll_production_tau(agg: AggregatedPoll, production: Ranking) -> float:
    schools = agg.ranking.order
    x = [float(r) for r in range(1, len(schools) + 1)]
    y = production_ranks_for(schools, production)
    try:
        return kendall_tau(x, y)
    except ValueError:
        return float("nan")


def correlation_grid(aggregated_polls: Sequence[AggregatedPoll],
                     production_rankings: Sequence[tuple[Window, Ranking]],
                     threads: int = 1) -> CorrelationGrid:
    """Kendall tau-b between every (production window, AP span) pair.

    Cells where tau is undefined (all production ranks tied) hold NaN.
    """
    if not aggregated_polls or not production_rankings:
        raise ValueError("correlation grid needs at least one poll span and one production ranking")
    tau = np.full((len(production_rankings), len(aggregated_polls)), np.nan)

    def row(i):
        _, prod = production_rankings[i]
        return [poll_production_tau(agg, prod) for agg in aggregated_polls]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, range(len(production_rankings))))
    else:
        rows = [row(i) for i in range(len(production_rankings))]
    for i, r in enumerate(rows):
        tau[i] = r
    return CorrelationGrid(tuple(w for w, _ in production_rankings),
                           tuple(a.span for a in aggregated_polls), tau)
