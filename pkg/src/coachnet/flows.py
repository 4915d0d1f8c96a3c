"""Division-to-division hiring flows."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .ingest import SPORT_DIVISIONS, Division, SchoolInfo, Sport
from .netcore import HiringNetwork

DIVISION_ONE = {Division.DIV_I, Division.FBS, Division.FCS}


@dataclass(frozen=True)
class FlowMatrix:
    """``fractions[r, c]``: share of hires from a division-r alma mater into a division-c employer."""

    divisions: tuple[Division, ...]
    fractions: np.ndarray
    n_edges_used: int
    n_edges_skipped: int

    @property
    def row_totals(self) -> np.ndarray:
        return self.fractions.sum(axis=1)

    @property
    def col_totals(self) -> np.ndarray:
        return self.fractions.sum(axis=0)

    @property
    def labels(self) -> list[str]:
        return [d.value for d in self.divisions]


def division_flow_matrix(network: HiringNetwork, schools: Mapping[str, SchoolInfo] | None = None,
                         cutoff_year: int = 1973, inclusive: bool = False,
                         sport: Sport | str | None = None) -> FlowMatrix:
    """Hire fractions between divisions for coaches graduating after ``cutoff_year``.

    Only hires with both schools carrying a division label of the sport
    count; the rest are tallied in ``n_edges_skipped``. ``inclusive``
    switches the cutoff test from ``>`` to ``>=``.
    """
    sport = Sport.parse(sport) if sport is not None else network.sport
    if sport is None:
        raise ValueError("division flows need the sport to pick the division labels")
    labels = SPORT_DIVISIONS[sport]
    pos = {d: i for i, d in enumerate(labels)}
    schools = schools if schools is not None else network.schools

    def division(s):
        info = schools.get(s)
        return info.division if info is not None else Division.UNKNOWN

    counts = np.zeros((len(labels), len(labels)))
    used = skipped = 0
    for e in network.edges:
        if e.grad_year < cutoff_year or (e.grad_year == cutoff_year and not inclusive):
            continue
        r, c = pos.get(division(e.src)), pos.get(division(e.dst))
        if r is None or c is None:
            skipped += 1
            continue
        counts[r, c] += 1
        used += 1
    if used == 0:
        raise ValueError(f"no hires after {cutoff_year} between division-labelled schools")
    return FlowMatrix(tuple(labels), counts / used, used, skipped)


def flow_findings(matrix: FlowMatrix) -> dict:
    """Descriptive checks on a flow matrix; nothing here is asserted.

    - ``diagonal_dominant``: per origin division, whether staying in the
      division strictly beats every other destination.
    - ``downward_from_div1`` / ``upward_into_div1``: mass leaving Division I
      (FBS and FCS together for football) vs mass entering it.
    - ``offdiag_inflow``: column sums without the diagonal, i.e. where
      coaches go when they change division.
    """
    F = matrix.fractions
    labels = matrix.labels
    k = len(labels)
    dominant = {}
    for i in range(k):
        others = np.delete(F[i], i)
        dominant[labels[i]] = bool(np.all(F[i, i] > others))
    top = np.array([d in DIVISION_ONE for d in matrix.divisions])
    downward = float(F[np.ix_(top, ~top)].sum())
    upward = float(F[np.ix_(~top, top)].sum())
    offdiag = F - np.diag(np.diag(F))
    return {
        "diagonal_dominant": dominant,
        "all_diagonal_dominant": all(dominant.values()),
        "within_division": float(np.trace(F)),
        "downward_from_div1": downward,
        "upward_into_div1": upward,
        "more_down_than_up": downward > upward,
        "offdiag_inflow": dict(zip(labels, offdiag.sum(axis=0).tolist())),
    }
