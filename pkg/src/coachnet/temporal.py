"""Graduation-year statistics and trailing windows of coach cohorts."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .ingest import CoachRecord
from .netcore import HiringNetwork


@dataclass(frozen=True)
class Window:
    t_s: int
    t_e: int
    coach_count: int

    def __post_init__(self):
        if self.t_s > self.t_e or self.coach_count <= 0:
            raise ValueError(f"invalid window {self}")

    def __contains__(self, year: int) -> bool:
        return self.t_s <= year <= self.t_e

    @property
    def label(self) -> str:
        return f"{self.t_s}-{self.t_e}"


def graduation_histogram(records: Sequence[CoachRecord]) -> dict[int, int]:
    return dict(sorted(Counter(r.grad_year for r in records).items()))


def growth_time_histogram(records: Sequence[CoachRecord]) -> tuple[dict[int, int], float | None]:
    """Years from graduation to first head-coach job: histogram and mean (None if no records)."""
    growth = [r.stints[0].start_year - r.grad_year for r in records]
    if not growth:
        return {}, None
    return dict(sorted(Counter(growth).items())), float(np.mean(growth))


def required_count(total: int, fraction: float) -> int:
    """``ceil(fraction * total)`` without float round-up (0.3 * 10 must give 3)."""
    return math.ceil(Fraction(fraction).limit_denominator(10**9) * total)


def extract_windows(records: Sequence[CoachRecord], fraction: float = 0.3) -> list[Window]:
    """Minimal trailing graduation windows holding at least ``fraction`` of all coaches.

    For each distinct graduation year ``t_e`` (latest first), ``t_s`` is the
    latest year such that ``[t_s, t_e]`` covers ``ceil(fraction * total)``
    coaches. Once a window would have to start before the earliest
    graduation year, enumeration stops.
    """
    if not 0 < fraction <= 1:
        raise ValueError("fraction must lie in (0, 1]")
    if not records:
        raise ValueError("no records")
    return windows_from_years([r.grad_year for r in records], fraction)


def windows_from_years(years: Sequence[int], fraction: float = 0.3) -> list[Window]:
    counts = Counter(years)
    need = required_count(len(years), fraction)
    distinct = sorted(counts, reverse=True)
    windows = []
    for e, t_e in enumerate(distinct):
        acc = 0
        for t_s in distinct[e:]:
            acc += counts[t_s]
            if acc >= need:
                windows.append(Window(t_s, t_e, acc))
                break
        else:
            break
    return windows


def subnetwork(network: HiringNetwork, window: Window) -> HiringNetwork:
    """Edges of coaches who graduated inside ``window``; nodes limited to their endpoints."""
    edges = tuple(e for e in network.edges if window.t_s <= e.grad_year <= window.t_e)
    if not edges:
        raise ValueError(f"window {window.label} contains no hires")
    nodes = tuple(sorted({e.src for e in edges} | {e.dst for e in edges}))
    return HiringNetwork(nodes, edges, {s: network.schools[s] for s in nodes}, network.sport)
