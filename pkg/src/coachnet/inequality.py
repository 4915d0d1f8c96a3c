"""Gini coefficient, Lorenz curve and coverage of coach production."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .netcore import HiringNetwork, degree_sequences


def _as_values(values) -> np.ndarray:
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("need at least one value")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise ValueError("values must be finite and non-negative")
    if x.sum() <= 0:
        raise ValueError("values sum to zero; inequality is undefined")
    return x


def gini(values) -> float:
    """Population Gini coefficient (mean absolute difference form).

    ``G = sum_i sum_j |x_i - x_j| / (2 n^2 mean(x))``, evaluated through the
    sorted-rank identity in O(n log n). Lies in ``[0, 1 - 1/n]``.
    """
    x = np.sort(_as_values(values))
    n = x.size
    ranks = np.arange(1, n + 1)
    return float(np.sum((2 * ranks - n - 1) * x) / (n * x.sum()))


@dataclass(frozen=True)
class LorenzCurve:
    """Cumulative share of production against share of schools, largest producers first."""

    points: tuple[tuple[float, float], ...]

    @property
    def population(self) -> np.ndarray:
        return np.array([p for p, _ in self.points])

    @property
    def share(self) -> np.ndarray:
        return np.array([v for _, v in self.points])


def lorenz(values) -> LorenzCurve:
    # Descending order: the curve sits on or above the diagonal, the mirror
    # image of the ascending textbook curve. Reads as "top p% of schools
    # produce v% of coaches".
    x = np.sort(_as_values(values))[::-1]
    n = x.size
    cum = np.concatenate([[0.0], np.cumsum(x)]) / x.sum()
    cum[-1] = 1.0
    pop = np.arange(n + 1) / n
    return LorenzCurve(tuple(zip(pop.tolist(), cum.tolist())))


def coverage_fraction(values, target: float = 0.5) -> float:
    """Smallest fraction of units whose largest values reach ``target`` of the total."""
    if not 0 < target <= 1:
        raise ValueError("target must lie in (0, 1]")
    x = np.sort(_as_values(values))[::-1]
    cum = np.cumsum(x)
    k = int(np.searchsorted(cum, target * cum[-1], side="left")) + 1
    return min(k, x.size) / x.size


@dataclass(frozen=True)
class InequalityReport:
    n_schools: int
    gini_out: float
    gini_in: float
    coverage_50: float
    n_net_producers: int
    frac_net_producers: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def inequality_report(network: HiringNetwork) -> InequalityReport:
    """Production/hiring inequality over all schools in the network.

    Net producers are schools whose out-degree strictly exceeds their
    in-degree (the ``k_o / k_i > 1`` test without dividing by zero).
    """
    if not network.nodes:
        raise ValueError("empty network")
    out, inn = degree_sequences(network)
    k_out = np.array([out[s] for s in network.nodes], dtype=float)
    k_in = np.array([inn[s] for s in network.nodes], dtype=float)
    producers = int(np.sum(k_out > k_in))
    return InequalityReport(
        n_schools=len(network.nodes),
        gini_out=gini(k_out),
        gini_in=gini(k_in),
        coverage_50=coverage_fraction(k_out, 0.5),
        n_net_producers=producers,
        frac_net_producers=producers / len(network.nodes),
    )
