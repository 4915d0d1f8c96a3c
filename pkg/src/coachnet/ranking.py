"""School rankings by coach production: out-degree, minimum violations, PageRank, LeaderRank."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from numba import njit

from .netcore import HiringNetwork, degree_sequences

MAX_ITER = 10_000


class ConvergenceError(RuntimeError):
    pass


class Method(str, enum.Enum):
    OUTDEGREE = "outdegree"
    MVR = "mvr"
    PAGERANK = "pagerank"
    LEADERRANK = "leaderrank"
    AGGREGATED = "aggregated"


@dataclass(frozen=True)
class RankEntry:
    school: str
    score: float
    rank: int


@dataclass(frozen=True)
class Ranking:
    method: Method
    entries: tuple[RankEntry, ...]

    @property
    def order(self) -> list[str]:
        return [e.school for e in self.entries]

    def ranks(self) -> dict[str, int]:
        return {e.school: e.rank for e in self.entries}

    def scores(self) -> dict[str, float]:
        return {e.school: e.score for e in self.entries}

    def __len__(self):
        return len(self.entries)


def ranking_from_scores(method: Method, scores: Mapping[str, float], higher_is_better: bool = True) -> Ranking:
    """Sort schools by score; equal scores fall back to ascending school id."""
    sign = -1.0 if higher_is_better else 1.0
    ordered = sorted(scores, key=lambda s: (sign * scores[s], s))
    return Ranking(Method(method), tuple(RankEntry(s, float(scores[s]), i + 1) for i, s in enumerate(ordered)))


def outdegree_ranking(network: HiringNetwork) -> Ranking:
    out, _ = degree_sequences(network)
    return ranking_from_scores(Method.OUTDEGREE, out)


# -- minimum violation ranking -------------------------------------------------

def violations(network: HiringNetwork, permutation: Sequence[str]) -> int:
    """Hires whose employer sits strictly above the alma mater in ``permutation`` (best first)."""
    pos = {s: i for i, s in enumerate(permutation)}
    if len(pos) != len(permutation):
        raise ValueError("permutation repeats a school")
    missing = [s for s in network.nodes if s not in pos]
    if missing or len(pos) != len(network.nodes):
        raise ValueError(f"permutation is not a bijection over the network nodes (missing {missing[:5]})")
    return sum(1 for e in network.edges if pos[e.dst] < pos[e.src])


@njit(cache=True, nogil=True)
def _count_violations(W, perm):
    n = perm.size
    v = 0
    for a in range(n):
        for b in range(a + 1, n):
            v += W[perm[b], perm[a]]
    return v


@njit(cache=True, nogil=True)
def _hill_climb(W, perm, proposals):
    """Zero-temperature swap search; mutates ``perm`` and returns its violation count.

    A swap of positions i < j only changes the orientation of pairs that
    involve the two moved nodes and the nodes strictly between them.
    """
    v = _count_violations(W, perm)
    for s in range(proposals.shape[0]):
        i = proposals[s, 0]
        j = proposals[s, 1]
        if i > j:
            i, j = j, i
        a = perm[i]
        b = perm[j]
        d = W[a, b] - W[b, a]
        for k in range(i + 1, j):
            x = perm[k]
            d += W[a, x] - W[x, a] + W[x, b] - W[b, x]
        if d <= 0:
            perm[i] = b
            perm[j] = a
            v += d
    return v


@dataclass(frozen=True)
class MVRResult:
    permutation: tuple[str, ...]
    violations: int
    restarts_used: int
    restart_violations: tuple[int, ...] = ()

    def ranking(self) -> Ranking:
        n = len(self.permutation)
        return Ranking(Method.MVR, tuple(RankEntry(s, float(n - i), i + 1)
                                         for i, s in enumerate(self.permutation)))


def _proposals(rng: np.random.Generator, n: int, steps: int) -> np.ndarray:
    i = rng.integers(0, n, size=steps)
    j = rng.integers(0, n - 1, size=steps)
    j = j + (j >= i)  # distinct pair, uniform over ordered pairs
    return np.stack([i, j], axis=1).astype(np.int64)


def mvr(network: HiringNetwork, seed: int = 42, restarts: int = 50, steps: int = 20_000,
        threads: int = 1) -> MVRResult:
    """Minimum violation ranking by randomized swap hill climbing.

    Each restart draws a random permutation (restart 0 starts from the
    out-degree order instead), then proposes ``steps`` swaps of two
    uniformly chosen positions, accepting any swap that does not increase
    the violation count. The best restart wins; ties go to the lower
    restart index. Restarts are independent and run on up to ``threads``
    worker threads without changing the result.
    """
    if not network.nodes:
        raise ValueError("empty network")
    if restarts < 1:
        raise ValueError("need at least one restart")
    nodes = network.nodes
    n = len(nodes)
    W = np.ascontiguousarray(network.adjacency().toarray().astype(np.int64))
    idx = network.index
    start0 = np.array([idx[s] for s in outdegree_ranking(network).order], dtype=np.int64)
    seqs = np.random.SeedSequence(seed).spawn(restarts)

    def run(r):
        rng = np.random.default_rng(seqs[r])
        perm = start0.copy() if r == 0 else rng.permutation(n).astype(np.int64)
        if n < 2:
            return int(_count_violations(W, perm)), perm
        v = _hill_climb(W, perm, _proposals(rng, n, steps))
        return int(v), perm

    if threads > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(r) for r in range(restarts)]
    best = min(range(restarts), key=lambda r: (results[r][0], r))
    v, perm = results[best]
    return MVRResult(tuple(nodes[i] for i in perm), v, restarts, tuple(r[0] for r in results))


def mvr_ranking(network: HiringNetwork, **kwargs) -> Ranking:
    return mvr(network, **kwargs).ranking()


# -- random-walk rankings ------------------------------------------------------

def pagerank_scores(network: HiringNetwork, damping: float = 0.85, tolerance: float = 1e-10) -> np.ndarray:
    """PageRank vector on the reversed hiring graph, aligned with ``network.nodes``.

    Each hire is a vote from the employer to the alma mater; parallel hires
    add weight and self-hires stay in the walk. Dangling schools spread
    their mass uniformly. Iterates until the L1 change drops below
    ``tolerance``.
    """
    if not 0 < damping < 1:
        raise ValueError("damping must lie in (0, 1)")
    n = len(network.nodes)
    if n == 0:
        raise ValueError("empty network")
    R = network.adjacency(reverse=True)
    out_w = np.asarray(R.sum(axis=1)).ravel()
    dangling = out_w == 0
    inv = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, out_w))
    RT = R.T.tocsr()
    x = np.full(n, 1.0 / n)
    for _ in range(MAX_ITER):
        x_new = damping * (RT @ (x * inv) + x[dangling].sum() / n) + (1.0 - damping) / n
        x_new /= x_new.sum()
        err = np.abs(x_new - x).sum()
        x = x_new
        if err < tolerance:
            return x
    raise ConvergenceError(f"pagerank did not converge in {MAX_ITER} iterations (residual {err:.3e})")


def pagerank(network: HiringNetwork, damping: float = 0.85, tolerance: float = 1e-10) -> Ranking:
    x = pagerank_scores(network, damping, tolerance)
    return ranking_from_scores(Method.PAGERANK, dict(zip(network.nodes, x.tolist())))


def leaderrank_scores(network: HiringNetwork, tolerance: float = 1e-10) -> np.ndarray:
    """LeaderRank vector on the reversed hiring graph, aligned with ``network.nodes``.

    A ground node linked both ways to every school makes the walk strongly
    connected. Scores start at 1 per school and 0 on the ground node; at
    stationarity the ground node's score is shared equally among the
    schools. Returned normalized to sum 1.

    The update is the lazy step ``s <- (s + sP) / 2``. It has the same
    fixed point as ``s <- sP`` but also converges when the walk is
    periodic (for instance, an edgeless network, where the walk just
    bounces between the ground node and the schools).
    """
    n = len(network.nodes)
    if n == 0:
        raise ValueError("empty network")
    R = network.adjacency(reverse=True).toarray()
    M = np.zeros((n + 1, n + 1))
    M[:n, :n] = R
    M[:n, n] = 1.0
    M[n, :n] = 1.0
    P = M / M.sum(axis=1, keepdims=True)
    s = np.concatenate([np.ones(n), [0.0]])
    for _ in range(MAX_ITER):
        s_new = 0.5 * (s + s @ P)
        err = np.abs(s_new - s).sum()
        s = s_new
        if err < tolerance:
            break
    else:
        raise ConvergenceError(f"leaderrank did not converge in {MAX_ITER} iterations (residual {err:.3e})")
    scores = s[:n] + s[n] / n
    return scores / scores.sum()


def leaderrank(network: HiringNetwork, tolerance: float = 1e-10) -> Ranking:
    x = leaderrank_scores(network, tolerance)
    return ranking_from_scores(Method.LEADERRANK, dict(zip(network.nodes, x.tolist())))


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("pearson needs two equal-length vectors of length >= 2")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = np.dot(dx, dx)
    syy = np.dot(dy, dy)
    if sxx == 0 or syy == 0:
        raise ValueError("pearson is undefined for a constant vector")
    return float(np.clip(np.dot(dx, dy) / math.sqrt(sxx * syy), -1.0, 1.0))


def rank_by(network: HiringNetwork, method: Method | str, *, damping: float = 0.85,
            tolerance: float = 1e-10, seed: int = 42, restarts: int = 50, steps: int = 20_000,
            threads: int = 1) -> Ranking:
    method = Method(method)
    if method is Method.OUTDEGREE:
        return outdegree_ranking(network)
    if method is Method.MVR:
        return mvr_ranking(network, seed=seed, restarts=restarts, steps=steps, threads=threads)
    if method is Method.PAGERANK:
        return pagerank(network, damping, tolerance)
    if method is Method.LEADERRANK:
        return leaderrank(network, tolerance)
    raise ValueError(f"{method.value} is not a network ranking method")


def method_correlations(rankings: Sequence[Ranking]) -> dict[tuple[str, str], float | None]:
    """Pearson correlation of score vectors for every pair of rankings over the same schools."""
    out: dict[tuple[str, str], float | None] = {}
    for i, a in enumerate(rankings):
        sa = a.scores()
        for b in rankings[i + 1:]:
            sb = b.scores()
            common = sorted(sa.keys() & sb.keys())
            try:
                out[(a.method.value, b.method.value)] = pearson([sa[s] for s in common], [sb[s] for s in common])
            except ValueError:
                out[(a.method.value, b.method.value)] = None
    return out
