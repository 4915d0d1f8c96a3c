"""Modularity-based community detection on the symmetrized hiring network.

The directed multigraph is folded into an undirected weighted graph with
``W = A + A^T``: an undirected edge's weight is the number of hires in either
direction, and a self-hire adds 2 to the diagonal (so it counts twice toward
the school's degree, the usual undirected convention).
"""

from __future__ import annotations

import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

import networkx as nx
import numpy as np

from .netcore import HiringNetwork, degree_sequences

TOLERANCE = 1e-7


@dataclass(frozen=True)
class Partition:
    assignment: Mapping[str, int]
    modularity: float

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))

    def communities(self) -> list[list[str]]:
        groups: dict[int, list[str]] = defaultdict(list)
        for node, c in self.assignment.items():
            groups[c].append(node)
        return [sorted(groups[c]) for c in sorted(groups)]


def symmetric_weights(network: HiringNetwork) -> dict[str, dict[str, float]]:
    """Undirected adjacency ``{u: {v: w}}`` of ``A + A^T`` (diagonal holds 2x self-hires)."""
    adj: dict[str, dict[str, float]] = {s: {} for s in network.nodes}
    for e in network.edges:
        adj[e.src][e.dst] = adj[e.src].get(e.dst, 0.0) + 1.0
        adj[e.dst][e.src] = adj[e.dst].get(e.src, 0.0) + 1.0
    return adj


def modularity(network: HiringNetwork, assignment: Mapping[str, int]) -> float:
    """Newman modularity of ``assignment`` on the symmetrized weight matrix.

    ``Q = (1/2m) sum_ij [W_ij - k_i k_j / 2m] delta(c_i, c_j)``.
    """
    missing = [s for s in network.nodes if s not in assignment]
    if missing:
        raise KeyError(f"assignment lacks node(s): {', '.join(missing[:5])}")
    if not network.edges:
        raise ValueError("modularity is undefined without edges")
    W = network.adjacency().toarray()
    W = W + W.T
    k = W.sum(axis=1)
    two_m = k.sum()
    labels = np.array([assignment[s] for s in network.nodes])
    same = labels[:, None] == labels[None, :]
    return float(((W - np.outer(k, k) / two_m) * same).sum() / two_m)


def _one_level(adj, degree, two_m, order, rng, randomized):
    """Local moves on one graph level until no node moves.

    Greedy mode sends each node to the neighbouring community with the
    largest gain. Randomized mode picks among the improving communities
    with probability proportional to the gain, which lets repeated trials
    reach optima the greedy sweep cannot.
    """
    comm = {u: u for u in order}
    tot = dict(degree)
    moved_any = False
    while True:
        moved = 0
        nodes = list(order)
        rng.shuffle(nodes)
        for u in nodes:
            cu = comm[u]
            ku = degree[u]
            links: dict = {}
            for v, w in adj[u].items():
                if v == u:
                    continue
                cv = comm[v]
                links[cv] = links.get(cv, 0.0) + w
            tot[cu] -= ku
            stay = links.get(cu, 0.0) - tot[cu] * ku / two_m
            best = cu
            if randomized:
                cands = [(c, w_in - tot[c] * ku / two_m - stay) for c, w_in in links.items() if c != cu]
                cands = [(c, g) for c, g in cands if g > TOLERANCE]
                if cands:
                    r = rng.random() * sum(g for _, g in cands)
                    best = cands[-1][0]
                    for c, g in cands:
                        r -= g
                        if r <= 0:
                            best = c
                            break
            else:
                best_gain = stay
                for c, w_in in links.items():
                    gain = w_in - tot[c] * ku / two_m
                    if gain > best_gain + TOLERANCE:
                        best, best_gain = c, gain
            tot[best] += ku
            if best != cu:
                comm[u] = best
                moved += 1
        if not moved:
            break
        moved_any = True
    return comm, moved_any


def _level_modularity(adj, degree, two_m, comm):
    inside: Counter = Counter()
    tot: Counter = Counter()
    for u, nbrs in adj.items():
        tot[comm[u]] += degree[u]
        for v, w in nbrs.items():
            if comm[v] == comm[u]:
                inside[comm[u]] += w
    return sum(inside[c] / two_m - (tot[c] / two_m) ** 2 for c in tot)


def _unfold(network, rng, randomized, on_level=None):
    adj = symmetric_weights(network)
    degree = {u: sum(nbrs.values()) for u, nbrs in adj.items()}
    two_m = sum(degree.values())
    members: dict = {u: [u] for u in network.nodes}
    order = list(network.nodes)

    q_prev = _level_modularity(adj, degree, two_m, {u: u for u in order})
    level = 0
    while True:
        comm, moved = _one_level(adj, degree, two_m, order, rng, randomized)
        if not moved:
            break
        q = _level_modularity(adj, degree, two_m, comm)
        if q < q_prev - 1e-12:
            raise AssertionError(f"modularity decreased at level {level}: {q_prev} -> {q}")
        level += 1
        if on_level is not None:
            on_level(level, q)
        # aggregate: one super-node per community, keyed by the community label
        new_members: dict = defaultdict(list)
        for u in order:
            new_members[comm[u]].extend(members[u])
        new_adj: dict = {c: {} for c in new_members}
        for u, nbrs in adj.items():
            cu = comm[u]
            for v, w in nbrs.items():
                cv = comm[v]
                new_adj[cu][cv] = new_adj[cu].get(cv, 0.0) + w
        order = list(new_members)
        adj, members = new_adj, dict(new_members)
        degree = {u: sum(nbrs.values()) for u, nbrs in adj.items()}
        done = q - q_prev < TOLERANCE
        q_prev = q
        if done:
            break
    return list(members.values()), q_prev


def louvain(network: HiringNetwork, seed: int = 42, trials: int = 20,
            on_level: Callable[[int, int, float], None] | None = None) -> Partition:
    """Fast-unfolding modularity maximization (resolution 1).

    Each trial alternates local node moves with aggregation of communities
    into super-nodes until a level moves nothing or gains less than 1e-7.
    Trial 0 is the classic greedy sweep with visit order shuffled by
    ``random.Random(seed)``; later trials use gain-weighted random moves
    with seeds derived from ``seed``. The highest-modularity trial is
    returned (earliest trial on ties). ``on_level(trial, level, Q)`` is
    called after every level; within a trial Q never decreases.

    Community labels are dense, ordered by size (largest first) and then by
    smallest member id.
    """
    if not network.edges:
        raise ValueError("louvain needs at least one edge")
    if trials < 1:
        raise ValueError("need at least one trial")
    best_groups, best_q = None, -math.inf
    for t in range(trials):
        rng = random.Random(seed if t == 0 else f"{seed}/{t}")
        hook = None if on_level is None else (lambda lvl, q, t=t: on_level(t, lvl, q))
        groups, q = _unfold(network, rng, randomized=t > 0, on_level=hook)
        if q > best_q + 1e-12:
            best_groups, best_q = groups, q

    groups = sorted((sorted(m) for m in best_groups), key=lambda g: (-len(g), g[0]))
    assignment = {s: label for label, g in enumerate(groups) for s in g}
    assignment = {s: assignment[s] for s in network.nodes}
    return Partition(assignment, float(best_q))


@dataclass(frozen=True)
class CommunityReport:
    n_communities: int
    sizes: tuple[int, ...]
    top6_coverage: float
    modularity: float

    def as_dict(self) -> dict:
        return {"n_communities": self.n_communities, "sizes": list(self.sizes),
                "top6_coverage": self.top6_coverage, "modularity": self.modularity}


def community_report(partition: Partition) -> CommunityReport:
    sizes = tuple(sorted(Counter(partition.assignment.values()).values(), reverse=True))
    n = sum(sizes)
    return CommunityReport(len(sizes), sizes, sum(sizes[:6]) / n if n else 1.0, partition.modularity)


def community_colors(partition: Partition, n_colors: int = 6) -> dict[str, int]:
    """Color index per node: 0..n_colors-1 for the largest communities, n_colors for the rest."""
    sizes = Counter(partition.assignment.values())
    ranked = sorted(sizes, key=lambda c: (-sizes[c], c))
    color_of = {c: min(i, n_colors) for i, c in enumerate(ranked)}
    return {s: color_of[c] for s, c in partition.assignment.items()}


def geo_graph(network: HiringNetwork, partition: Partition) -> tuple[nx.DiGraph, int]:
    """Node-attributed graph for map rendering, and the number of nodes skipped for lacking coordinates."""
    out, _ = degree_sequences(network)
    colors = community_colors(partition)
    g = nx.DiGraph()
    skipped = 0
    for s in network.nodes:
        info = network.schools[s]
        if not info.has_coordinates:
            skipped += 1
            continue
        g.add_node(s, label=info.display_name or s, x=float(info.longitude), y=float(info.latitude),
                   size=1 + out[s], color=colors[s], community=int(partition.assignment[s]),
                   division=info.division.value)
    weights = Counter((e.src, e.dst) for e in network.edges
                      if e.src in g and e.dst in g)
    for (u, v), w in sorted(weights.items()):
        g.add_edge(u, v, weight=w)
    return g, skipped


def export_geo(network: HiringNetwork, partition: Partition, path) -> int:
    """Write GraphML with x=longitude, y=latitude, size=1+out-degree, color=community size rank.

    Returns the number of nodes left out because they have no coordinates.
    """
    g, skipped = geo_graph(network, partition)
    nx.write_graphml(g, str(path))
    return skipped


def to_dot(g: nx.DiGraph) -> str:
    lines = ["digraph hiring {"]
    for n, d in g.nodes(data=True):
        attrs = ", ".join(f'{k}="{v}"' for k, v in d.items())
        lines.append(f'  "{n}" [{attrs}];')
    for u, v, d in g.edges(data=True):
        lines.append(f'  "{u}" -> "{v}" [weight={d["weight"]}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(network: HiringNetwork, partition: Partition, path) -> int:
    g, skipped = geo_graph(network, partition)
    Path(path).write_text(to_dot(g), encoding="utf-8")
    return skipped
