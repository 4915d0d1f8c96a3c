"""Directed hiring multigraph: alma mater -> employer, one edge per stint."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np
from scipy import sparse

from .ingest import CoachRecord, SchoolInfo, SchemaError, Sport, Stint

EDGE_COLUMNS = ("src", "dst", "coach_id", "grad_year", "hire_year", "tenure_years")


@dataclass(frozen=True, order=True)
class HiringEdge:
    src: str
    dst: str
    coach_id: str
    grad_year: int
    hire_year: int
    tenure_years: int

    def __post_init__(self):
        if self.tenure_years < 1:
            raise ValueError(f"edge {self.src}->{self.dst}: tenure must be >= 1")
        if self.grad_year > self.hire_year:
            raise ValueError(f"edge {self.src}->{self.dst}: hired before graduating")


@dataclass(frozen=True)
class HiringNetwork:
    """Immutable hiring multigraph.

    ``nodes`` is sorted; ``schools`` has an entry for every node (schools
    missing from the attribute table get an Unknown-division stub).
    Parallel edges and self-loops are kept as separate edges.
    """

    nodes: tuple[str, ...]
    edges: tuple[HiringEdge, ...]
    schools: Mapping[str, SchoolInfo]
    sport: Sport | None = None

    def __post_init__(self):
        node_set = set(self.nodes)
        for e in self.edges:
            if e.src not in node_set or e.dst not in node_set:
                raise ValueError(f"edge {e.src}->{e.dst} has an endpoint outside the node set")

    @property
    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.nodes)}

    def __len__(self):
        return len(self.nodes)

    def adjacency(self, reverse: bool = False) -> sparse.csr_matrix:
        """Edge-count matrix ``A[i, j]`` = hires i -> j (or j -> i if ``reverse``)."""
        idx = self.index
        n = len(self.nodes)
        if not self.edges:
            return sparse.csr_matrix((n, n), dtype=float)
        rows = np.fromiter((idx[e.src] for e in self.edges), dtype=np.int64, count=len(self.edges))
        cols = np.fromiter((idx[e.dst] for e in self.edges), dtype=np.int64, count=len(self.edges))
        if reverse:
            rows, cols = cols, rows
        data = np.ones(len(self.edges))
        # duplicate (i, j) entries are summed, so parallel edges become weights
        return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))


def build_network(records: Iterable[CoachRecord], schools: Mapping[str, SchoolInfo] | None = None,
                  sport: Sport | str | None = None) -> HiringNetwork:
    """One edge per (coach, stint) from the coach's alma mater to the employer."""
    schools = schools or {}
    edges = []
    for rec in records:
        for st in rec.stints:
            edges.append(HiringEdge(rec.alma_mater, st.school, rec.coach_id, rec.grad_year,
                                    st.start_year, st.end_year - st.start_year + 1))
    return network_from_edges(edges, schools, sport)


def network_from_edges(edges: Iterable[HiringEdge], schools: Mapping[str, SchoolInfo] | None = None,
                       sport: Sport | str | None = None) -> HiringNetwork:
    schools = schools or {}
    edges = tuple(sorted(edges))
    nodes = tuple(sorted({e.src for e in edges} | {e.dst for e in edges}))
    info = {s: schools.get(s) or SchoolInfo(s) for s in nodes}
    return HiringNetwork(nodes, edges, info, Sport.parse(sport) if sport is not None else None)


@dataclass(frozen=True)
class NetworkSummary:
    n_schools: int
    n_coaches: int
    n_edges: int
    mean_degree: float
    mean_total_degree: float
    self_loop_fraction: float
    mean_hiring_years: float
    year_range: tuple[int, int]

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["year_range"] = list(self.year_range)
        return d


def summarize(network: HiringNetwork) -> NetworkSummary:
    """Headline counts of a hiring network.

    ``mean_degree`` is edges per school (each edge counted once), the
    convention under which 5744 hires over 857 schools read as 6.70.
    ``mean_total_degree`` is the textbook in+out average, ``2 E / N``.
    ``self_loop_fraction`` is per coach: the share of coaches with at
    least one stint at their own alma mater.
    """
    if not network.edges:
        raise ValueError("cannot summarize an empty network")
    n = len(network.nodes)
    m = len(network.edges)
    coaches = {e.coach_id for e in network.edges}
    loopers = {e.coach_id for e in network.edges if e.src == e.dst}
    grads = [e.grad_year for e in network.edges]
    return NetworkSummary(
        n_schools=n,
        n_coaches=len(coaches),
        n_edges=m,
        mean_degree=m / n,
        mean_total_degree=2 * m / n,
        self_loop_fraction=len(loopers) / len(coaches),
        mean_hiring_years=float(np.mean([e.tenure_years for e in network.edges])),
        year_range=(min(grads), max(grads)),
    )


def degree_sequences(network: HiringNetwork) -> tuple[dict[str, int], dict[str, int]]:
    """Out-degree (production) and in-degree (hiring) of every node, parallel edges included."""
    out = Counter(e.src for e in network.edges)
    inn = Counter(e.dst for e in network.edges)
    return ({s: out.get(s, 0) for s in network.nodes},
            {s: inn.get(s, 0) for s in network.nodes})


def write_edges(network: HiringNetwork, path=None) -> str:
    """Serialize to the canonical edge-list CSV; returns the text and writes it if ``path`` is given."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(EDGE_COLUMNS)
    for e in network.edges:
        w.writerow([e.src, e.dst, e.coach_id, e.grad_year, e.hire_year, e.tenure_years])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_edges(path, schools: Mapping[str, SchoolInfo] | None = None,
               sport: Sport | str | None = None) -> HiringNetwork:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in EDGE_COLUMNS if c not in (reader.fieldnames or ())]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        try:
            edges = [HiringEdge(r["src"], r["dst"], r["coach_id"], int(r["grad_year"]),
                                int(r["hire_year"]), int(r["tenure_years"])) for r in reader]
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{path}: {exc}") from None
    return network_from_edges(edges, schools, sport)


def records_from_network(network: HiringNetwork) -> list[CoachRecord]:
    """Rebuild coach records from hiring edges (inverse of ``build_network``, names aside)."""
    by_coach: dict[str, list[HiringEdge]] = {}
    for e in network.edges:
        by_coach.setdefault(e.coach_id, []).append(e)
    records = []
    for cid in sorted(by_coach):
        es = by_coach[cid]
        stints = tuple(sorted((Stint(e.dst, e.hire_year, e.hire_year + e.tenure_years - 1) for e in es),
                              key=lambda s: (s.start_year, s.end_year, s.school)))
        records.append(CoachRecord(cid, "", es[0].src, es[0].grad_year, stints))
    return records
