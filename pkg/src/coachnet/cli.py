"""``coachnet`` command line.

Every subcommand reads CSV inputs, writes its outputs atomically and drops a
``<out>.manifest.json`` next to the main output. Exit codes: 0 success,
1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import statistics
import sys
import tempfile
from pathlib import Path

import networkx as nx

from . import __version__
from .community import community_report, geo_graph, louvain, modularity, to_dot, Partition
from .flows import division_flow_matrix, flow_findings
from .inequality import inequality_report, lorenz
from .ingest import SchemaError, Sport, parse_ap_polls, parse_coach_records, parse_school_table
from .netcore import (HiringNetwork, build_network, degree_sequences, read_edges, records_from_network,
                      summarize, write_edges)
from .rankcorr import FILL_MODES, aggregate_polls, correlation_grid
from .ranking import ConvergenceError, Method, mvr, rank_by
from .temporal import extract_windows, graduation_histogram, growth_time_histogram, subnetwork

DATA_ERRORS = (SchemaError, ValueError, KeyError, OSError, ConvergenceError)


# -- output helpers ------------------------------------------------------------

def fmt(x) -> str:
    if isinstance(x, float):
        return "" if math.isnan(x) else repr(x)
    return str(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def file_hash(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


INPUT_FLAGS = ("coaches", "schools", "edges", "ap", "partition")
OUTPUT_FLAGS = ("out", "drops", "lorenz", "report", "meta", "grad_hist", "growth_hist", "long",
                "findings", "dot")


def write_manifest(args) -> None:
    """Record the command, input hashes and parameters next to ``args.out``.

    Inputs are keyed by file name so that manifests of runs in different
    output directories compare equal.
    """
    inputs = {}
    for flag in INPUT_FLAGS:
        p = getattr(args, flag, None)
        if p:
            inputs[Path(p).name] = file_hash(p)
    params = {k: (v.value if hasattr(v, "value") else v) for k, v in sorted(vars(args).items())
              if k not in INPUT_FLAGS + OUTPUT_FLAGS + ("func", "command")}
    manifest = {
        "command": args.command,
        "input_hashes": inputs,
        "seed": getattr(args, "seed", None),
        "parameters": params,
        "tool_version": __version__,
    }
    atomic_write(str(args.out) + ".manifest.json", json_text(manifest))


# -- input helpers -------------------------------------------------------------

def _require(path, what):
    if not Path(path).is_file():
        raise FileNotFoundError(f"{what} file not found: {path}")


def load_network(args) -> HiringNetwork:
    sport = Sport.parse(args.sport) if args.sport else None
    schools = None
    if args.schools:
        _require(args.schools, "schools")
        schools = parse_school_table(args.schools, sport)
    if args.coaches:
        _require(args.coaches, "coaches")
        records, _ = parse_coach_records(args.coaches)
        return build_network(records, schools, sport)
    _require(args.edges, "edge list")
    return read_edges(args.edges, schools, sport)


# -- subcommands ---------------------------------------------------------------

def cmd_build(args):
    _require(args.coaches, "coaches")
    records, drops = parse_coach_records(args.coaches)
    schools = None
    if args.schools:
        _require(args.schools, "schools")
        schools = parse_school_table(args.schools, args.sport)
    net = build_network(records, schools, args.sport)
    atomic_write(args.out, write_edges(net))
    if args.drops:
        info = drops.as_dict()
        info["school_table_warnings"] = schools.warnings if schools is not None else 0
        atomic_write(args.drops, json_text(info))


def cmd_summary(args):
    atomic_write(args.out, json_text(summarize(load_network(args)).as_dict()))


def cmd_inequality(args):
    net = load_network(args)
    atomic_write(args.out, json_text(inequality_report(net).as_dict()))
    if args.lorenz:
        out, _ = degree_sequences(net)
        curve = lorenz([out[s] for s in net.nodes])
        atomic_write(args.lorenz, csv_text(["population_fraction", "value_fraction"], curve.points))


def cmd_communities(args):
    net = load_network(args)
    parts = [louvain(net, seed=args.seed + k, trials=args.trials) for k in range(args.runs)]
    best = parts[0]
    atomic_write(args.out, csv_text(["school", "community"], sorted(best.assignment.items())))
    if args.report:
        rep = community_report(best).as_dict()
        rep["seed"] = args.seed
        rep["runs"] = args.runs
        rep["mean_modularity"] = statistics.fmean(p.modularity for p in parts)
        rep["run_modularities"] = [p.modularity for p in parts]
        atomic_write(args.report, json_text(rep))


def _rank_kwargs(args):
    return dict(damping=args.damping, tolerance=args.tol, seed=args.seed, restarts=args.restarts,
                steps=args.steps, threads=args.threads)


def cmd_rank(args):
    net = load_network(args)
    if args.method == "mvr":
        res = mvr(net, seed=args.seed, restarts=args.restarts, steps=args.steps, threads=args.threads)
        ranking = res.ranking()
        if args.meta:
            atomic_write(args.meta, json_text({
                "violations": res.violations, "restarts_used": res.restarts_used,
                "restart_violations": list(res.restart_violations), "seed": args.seed,
                "steps": args.steps, "n_edges": len(net.edges)}))
    else:
        ranking = rank_by(net, args.method, **_rank_kwargs(args))
    atomic_write(args.out, csv_text(["rank", "school", "score", "method"],
                                    ((e.rank, e.school, e.score, ranking.method.value) for e in ranking.entries)))


def cmd_windows(args):
    records = records_from_network(load_network(args))
    wins = extract_windows(records, args.fraction)
    atomic_write(args.out, csv_text(["t_s", "t_e", "coach_count"], ((w.t_s, w.t_e, w.coach_count) for w in wins)))
    if args.grad_hist:
        atomic_write(args.grad_hist, csv_text(["year", "count"], graduation_histogram(records).items()))
    if args.growth_hist:
        hist, _ = growth_time_histogram(records)
        atomic_write(args.growth_hist, csv_text(["year", "count"], hist.items()))


def cmd_aggregate_ap(args):
    _require(args.ap, "AP poll")
    table = parse_ap_polls(args.ap, args.sport)
    stride = 1 if args.rolling else args.stride
    aggs = aggregate_polls(table, args.span, stride, args.universe, args.fill)
    rows = ((a.span[0], a.span[1], e.rank, e.school, e.score) for a in aggs for e in a.ranking.entries)
    atomic_write(args.out, csv_text(["span_start", "span_end", "rank", "school", "median_rank"], rows))


def cmd_corr_grid(args):
    _require(args.ap, "AP poll")
    net = load_network(args)
    table = parse_ap_polls(args.ap, args.sport)
    stride = 1 if args.rolling else args.stride
    aggs = aggregate_polls(table, args.span, stride, args.universe, args.fill)
    wins = extract_windows(records_from_network(net), args.fraction)
    kw = _rank_kwargs(args)
    kw["threads"] = 1
    prods = [(w, rank_by(subnetwork(net, w), args.method, **kw)) for w in wins]
    grid = correlation_grid(aggs, prods, threads=args.threads)
    header = ["window"] + [f"{a}-{b}" for a, b in grid.cols]
    atomic_write(args.out, csv_text(header, ([w.label] + grid.tau[i].tolist() for i, w in enumerate(grid.rows))))
    if args.long:
        atomic_write(args.long, csv_text(["ap_span", "window", "tau"], grid.long_rows()))


def cmd_flows(args):
    net = load_network(args)
    fm = division_flow_matrix(net, cutoff_year=args.cutoff, inclusive=args.inclusive)
    rows = []
    for i, lab in enumerate(fm.labels):
        rows.append([lab] + fm.fractions[i].tolist() + [float(fm.row_totals[i])])
    rows.append(["All"] + fm.col_totals.tolist() + [""])
    atomic_write(args.out, csv_text([""] + fm.labels + ["All"], rows))
    if args.findings:
        rep = flow_findings(fm)
        rep["n_edges_used"] = fm.n_edges_used
        rep["n_edges_skipped"] = fm.n_edges_skipped
        atomic_write(args.findings, json_text(rep))


def _read_partition(path, net) -> Partition:
    _require(path, "partition")
    with open(path, newline="", encoding="utf-8") as fh:
        assignment = {r["school"]: int(r["community"]) for r in csv.DictReader(fh)}
    return Partition(assignment, modularity(net, assignment))


def cmd_export_geo(args):
    net = load_network(args)
    if args.partition:
        part = _read_partition(args.partition, net)
    else:
        part = louvain(net, seed=args.seed, trials=args.trials)
    g, skipped = geo_graph(net, part)
    buf = io.BytesIO()
    nx.write_graphml(g, buf)
    atomic_write(args.out, buf.getvalue().decode("utf-8"))
    if args.dot:
        atomic_write(args.dot, to_dot(g))
    if skipped:
        print(f"export-geo: skipped {skipped} school(s) without coordinates", file=sys.stderr)


# -- parser --------------------------------------------------------------------

def _network_args(p, edges_ok=True):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--coaches", help="coaches.csv (one row per stint)")
    if edges_ok:
        src.add_argument("--in", dest="edges", help="edge-list CSV written by `build`")
    p.add_argument("--schools", help="schools.csv with coordinates and divisions")
    p.add_argument("--sport", choices=[s.value for s in Sport])


def _common(p):
    p.add_argument("--out", required=True, help="main output file")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--threads", type=int, default=1, help="max worker threads")


def _rank_args(p, default_method):
    methods = [m.value for m in Method if m is not Method.AGGREGATED]
    p.add_argument("--method", choices=methods, default=default_method)
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--steps", type=int, default=20_000)


def _poll_args(p):
    p.add_argument("--ap", required=True, help="ap_polls.csv")
    p.add_argument("--span", type=int, default=20, help="years per aggregated poll")
    p.add_argument("--stride", type=int, default=None, help="years between span starts (default: span)")
    p.add_argument("--rolling", action="store_true", help="stride of one year")
    p.add_argument("--universe", choices=["any", "all"], default="any",
                   help="schools ranked in any / every poll year of a span")
    p.add_argument("--fill", choices=list(FILL_MODES), default="formula",
                   help="rank given to unranked schools: (m+1+n)/2 or the mid-rank of the vacant positions")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coachnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("build", help="coach records -> edge-list CSV")
    p.add_argument("--coaches", required=True)
    p.add_argument("--schools")
    p.add_argument("--sport", choices=[s.value for s in Sport], required=True)
    p.add_argument("--drops", help="JSON report of dropped rows")
    _common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("summary", help="network summary JSON")
    _network_args(p)
    _common(p)
    p.set_defaults(func=cmd_summary)

    p = sub.add_parser("inequality", help="Gini / coverage report and Lorenz points")
    _network_args(p)
    _common(p)
    p.add_argument("--lorenz", help="Lorenz curve CSV")
    p.set_defaults(func=cmd_inequality)

    p = sub.add_parser("communities", help="Louvain partition CSV")
    _network_args(p)
    _common(p)
    p.add_argument("--runs", type=int, default=1, help="seeded runs to average modularity over")
    p.add_argument("--trials", type=int, default=20, help="Louvain trials per run (best kept)")
    p.add_argument("--report", help="community report JSON")
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("rank", help="production ranking CSV")
    _network_args(p)
    _common(p)
    _rank_args(p, "pagerank")
    p.add_argument("--meta", help="MVR metadata JSON")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("windows", help="trailing graduation windows and histograms")
    _network_args(p)
    _common(p)
    p.add_argument("--fraction", type=float, default=0.3)
    p.add_argument("--grad-hist", help="graduation-year histogram CSV")
    p.add_argument("--growth-hist", help="growth-time histogram CSV")
    p.set_defaults(func=cmd_windows)

    p = sub.add_parser("aggregate-ap", help="median-aggregated AP rankings per span")
    _poll_args(p)
    p.add_argument("--sport", choices=[s.value for s in Sport], required=True)
    _common(p)
    p.set_defaults(func=cmd_aggregate_ap)

    p = sub.add_parser("corr-grid", help="Kendall tau grid: AP spans x production windows")
    _network_args(p)
    _poll_args(p)
    _common(p)
    _rank_args(p, "pagerank")
    p.add_argument("--fraction", type=float, default=0.3)
    p.add_argument("--long", help="long-format CSV ap_span,window,tau")
    p.set_defaults(func=cmd_corr_grid)

    p = sub.add_parser("flows", help="division flow matrix")
    _network_args(p)
    _common(p)
    p.add_argument("--cutoff", type=int, default=1973)
    p.add_argument("--inclusive", action="store_true", help="count graduates of the cutoff year too")
    p.add_argument("--findings", help="findings JSON")
    p.set_defaults(func=cmd_flows)

    p = sub.add_parser("export-geo", help="GraphML (and DOT) for map rendering")
    _network_args(p)
    _common(p)
    p.add_argument("--partition", help="partition CSV from `communities` (default: run Louvain)")
    p.add_argument("--trials", type=int, default=20, help="Louvain trials when no partition is given")
    p.add_argument("--dot", help="also write a DOT file")
    p.set_defaults(func=cmd_export_geo)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "schools", None) and not getattr(args, "sport", None):
        parser.print_usage(sys.stderr)
        print("coachnet: error: --schools needs --sport to pick the division column", file=sys.stderr)
        return 2
    if args.command in ("corr-grid", "flows") and not args.sport:
        parser.print_usage(sys.stderr)
        print(f"coachnet: error: {args.command} needs --sport", file=sys.stderr)
        return 2
    try:
        args.func(args)
        write_manifest(args)
    except DATA_ERRORS as exc:
        print(f"coachnet: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
