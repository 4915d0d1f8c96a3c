"""Run every coachnet subcommand for both sports into one output directory.

    python3 scripts/run_pipeline.py OUT_DIR [--data DIR] [--seed N]

Defaults to the bundled fixture. The AP span is 2 years on the fixture (it
only holds 4 poll years); pass ``--span 20`` for real data.
"""

import argparse
import sys
from pathlib import Path

from coachnet.cli import run

BUNDLED = Path(__file__).resolve().parents[1] / "src" / "coachnet" / "data"
SPORTS = ("basketball", "football")
METHODS = ("outdegree", "mvr", "pagerank", "leaderrank")


def pipeline(data: Path, out: Path, sport: str, seed: int = 42, span: int = 2) -> list[list[str]]:
    """Argument vectors for one sport, in dependency order."""
    o = lambda name: str(out / f"{sport}.{name}")  # noqa: E731
    net = ["--in", o("edges.csv"), "--schools", str(data / "schools.csv"), "--sport", sport]
    seeded = ["--seed", str(seed)]
    cmds = [
        ["build", "--coaches", str(data / sport / "coaches.csv"), "--schools", str(data / "schools.csv"),
         "--sport", sport, "--out", o("edges.csv"), "--drops", o("drops.json")],
        ["summary", *net, "--out", o("summary.json")],
        ["inequality", *net, "--out", o("inequality.json"), "--lorenz", o("lorenz.csv")],
        ["communities", *net, *seeded, "--out", o("communities.csv"), "--report", o("communities.json")],
    ]
    for m in METHODS:
        cmds.append(["rank", *net, *seeded, "--method", m, "--out", o(f"rank_{m}.csv")]
                    + (["--meta", o("rank_mvr.json")] if m == "mvr" else []))
    cmds += [
        ["windows", *net, "--out", o("windows.csv"), "--grad-hist", o("grad_hist.csv"),
         "--growth-hist", o("growth_hist.csv")],
        ["aggregate-ap", "--ap", str(data / "ap_polls.csv"), "--sport", sport, "--span", str(span),
         "--out", o("ap.csv")],
        ["corr-grid", *net, *seeded, "--ap", str(data / "ap_polls.csv"), "--span", str(span),
         "--out", o("grid.csv"), "--long", o("grid_long.csv")],
        ["flows", *net, "--out", o("flows.csv"), "--findings", o("flows.json")],
        ["export-geo", *net, "--partition", o("communities.csv"), "--out", o("geo.graphml"), "--dot", o("geo.dot")],
    ]
    return cmds


def run_all(data: Path, out: Path, seed: int = 42, span: int = 2) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for sport in SPORTS:
        for argv in pipeline(data, out, sport, seed, span):
            code = run(argv)
            if code:
                raise RuntimeError(f"coachnet {' '.join(argv)} exited with {code}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out", type=Path)
    ap.add_argument("--data", type=Path, default=BUNDLED)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--span", type=int, default=2)
    args = ap.parse_args()
    run_all(args.data, args.out, args.seed, args.span)
    print(f"wrote {len(list(args.out.iterdir()))} files to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
