"""Default breaking run followed by singularity analysis.

Usage: python3 scripts/breaking_run.py [--N 4096] [--out runs/breaking]

Writes the same files as ``novikov-lab solve`` followed by
``novikov-lab analyze``; the analysis prints one line per event.
"""

import argparse
from pathlib import Path

from novikov_lab.cli import main


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--N", type=int, default=4096)
    p.add_argument("--t-end", type=float, default=2.2)
    p.add_argument("--out", type=Path, default=Path("runs/breaking"))
    return p.parse_args()


if __name__ == "__main__":
    args = parse_args()
    sets = ["--set", f"grid.N={args.N}", "--set", f"time.t_end={args.t_end}"]
    if main(["solve", *sets, "--out", str(args.out)]) != 0:
        raise SystemExit("solve failed")
    if main(["analyze", str(args.out)]) != 0:
        raise SystemExit("analysis failed")
