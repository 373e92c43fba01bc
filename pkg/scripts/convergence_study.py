"""Exponent estimates of the generic cusp under grid refinement.

Runs the default breaking configuration at several resolutions and, for each,
reports the mean |alpha - 4/5| over generic events and the estimate at the
event with the largest |v_Y| at the final snapshot.

Usage: python3 scripts/convergence_study.py [--N 1024 2048 4096]
"""

import argparse
import time

import numpy as np

from novikov_lab.charsolver import init_from_u0, run
from novikov_lab.profiles import make_profile
from novikov_lab.singularity import TYPE_II, FitConfig, analyze_run


def summarize(report):
    gen = [it for it in report["events"]
           if it["event"].classification == TYPE_II and it["median_alpha"] is not None]
    if not gen:
        return None
    t_last = max(it["event"].t0 for it in gen)
    best = max((it for it in gen if it["event"].t0 == t_last),
               key=lambda it: abs(it["event"].vY))
    mean_dev = float(np.mean([abs(it["median_alpha"] - 0.8) for it in gen]))
    return len(gen), mean_dev, best


if __name__ == "__main__":
    p = argparse.ArgumentParser(description="generic cusp exponent vs resolution")
    p.add_argument("--N", type=int, nargs="+", default=[1024, 2048, 4096])
    p.add_argument("--t-end", type=float, default=2.2)
    args = p.parse_args()

    u0 = make_profile("gaussian", amplitude=-1.2)
    print(f"{'N':>6} {'events':>6} {'mean|a-0.8|':>12} {'best alpha':>10} {'drift':>9} {'sec':>5}")
    for N in args.N:
        t0 = time.perf_counter()
        rec = run(init_from_u0(u0, 20.0, N), 1e-3, args.t_end, 50)
        summary = summarize(analyze_run(rec, FitConfig()))
        secs = time.perf_counter() - t0
        if summary is None:
            print(f"{N:>6} no generic events")
            continue
        n, dev, best = summary
        print(f"{N:>6} {n:>6} {dev:>12.4f} {best['median_alpha']:>10.4f} "
              f"{rec.energy_drift():>9.2e} {secs:>5.0f}")
