"""Characteristic solver vs Eulerian reference on smooth data.

Usage: python3 scripts/cross_validate.py [--amplitude 0.3] [--t-end 0.5]
"""

import argparse

import numpy as np

from novikov_lab.charsolver import init_from_u0, run
from novikov_lab.profiles import make_profile
from novikov_lab.refsolver import compare_solutions, ref_init, ref_run

if __name__ == "__main__":
    p = argparse.ArgumentParser(description="cross-validation of the two solvers")
    p.add_argument("--amplitude", type=float, default=0.3)
    p.add_argument("--t-end", type=float, default=0.5)
    p.add_argument("--N", type=int, nargs="+", default=[1024, 2048, 4096])
    args = p.parse_args()

    u0 = make_profile("gaussian", amplitude=args.amplitude)
    prev = None
    for N in args.N:
        rec = run(init_from_u0(u0, 20.0, N), 1e-3, args.t_end, 50)
        ref = ref_run(ref_init(u0, 20.0, N), 1e-3, args.t_end, 50, stop_at_cap=True)
        dev, _ = compare_solutions(rec, ref)
        rate = "" if prev is None else f"  observed order {np.log2(prev / dev):.2f}"
        print(f"N={N:5d}  max relative L2 deviation {dev:.3e}{rate}")
        prev = dev
