"""Deviation of the full two-tone model from the RWA as the mode frequencies grow.

For each ratio omega_A / g the full equations (all counter-rotating terms)
and the effective RWA equations are integrated from the same state over
t <= 5/g; the maximum relative envelope deviation should fall as g / omega_A.

    python scripts/rwa_scaling_study.py [--case optimal|zero|s0] [--out DIR]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from baesim import presets
from baesim.outputs import write_table
from baesim.timedomain import rwa_scaling_check


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--case", choices=("optimal", "zero", "s0"), default="optimal")
    ap.add_argument("--separations", type=float, nargs="+", default=[125, 250, 500, 1000])
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    p = presets.fig2(args.case)
    seps, devs = [], []
    print("omega_A/g   deviation    ratio to next")
    for sep in args.separations:
        t0 = time.perf_counter()
        check = rwa_scaling_check(p, separation=sep)
        print(f"{sep:9.0f}   {check.deviations[0]:.4e}   {check.halving_ratio:.4f}   "
              f"({time.perf_counter() - t0:.1f} s)")
        seps += [sep, 2 * sep]
        devs += list(check.deviations)
    seps, devs = np.array(seps), np.array(devs)
    order = np.argsort(seps)
    seps, devs = seps[order], devs[order]
    slope = np.polyfit(np.log(seps), np.log(devs), 1)[0]
    print(f"log-log slope of deviation vs omega_A/g: {slope:.3f} (expect -1)")
    if args.out:
        for path in write_table(f"{args.out}/rwa_scaling_{args.case}.csv", {"separation": seps, "deviation": devs},
                                p, slope=slope):
            print(path)


if __name__ == "__main__":
    main()
