"""Regenerate every figure panel (CSV, sidecars and SVG) into one directory.

    python scripts/reproduce_all.py [--out DIR] [--no-svg]
"""

from __future__ import annotations

import argparse
import time

from baesim.figures import FIGURES, reproduce
from baesim.outputs import resolve_output_dir


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures_out")
    ap.add_argument("--no-svg", action="store_true")
    args = ap.parse_args(argv)
    out = resolve_output_dir(args.out)
    total = time.perf_counter()
    for fig in FIGURES:
        t0 = time.perf_counter()
        paths = reproduce(fig, out, svg=not args.no_svg)
        print(f"{fig}: {len(paths)} files in {time.perf_counter() - t0:.2f} s")
    print(f"all figures in {time.perf_counter() - total:.2f} s -> {out}")


if __name__ == "__main__":
    main()
