#!/usr/bin/env python3
"""Run the builtin example sweeps end to end and summarize the verdicts.

Equivalent to `fastshock suite 1 2 3 4` with a smaller default grid so the
whole sweep finishes in a few minutes; pass --full-grid for the defaults
used by the long-run diagnostics.
"""

import argparse
import sys

from fastshock import harness


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("ids", nargs="*", type=int, default=[1, 2, 3, 4],
                    help="builtin example ids (default: all)")
    ap.add_argument("--m", nargs="+", type=float, default=None,
                    help="override the m sweep for every listed example")
    ap.add_argument("--t-end", type=float, default=2.0)
    ap.add_argument("--out", default="runs/examples")
    ap.add_argument("--full-grid", action="store_true",
                    help="use the wide default grid instead of the quick one")
    args = ap.parse_args(argv)

    grid = None if args.full_grid else \
        {"x_left": -12.0, "x_right": 25.0, "n_cells": 1100}
    report = harness.run_suite(args.ids or [1, 2, 3, 4], m_values=args.m,
                               out_root=args.out, t_end=args.t_end, grid=grid)
    for run in report.runs:
        if run.error is not None:
            print(f"{run.label:18s} ERROR {run.error['type']}: {run.error['message']}")
            continue
        verdicts = " ".join(f"{k}={v.status}" for k, v in run.verdicts.items())
        print(f"{run.label:18s} {verdicts}")
    if report.steepening is not None:
        print(f"steepening at t={report.steepening.get('time')}: "
              f"{report.steepening['status']}")
    print(f"suite: {'ok' if report.ok() else 'FAILED'} (artifacts in {args.out})")
    return 0 if report.ok() else 1


if __name__ == "__main__":
    sys.exit(main())
