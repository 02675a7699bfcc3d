#!/usr/bin/env python3
"""Front steepening study: evolve the quadratic-flux example across an m
sweep and chart max|u_x| against time. Smaller m means stronger nonlinear
diffusion near u = 0 and a visibly steeper front."""

import argparse
import sys
from pathlib import Path

from fastshock import harness, svgplot


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", nargs="+", type=float, default=[0.05, 0.1, 0.3, 0.5])
    ap.add_argument("--t-end", type=float, default=5.0)
    ap.add_argument("--cadence", type=float, default=0.5)
    ap.add_argument("--grid", type=float, nargs=3, default=(-15.0, 40.0, 2200),
                    metavar=("X_LEFT", "X_RIGHT", "N_CELLS"))
    ap.add_argument("--out", default="runs/steepening")
    args = ap.parse_args(argv)
    out = Path(args.out)
    grid = {"x_left": args.grid[0], "x_right": args.grid[1],
            "n_cells": int(args.grid[2])}

    report = harness.run_suite([1], m_values=args.m, out_root=out,
                               t_end=args.t_end, cadence=args.cadence,
                               grid=grid, steepening_time=args.t_end)
    series = []
    for run in report.runs:
        if run.error is not None:
            print(f"{run.label}: ERROR {run.error['message']}")
            continue
        pairs = run.summary["max_slope_series"]
        series.append((run.label, [t for t, _ in pairs], [s for _, s in pairs]))
        print(f"{run.label:18s} max_slope(t_end) = {pairs[-1][1]:.4f}")

    svgplot.write_svg(out / "steepening.svg", svgplot.line_chart(
        series, title="front steepening by m", xlabel="t", ylabel="max |u_x|"))
    if report.steepening is not None:
        print(f"slope ordering at t={args.t_end:g}: {report.steepening['status']}")
    print(f"chart: {out / 'steepening.svg'}")
    return 0 if report.ok() else 1


if __name__ == "__main__":
    sys.exit(main())
