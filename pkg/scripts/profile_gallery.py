#!/usr/bin/env python3
"""Build every builtin front, print its classification and tail fits, and
write one overlay SVG per example. Fast: no time stepping involved."""

import argparse
import sys
from pathlib import Path

import numpy as np

from fastshock import analysis, flux, harness, profile, svgplot


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/profiles", help="output directory")
    ap.add_argument("--window", type=float, nargs=2, default=(-8.0, 30.0),
                    metavar=("XI_LO", "XI_HI"), help="plot window in xi")
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    xi = np.linspace(args.window[0], args.window[1], 900)
    header = f"{'label':16s} {'kind':16s} {'s':>6s} {'lambda':>8s} {'q':>8s} " \
             f"{'q fit err':>10s} {'lam fit err':>12s}"
    print(header)
    print("-" * len(header))
    for ex, m_values in harness.EXAMPLE_DEFAULT_M.items():
        series = []
        for m in m_values:
            model = harness.example_flux(ex, m)
            cls = flux.classify(model)
            prof = profile.build_profile(model, cls)
            fit = profile.verify_decay(prof)
            label = f"example{ex}_m{m:g}"
            print(f"{label:16s} {cls.kind.value:16s} {cls.speed + 0.0:6.3f} "
                  f"{cls.lambda_minus:8.4f} {cls.right_tail_exponent:8.4f} "
                  f"{fit.rel_err_q:10.4f} {fit.rel_err_lambda:12.4f}")
            series.append((f"m={m:g}", xi, prof.eval(xi)))
        svg = svgplot.line_chart(series, title=f"example {ex}: shock profiles",
                                 xlabel="xi", ylabel="U")
        svgplot.write_svg(out / f"example{ex}_profiles.svg", svg)
    print(f"\nwrote SVGs to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
