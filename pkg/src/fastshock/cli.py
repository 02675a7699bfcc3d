"""Command line entry points.

    fastshock classify <config.json>
    fastshock profile  <config.json> [--out DIR]
    fastshock simulate <config.json> [--out DIR]
    fastshock suite    <id> [<id> ...] [--m M [M ...]] [--out DIR] [--t-end T]

Exit status is 0 iff every verdict in the produced reports is pass or
skipped. --seedless is accepted everywhere for symmetry with stochastic
harnesses; every code path here is already deterministic, so it is a no-op.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import analysis, flux, harness, profile as profile_mod


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output directory root")
    p.add_argument("--seedless", action="store_true",
                   help="reserved; all runs are deterministic already")


def _print_verdicts(verdicts: dict) -> None:
    for name, v in verdicts.items():
        line = f"  {name}: {v.status}"
        if v.value is not None and v.threshold is not None:
            line += f" (value {v.value:.6g}, threshold {v.threshold:.6g})"
        if v.reason:
            line += f" [{v.reason}]"
        print(line)


def cmd_classify(args) -> int:
    cfg = harness.load_config(args.config)
    model = cfg.build_model()
    cls = flux.classify(model)
    ent = flux.check_entropy(model, cls.speed)
    conv = flux.check_K_convexity(model, cls.speed)
    out = {
        "label": cfg.label,
        "classification": harness._classification_dict(cls),
        "entropy": {"holds": ent.holds, "worst_u": ent.worst_u, "worst_g": ent.worst_g},
        "convexity": {"holds": conv.holds, "min_value": conv.min_value,
                      "argmin": conv.argmin},
        "weight_exponents": analysis.weight_exponents(cls, model.m),
    }
    json.dump(out, sys.stdout, indent=2, sort_keys=True)
    print()
    return 0


def cmd_profile(args) -> int:
    cfg = harness.load_config(args.config)
    model = cfg.build_model()
    cls = flux.classify(model)
    prof = profile_mod.build_profile(model, cls)
    fit = profile_mod.verify_decay(prof)
    ok = max(fit.rel_err_q, fit.rel_err_lambda) <= harness.THRESHOLDS["decay_fit_rel_err"]
    out = {"label": cfg.label,
           "decay": {"q_fit": fit.q_fit, "q_theory": fit.q_theory,
                     "rel_err_q": fit.rel_err_q,
                     "lambda_fit": fit.lambda_fit, "lambda_theory": fit.lambda_theory,
                     "rel_err_lambda": fit.rel_err_lambda},
           "table": {"nodes": int(prof.xi.size), "xi_left": prof.xi_left,
                     "xi_right": prof.xi_right},
           "verdict": "pass" if ok else "fail"}
    if args.out:
        from pathlib import Path
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        harness._write_profile_csv(d / f"{cfg.label}_profile.csv", prof)
        out["files"] = {"profile": str(d / f"{cfg.label}_profile.csv")}
    json.dump(out, sys.stdout, indent=2, sort_keys=True)
    print()
    return 0 if ok else 1


def cmd_simulate(args) -> int:
    cfg = harness.load_config(args.config)
    report = harness.run_experiment(cfg, out_dir=args.out)
    print(f"run {report.label}: {'ok' if report.ok() else 'FAILED'}")
    if report.error:
        print(f"  error: {report.error['type']}: {report.error['message']}")
    _print_verdicts(report.verdicts)
    print(f"  report: {report.files.get('report', '-')}")
    return 0 if report.ok() else 1


def cmd_suite(args) -> int:
    report = harness.run_suite(args.ids, m_values=args.m,
                               out_root=args.out or "runs", t_end=args.t_end)
    for run in report.runs:
        status = "ok" if run.ok() else "FAILED"
        print(f"run {run.label}: {status}")
        if run.error:
            print(f"  error: {run.error['type']}: {run.error['message']}")
        _print_verdicts(run.verdicts)
    if report.steepening is not None:
        print(f"steepening: {report.steepening['status']} "
              f"{report.steepening.get('slopes', '')}")
    print(f"suite: {'ok' if report.ok() else 'FAILED'}")
    return 0 if report.ok() else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fastshock",
        description="Front construction, classification and Cauchy simulation "
                    "for conservation laws with singular fast diffusion")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify the configured flux")
    p.add_argument("config")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("profile", help="build the front and fit its tails")
    p.add_argument("config")
    _add_common(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("simulate", help="run one configured simulation")
    p.add_argument("config")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("suite", help="run builtin example sweeps")
    p.add_argument("ids", nargs="+", type=int, help="builtin example ids (1-4)")
    p.add_argument("--m", nargs="+", type=float, default=None,
                   help="override the m sweep for every listed example")
    p.add_argument("--t-end", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_suite)

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except harness.ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (flux.InvalidShockError, profile_mod.QuadratureFailureError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
