"""Command-line interface: run-experiment, verify, report."""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .builders import Variant
from .errors import (CapabilityError, CircuitError, ConfigurationError,
                     LoweringError)
from .harness import (VERIFY_SUITES, load_config, rows_to_csv, rows_to_json,
                      run_sweep, verify_suite)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", required=True, help="JSON sweep config path")
    p.add_argument("--shots", type=int, default=None,
                   help="override the config's shot count")
    p.add_argument("--seed", type=int, default=None,
                   help="override the config's master seed")
    p.add_argument("--variant", default=None,
                   choices=[v.value for v in Variant],
                   help="restrict the sweep to one variant")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads for trajectory sampling")


def _resolve(args):
    cfg = load_config(args.config)
    updates = {}
    if args.shots is not None:
        updates["shots"] = args.shots
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.variant is not None:
        updates["variants"] = (Variant(args.variant),)
    if args.threads is not None:
        updates["threads"] = args.threads
    if getattr(args, "output", None) is not None:
        updates["output"] = args.output
    if getattr(args, "format", None) is not None:
        updates["fmt"] = args.format
    return dataclasses.replace(cfg, **updates) if updates else cfg


def _progress(i: int, total: int, row):
    print(f"[{i}/{total}] {row.variant} R={row.r} p_succ={row.p_succ:.4f} "
          f"calls={row.expected_ub:.3f}", file=sys.stderr, flush=True)


def _cmd_run(args) -> int:
    cfg = _resolve(args)
    rows = run_sweep(cfg, progress=_progress if not args.quiet else None)
    text = rows_to_json(cfg, rows) if cfg.fmt == "json" else rows_to_csv(rows)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {cfg.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    names = args.suites or list(VERIFY_SUITES)
    failed = []
    for name in names:
        ok, lines = verify_suite(name)
        for line in lines:
            print(line)
        print(f"suite {name}: {'pass' if ok else 'FAIL'}")
        if not ok:
            failed.append(name)
    if failed:
        print(f"failing suites: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def _cmd_report(args) -> int:
    from .plotting import render_report

    cfg = _resolve(args)
    rows = run_sweep(cfg, progress=_progress if not args.quiet else None)
    os.makedirs(args.outdir, exist_ok=True)
    csv_path = os.path.join(args.outdir, "sweep.csv")
    json_path = os.path.join(args.outdir, "sweep.json")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
    with open(json_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_json(cfg, rows))
    paths = [csv_path, json_path] + render_report(rows, args.outdir)
    for path in paths:
        print(path)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qskip",
        description="Benchmark a coherent skip construction against its "
                    "rigid baseline under configurable Pauli noise.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run-experiment", aliases=["run"],
                           help="run a sweep and emit CSV or JSON rows")
    _add_common(p_run)
    p_run.add_argument("--output", default=None,
                       help="output file (default: config's, else stdout)")
    p_run.add_argument("--format", default=None, choices=("csv", "json"))
    p_run.add_argument("--quiet", action="store_true",
                       help="suppress per-row progress on stderr")
    p_run.set_defaults(fn=_cmd_run)

    p_ver = sub.add_parser("verify", help="run self-check suites")
    p_ver.add_argument("suites", nargs="*",
                       help=f"suites to run (default: all of "
                            f"{', '.join(VERIFY_SUITES)})")
    p_ver.set_defaults(fn=_cmd_verify)

    p_rep = sub.add_parser("report",
                           help="run a sweep, write tables and PNG figures")
    _add_common(p_rep)
    p_rep.add_argument("--outdir", required=True,
                       help="directory for sweep.csv, sweep.json and figures")
    p_rep.add_argument("--quiet", action="store_true")
    p_rep.set_defaults(fn=_cmd_report)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigurationError, CircuitError, LoweringError,
            CapabilityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
