"""Batch command-line interface.

Subcommands:
  table build   precompute a stencil coefficient table and write it to disk
  qtable        q versus move size per option (CSV)
  converge      term-by-term convergence report for one option (CSV)
  pnl           per-scenario hedge residuals per strategy (CSV + summary)

Experiments read a JSON config; a handful of flags override config fields.
Exit code is 0 only if every requested row computed cleanly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import harness
from .config import load_config
from .stencil import build_lookup_table, save_table


def _apply_overrides(raw: dict, args) -> dict:
    """Fill config fields from flags; the config file wins where both set one."""
    if getattr(args, "seed", None) is not None:
        raw.setdefault("mc", {}).setdefault("seed", args.seed)
    if getattr(args, "paths", None) is not None:
        raw.setdefault("mc", {}).setdefault("paths", args.paths)
    if getattr(args, "alpha_tol", None) is not None:
        raw.setdefault("scenario", {}).setdefault("alpha_tol", args.alpha_tol)
    if getattr(args, "table_path", None) is not None:
        raw.setdefault("stencil", {}).setdefault("table_path", args.table_path)
    return raw


def _out_path(cfg, args, default_name):
    if args.out:
        return args.out
    os.makedirs(cfg.output_dir, exist_ok=True)
    return os.path.join(cfg.output_dir, default_name)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="levyhedge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_table = sub.add_parser("table", help="stencil table utilities")
    table_sub = p_table.add_subparsers(dest="table_command", required=True)
    p_build = table_sub.add_parser("build", help="build and save a coefficient table")
    p_build.add_argument("--half-width", type=int, required=True)
    p_build.add_argument("--p-max", type=int, default=None)
    p_build.add_argument("--budget", type=int, default=None)
    p_build.add_argument("--out", required=True)

    for name in ("qtable", "converge", "pnl"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--paths", type=int, default=None)
        p.add_argument("--alpha-tol", type=float, dest="alpha_tol", default=None)
        p.add_argument("--table-path", dest="table_path", default=None)

    args = parser.parse_args(argv)

    if args.command == "table":
        kwargs = {"budget": args.budget} if args.budget else {}
        table = build_lookup_table(args.half_width, args.p_max, **kwargs)
        save_table(table, args.out)
        print(f"wrote table N={table.half_width} PMAX={table.p_max} to {args.out}")
        return 0

    raw = _apply_overrides(json.loads(open(args.config).read()), args)
    cfg = load_config(raw)

    if args.command == "qtable":
        header, rows, ok = harness.run_qtable(cfg)
        path = _out_path(cfg, args, "qtable.csv")
        harness.write_csv(path, header, rows)
        print(f"wrote {len(rows)} rows to {path}")
        return 0 if ok else 1

    if args.command == "converge":
        header, rows = harness.run_converge(cfg)
        path = _out_path(cfg, args, "converge.csv")
        harness.write_csv(path, header, rows)
        print(f"wrote {len(rows)} rows to {path}")
        return 0

    header, rows, sum_header, summaries = harness.run_pnl(cfg)
    path = _out_path(cfg, args, "pnl.csv")
    harness.write_csv(path, header, rows)
    sum_path = _out_path(cfg, args, "pnl_summary.csv") if not args.out else args.out + ".summary"
    harness.write_csv(sum_path, sum_header, summaries)
    print(f"wrote {len(rows)} rows to {path}; summary in {sum_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
