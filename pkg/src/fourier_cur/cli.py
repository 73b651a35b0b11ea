"""Command line entry point: ``fourier-cur {approx,sweep-blocks,sweep-tau,compare}``.

Exit codes: 0 success, 2 invalid configuration, 3 numeric failure,
4 capacity/budget exceeded, 5 I/O failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .errors import FourierCurError
from .experiment import (ExperimentConfig, compare, load_config, run_approx,
                         sweep_blocks, sweep_tau)

_FLAG_TYPES = {"int": int, "float": float, "str": str, "bool": str}


def _add_config_flags(p):
    p.add_argument("--config", help="flat key = value configuration file")
    for f in dataclasses.fields(ExperimentConfig):
        p.add_argument(f"--{f.name}", type=_FLAG_TYPES[f.type], default=None,
                       help=f"override '{f.name}' (default {f.default!r})")


def _parse_pairs(text):
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, _, b = chunk.partition(",")
        pairs.append((int(a), int(b or a)))
    return pairs


def _parse_taus(text):
    return [float(t) for t in text.split(",") if t.strip()]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fourier-cur",
        description="Adaptive CUR approximation of bivariate truncated Fourier series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("approx", help="single approximation run")
    _add_config_flags(p)
    p = sub.add_parser("sweep-blocks", help="sweep block sizes (b1, b2)")
    _add_config_flags(p)
    p.add_argument("--pairs", type=_parse_pairs, default=None,
                   help="semicolon separated pairs, e.g. '2,2;4,4' (default (2,2)..(20,20))")
    p = sub.add_parser("sweep-tau", help="sweep the stopping tolerance")
    _add_config_flags(p)
    p.add_argument("--taus", type=_parse_taus, default=None,
                   help="comma separated tolerances (default 1e-1..1e-10)")
    p = sub.add_parser("compare", help="methods x quadratures comparison table")
    _add_config_flags(p)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    names = [f.name for f in dataclasses.fields(ExperimentConfig)]
    overrides = {n: getattr(args, n) for n in names if getattr(args, n) is not None}
    try:
        cfg = load_config(args.config, overrides)
        if args.command == "approx":
            result = run_approx(cfg).to_json()
        elif args.command == "sweep-blocks":
            result = [s.to_json() for s in sweep_blocks(cfg, args.pairs)]
        elif args.command == "sweep-tau":
            result = [s.to_json() for s in sweep_tau(cfg, args.taus)]
        else:
            result = [s.to_json() for s in compare(cfg)]
    except FourierCurError as exc:
        print(f"fourier-cur: error: {exc}", file=sys.stderr)
        return exc.exit_code
    json.dump(result, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
