"""Command-line driver.

    fracdiff run <config> [--preset NAME] [--out-dir DIR] [--threads N]
                          [--seed N] [--experimental]
    fracdiff stability [--n N] [--overlap R] [--out-dir DIR] [--seed N]
    fracdiff kernels dump [--out-dir DIR]

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import AccuracyError, ConfigError, InstabilityError
from .experiments import PRESETS, parse_config, run

__all__ = ["main"]


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--out-dir", default=None, help="output directory")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (results are identical for any value)")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracdiff",
                                     description="particle solvers for 1D fractional diffusion")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config", help="path to a key=value config file")
    p_run.add_argument("--preset", choices=sorted(PRESETS),
                       help="apply a named parameter preset")
    p_run.add_argument("--experimental", action="store_true",
                       help="allow the experimental RLPSE scheme")
    _common(p_run)

    p_st = sub.add_parser("stability", help="stability-constant table (9 rows)")
    p_st.add_argument("--n", type=int, default=2001, help="odd particle count")
    p_st.add_argument("--overlap", type=float, default=2.0)
    _common(p_st)

    p_k = sub.add_parser("kernels", help="kernel utilities")
    k_sub = p_k.add_subparsers(dest="kernels_command", required=True)
    p_kd = k_sub.add_parser("dump", help="dump kernel curves as CSV")
    _common(p_kd)
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    out = {}
    for key in ("out_dir", "threads", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    return out


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            with open(args.config) as fh:
                text = fh.read()
            overrides = _overrides(args)
            if args.preset:
                overrides = {**PRESETS[args.preset], **overrides}
            if args.experimental:
                overrides["experimental"] = True
            cfg = parse_config(text, overrides)
        elif args.command == "stability":
            cfg = parse_config("study = stability",
                               {"n": args.n, "overlap": args.overlap, **_overrides(args)})
        else:  # kernels dump
            cfg = parse_config("study = kernels", _overrides(args))
        files = run(cfg)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (AccuracyError, InstabilityError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    for f in files:
        print(f)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
