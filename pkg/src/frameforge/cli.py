"""Command-line entry point: ``frame-forge <subcommand> ...``.

Exit status: 0 when every record passes, 1 when any record fails,
2 for configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .scenarios import ConfigError, Scenario, load_config, run_batch, run_scenario

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def _global_flags():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--truncation", type=int, help="truncation length N")
    g.add_argument("--tol", type=float, help="scenario tolerance")
    g.add_argument("--seed", type=int, help="RNG seed for randomized checks")
    g.add_argument("--out", help="report path (run: output directory)")
    g.add_argument("--format", choices=("csv", "json"), default=None)
    g.add_argument("--emit-plot-data", action="store_true", help="write two-column plot data files")
    g.add_argument("--plot", action="store_true", help="render PNG figures next to the report")
    return p


def _zeros_flags(p):
    p.add_argument("--zeros", default="", metavar="Z,Z,...",
                   help="comma-separated zeros, e.g. --zeros=0.5,-0.3j,0.2+0.2j")
    p.add_argument("--r", type=int, default=0, help="power of z")


def _orbit_flags(p):
    p.add_argument("--k", type=int, default=8, help="number of eigenvalues (exponential schedule)")
    p.add_argument("--eigenvalues", default=None, metavar="L,L,...", help="comma-separated eigenvalues")
    p.add_argument("--seed-kind", choices=("balanced", "decaying"), default="balanced")


def build_parser():
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="frame-forge", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", parents=[common], help="certify a Blaschke product as inner")
    _zeros_flags(p)
    p.add_argument("--samples", type=int, default=1024)

    p = sub.add_parser("roundtrip", parents=[common], help="Beurling extraction round trip")
    _zeros_flags(p)
    p.add_argument("--depth", type=int, default=None, help="cyclic depth (default N - degree)")

    p = sub.add_parser("orbit", parents=[common], help="build and audit an orbit frame")
    _orbit_flags(p)
    p.add_argument("--truncations", type=int, nargs="+", default=[64, 128, 256])

    p = sub.add_parser("probe", parents=[common], help="boundedness probe")
    _orbit_flags(p)
    p.add_argument("--planted", choices=("none", "line"), default="none")
    p.add_argument("--expect", default=None)

    p = sub.add_parser("riesz", parents=[common], help="exhaustive Riesz-frame check")
    p.add_argument("--vectors", required=True, help="JSON list of vectors, or @file.json")
    p.add_argument("--max-subsets", type=int, default=None)

    p = sub.add_parser("modelspace", parents=[common], help="model space dimension")
    _zeros_flags(p)

    p = sub.add_parser("run", parents=[common], help="run a JSON batch config")
    p.add_argument("config")
    p.add_argument("--jobs", type=int, default=1)
    return parser


def _split(text):
    return [t for t in text.replace(" ", "").split(",") if t]


def _inline_scenario(args):
    params = {}
    kind = {
        "certify": "blaschke-certify",
        "roundtrip": "beurling-roundtrip",
        "orbit": "orbit-frame",
        "probe": "boundedness-probe",
        "riesz": "riesz-exhaustive",
        "modelspace": "model-space",
    }[args.command]
    if hasattr(args, "zeros"):
        params.update(zeros=_split(args.zeros), r=args.r)
    if hasattr(args, "k"):
        params.update(k=args.k, seed_kind=args.seed_kind)
        if args.eigenvalues is not None:
            params["eigenvalues"] = _split(args.eigenvalues)
    if args.command == "certify":
        params["samples"] = args.samples
    if args.command == "roundtrip" and args.depth is not None:
        params["depth"] = args.depth
    if args.command == "orbit":
        params["truncations"] = args.truncations
    if args.command == "probe":
        params["planted"] = args.planted
        if args.expect:
            params["expect"] = args.expect
    if args.command == "riesz":
        text = args.vectors
        if text.startswith("@"):
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        params["vectors"] = json.loads(text)
        if args.max_subsets is not None:
            params["max_subsets"] = args.max_subsets
    if args.truncation is not None and kind not in ("orbit-frame", "riesz-exhaustive"):
        params["truncation"] = args.truncation
    if args.tol is not None:
        key = {"blaschke-certify": "tol", "beurling-roundtrip": "overlap_tol", "orbit-frame": "stability_tol",
               "riesz-exhaustive": "tol"}.get(kind)
        if key:
            params[key] = args.tol
    if args.seed is not None and kind in ("orbit-frame", "riesz-exhaustive"):
        params["seed"] = args.seed
    fmt = args.format or "csv"
    return Scenario.from_dict({"name": args.command, "kind": kind, "parameters": params,
                               "output_path": args.out or f"{args.command}.{fmt}", "format": fmt})


def _summarize(records, stream):
    failed = [r for r in records if not r.passed]
    for r in failed:
        print(f"FAIL {r.scenario}/{r.metric}: {r.value} ({r.note})", file=stream)
    print(f"{len(records) - len(failed)}/{len(records)} records passed", file=stream)
    return EXIT_FAILED if failed else EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            scenarios = load_config(args.config)
            records = run_batch(
                scenarios, out_dir=args.out, fmt=args.format, emit_plot_data=args.emit_plot_data,
                plot=args.plot, jobs=args.jobs, base_dir=os.path.dirname(os.path.abspath(args.config)),
            )
        else:
            s = _inline_scenario(args)
            records = run_scenario(s, emit_plot_data=args.emit_plot_data, plot=args.plot)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return _summarize(records, sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
