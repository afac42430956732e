"""Command-line entry point: experiment presets and single-configuration runs."""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

from .config import ConfigError, ScenarioParams, desk_params, params_from_file, parse_schemes
from .harness import (
    EXP1_HEADER,
    EXP2_HEADER,
    exp1_points,
    exp2_points,
    exp3_points,
    run_grid,
    run_trials,
    write_exp3_csv,
    write_per_trial_csv,
    write_run_csv,
    write_sweep_csv,
)

_USAGE_EXIT = 2
_RUNTIME_EXIT = 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key=value scenario file")
    common.add_argument("--seed", type=int, help="override the master seed")
    common.add_argument("--trials", type=int, help="override the trial count")
    common.add_argument("--out", metavar="PATH", help="output CSV path (default <command>.csv)")
    common.add_argument("--schemes", metavar="LIST", help="comma-separated scheme subset")
    common.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    common.add_argument(
        "--dump-grouping", action="store_true", help="print per-trial grouping reports"
    )
    common.add_argument(
        "--desk", action="store_true",
        help="desk-scale preset (m_h=16, m_v=12, u=6, trials=200)",
    )
    parser = argparse.ArgumentParser(
        prog="xlzf",
        description="Monte Carlo downlink precoding experiments over spherical-wave LOS channels",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("exp1", "median SINR vs. user distance (log-spaced d grid)"),
        ("exp2", "median SINR vs. intra-cluster elevation spread at 750 m"),
        ("exp3", "per-trial normalized sum rate vs. cluster count at 750 m"),
        ("run", "single configuration, per-trial metric dump"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        if name in ("exp1", "exp2"):
            p.add_argument(
                "--per-trial", metavar="PATH",
                help="also dump pooled per-user SINRs behind the aggregates",
            )
    return parser


def _load_params(args: argparse.Namespace) -> ScenarioParams:
    params = ScenarioParams()
    if args.config:
        params = params_from_file(args.config, params)
    if args.desk:
        params = desk_params(params)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.schemes is not None:
        overrides["schemes"] = parse_schemes(args.schemes)
    if overrides:
        params = replace(params, **overrides)
    params.validate()
    return params


def _echo_metadata(command: str, params: ScenarioParams) -> None:
    print(f"# command: {command}")
    print(
        "# config: "
        + " ".join(
            f"{k}={v}"
            for k, v in (
                ("m_h", params.m_h), ("m_v", params.m_v), ("u", params.u),
                ("carrier_hz", params.carrier_hz), ("noise_var", params.noise_var),
                ("d", params.d), ("s_az_deg", round(math.degrees(params.s_az), 9)),
                ("s_el_deg", round(math.degrees(params.s_el), 9)),
                ("n_c", params.n_c), ("sigma_g_deg", round(math.degrees(params.sigma_g), 9)),
                ("theta_t0_deg", round(math.degrees(params.theta_t0), 9)),
                ("trials", params.trials), ("master_seed", params.master_seed),
                ("schemes", ",".join(params.schemes)),
            )
        )
    )
    if command == "exp1":
        print("# d grid: log-spaced, 8 points over 1e1..1e4 half-wavelengths")
    if command in ("exp1", "exp2"):
        print("# median convention: per-user SINRs pooled across trials, median in dB")


def _dump_grouping(records) -> None:
    for record in records:
        if record.grouping_dump:
            print(f"trial {record.index}: {record.grouping_dump}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        params = _load_params(args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    out = args.out or f"{args.command}.csv"
    try:
        _echo_metadata(args.command, params)
        if args.command == "exp1" or args.command == "exp2":
            points = exp1_points(params) if args.command == "exp1" else exp2_points(params)
            header = EXP1_HEADER if args.command == "exp1" else EXP2_HEADER
            results = run_grid(points, workers=args.workers, dump_grouping=args.dump_grouping)
            write_sweep_csv(out, header, points, results)
            if args.per_trial:
                label = header.split(",", 1)[0]
                write_per_trial_csv(args.per_trial, label, points, results)
            for records in results:
                _dump_grouping(records)
        elif args.command == "exp3":
            points = exp3_points(params)
            results = run_grid(points, workers=args.workers, dump_grouping=args.dump_grouping)
            write_exp3_csv(out, points, results)
            for records in results:
                _dump_grouping(records)
        else:
            records = run_trials(
                params, workers=args.workers, dump_grouping=args.dump_grouping
            )
            write_run_csv(out, params, records)
            _dump_grouping(records)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return _RUNTIME_EXIT
    except Exception as exc:  # surface, never traceback, for scripted use
        print(f"error: {exc}", file=sys.stderr)
        return _RUNTIME_EXIT
    print(f"# wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
