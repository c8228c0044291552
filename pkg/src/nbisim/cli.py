"""Command-line front end.

Exit codes: 0 on success, 2 for configuration errors (unknown scenario,
bad grid or file), 3 for runtime failures during simulation or output.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import scenarios
from .harness import (
    ScenarioConfig,
    ScenarioError,
    emit_csv,
    emit_gini_csv,
    emit_summary,
    load_config_file,
    parse_ebn0_grid,
    run_gini,
    run_scenario,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nbi-sim",
        description="Interference-cancellation BER experiments for an "
        "interleaved SC-FDMA uplink.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a preset or a scenario file")
    run.add_argument(
        "--scenario",
        required=True,
        help="preset name (see list-scenarios) or path to a scenario file",
    )
    run.add_argument("--ebn0", help="grid as start:stop:step or a single value")
    run.add_argument("--trials", type=int, help="Monte-Carlo trials per grid point")
    run.add_argument("--seed", type=int, help="base seed for the trial counter")
    run.add_argument("--n", type=int, help="subcarrier count override")
    run.add_argument("--out", default="results.csv", help="output CSV path")
    run.add_argument(
        "--full-scale",
        action="store_true",
        help=f"use the full {scenarios.FULL_SCALE_N}-subcarrier configuration",
    )

    sub.add_parser("list-scenarios", help="print the preset names")

    gini = sub.add_parser(
        "gini", help="compare interference sparsity across representations"
    )
    gini.add_argument(
        "--sources", default="1..8", help="source counts: 'a..b' or comma list"
    )
    gini.add_argument("--runs", type=int, default=1000, help="draws per count")
    gini.add_argument("--n", type=int, help="subcarrier count override")
    gini.add_argument("--seed", type=int, default=scenarios.DEFAULT_SEED)
    gini.add_argument("--out", default="gini.csv", help="output CSV path")
    gini.add_argument("--full-scale", action="store_true")
    return parser


def _parse_sources(text: str) -> list[int]:
    text = str(text).strip()
    try:
        if ".." in text:
            lo_text, hi_text = text.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise ScenarioError(f"empty source range {text!r}")
            return list(range(lo, hi + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ScenarioError(f"bad source counts {text!r}") from None


def _pick_n(args) -> int | None:
    if args.n is not None:
        return args.n
    if getattr(args, "full_scale", False):
        return scenarios.FULL_SCALE_N
    return None


def _resolve_scenario(args) -> ScenarioConfig:
    name = args.scenario
    n = _pick_n(args)
    grid = parse_ebn0_grid(args.ebn0) if args.ebn0 else None
    if name in scenarios.preset_names():
        return scenarios.build_preset(
            name,
            n=n if n is not None else scenarios.DEFAULT_N,
            trials=args.trials if args.trials is not None else scenarios.DEFAULT_TRIALS,
            seed=args.seed if args.seed is not None else scenarios.DEFAULT_SEED,
            ebn0_grid=grid,
        )
    if Path(name).is_file():
        config = load_config_file(name)
        if grid is not None:
            config = replace(config, ebn0_grid=grid)
        if args.trials is not None:
            config = replace(config, trials=args.trials)
        if args.seed is not None:
            config = replace(config, base_seed=args.seed)
        if n is not None:
            config = replace(config, system=replace(config.system, n_subcarriers=n))
        return config
    raise ScenarioError(
        f"unknown scenario {name!r}: not a preset and not a readable file"
    )


def _gini_flow(counts: list[int], runs: int, n: int, seed: int, out: str) -> int:
    try:
        records = run_gini(counts, runs, n, seed)
        emit_gini_csv(records, out)
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    for r in records:
        print(
            f"sources={r.sources}  spread={r.gi_spread:.4f}  "
            f"window={r.gi_window:.4f}  haar={r.gi_haar:.4f}"
        )
    print(f"wrote {out}")
    return 0


def _cmd_run(args) -> int:
    if args.scenario == scenarios.GINI_PRESET:
        try:
            n = _pick_n(args) or scenarios.DEFAULT_N
            runs = args.trials if args.trials is not None else 1000
            seed = args.seed if args.seed is not None else scenarios.DEFAULT_SEED
            if runs < 2:
                raise ScenarioError("gini needs at least 2 runs")
        except ScenarioError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        return _gini_flow([1, 2, 3, 4], runs, n, seed, args.out)
    try:
        config = _resolve_scenario(args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        records = run_scenario(config)
        emit_csv(records, args.out)
        emit_summary(records)
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {args.out}")
    return 0


def _cmd_list() -> int:
    for name in scenarios.preset_names():
        print(f"{name:<8} {scenarios.preset_description(name)}")
    return 0


def _cmd_gini(args) -> int:
    try:
        counts = _parse_sources(args.sources)
        if not counts:
            raise ScenarioError("no source counts given")
        n = _pick_n(args) or scenarios.DEFAULT_N
        if args.runs < 2:
            raise ScenarioError("gini needs at least 2 runs")
    except ScenarioError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return _gini_flow(counts, args.runs, n, args.seed, args.out)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "list-scenarios":
        return _cmd_list()
    return _cmd_gini(args)


if __name__ == "__main__":
    sys.exit(main())
