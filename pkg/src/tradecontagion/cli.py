"""Command-line interface.

Subcommands: validate, solve, equilibrium, simulate, sweep, calibrate,
reproduce, builtin. Exit codes: 0 success, 1 domain error (including
non-convergence under --strict), 2 configuration or usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from .exceptions import ConfigInvalidError, TradeContagionError
from .network import BUILTIN_NAMES
from .reference import TABLE_NAMES
from .scenarios import (
    EXPERIMENT_KINDS,
    ExperimentSpec,
    build_network,
    emit_builtin_config,
    load_scenario,
    reproduce_tables,
    run_scenario,
    write_json_atomic,
)

_RUN_KINDS = {"solve": "solve", "equilibrium": "equilibrium",
              "simulate": "simulate", "sweep": "sweep", "calibrate": "calibrate"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tradecontagion",
        description="Contagion games on acyclic trade networks.",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario seed")
    parser.add_argument("--output", type=Path, default=None,
                        help="directory for CSV/JSON reports")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="stdout format for the main result")
    parser.add_argument("--strict", action="store_true",
                        help="exit nonzero when a solve does not converge")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", help="validate a scenario file") \
        .add_argument("scenario", type=Path)
    for name in ("solve", "equilibrium", "simulate", "sweep", "calibrate"):
        sub.add_parser(name, help=f"run the {name} experiment") \
            .add_argument("scenario", type=Path)
    rep = sub.add_parser("reproduce", help="calibrate and rebuild the benchmark tables")
    rep.add_argument("--epsilon-grid", type=float, nargs="+", default=None)
    bi = sub.add_parser("builtin", help="emit a builtin network as a scenario")
    bi.add_argument("name", choices=BUILTIN_NAMES)
    bi.add_argument("--epsilon", type=float, default=0.1)
    return parser


def _emit(args, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        yaml.safe_dump(payload, sys.stdout, sort_keys=True)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigInvalidError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except TradeContagionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.command == "builtin":
        doc = emit_builtin_config(args.name, epsilon=args.epsilon)
        if args.output is not None:
            write_json_atomic(Path(args.output) / f"{args.name}.json", doc)
        _emit(args, doc)
        return 0

    if args.command == "reproduce":
        out = args.output or Path("reproduction")
        summary = reproduce_tables(out, eps_grid=args.epsilon_grid)
        _emit(args, summary)
        failed = [c["check"] for c in summary["checks"] if not c["passed"]]
        if args.strict and failed:
            print(f"failed checks: {failed}", file=sys.stderr)
            return 1
        return 0

    config = load_scenario(args.scenario)
    if args.seed is not None:
        config = replace(config, seed=args.seed)

    if args.command == "validate":
        network = build_network(config)
        _emit(args, {
            "valid": True,
            "num_env": network.num_env,
            "num_players": network.num_players,
            "labels": list(network.labels),
            "roles": [r.value for r in network.roles()],
            "experiment": config.experiment.kind,
        })
        return 0

    kind = _RUN_KINDS[args.command]
    if config.experiment.kind != kind:
        if config.experiment.kind == "equilibrium" and kind in ("solve", "simulate"):
            config = replace(config, experiment=ExperimentSpec(kind=kind, options={}))
        else:
            raise ConfigInvalidError(
                f"scenario declares a {config.experiment.kind!r} experiment; "
                f"run it with that subcommand or one of {EXPERIMENT_KINDS}")
    result = run_scenario(config, output_dir=args.output, strict=args.strict)
    _emit(args, result.report)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
