"""Command-line entry point for the experiment harness.

Exit codes: 0 on success, 2 for configuration errors, 3 when a run is
infeasible under its shot budget, 4 when a --check assertion fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .harness import CheckFailure, ConfigError
from .optimizer import BudgetError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_CHECK = 4


def _parse_seeds(text: str) -> list[int]:
    try:
        seeds = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --seeds value {text!r}") from exc
    if not seeds:
        raise ConfigError("--seeds must list at least one integer")
    return seeds


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        payload = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError("config root must be a JSON object")
    return payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparta",
        description="Regime-switching shot-frugal optimization experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, analyze: bool = False):
        p = sub.add_parser(name, help=help_text)
        if analyze:
            p.add_argument("--out", required=True,
                           help="directory holding paired trial CSVs")
        else:
            p.add_argument("--config", default=None, help="JSON config file")
            p.add_argument("--out", required=True, help="output directory")
            p.add_argument("--seeds", default=None,
                           help="comma-separated seed list overriding the config")
            p.add_argument("--budget", type=int, default=None,
                           help="total shot budget overriding the config")
        p.add_argument("--check", action="store_true",
                       help="verify headline claims and exit 4 on failure")
        return p

    add("validate-chisq", "validate the whitened-statistic distributions")
    add("run-tfim", "compare the scheduler with the baseline on the TFIM ansatz")
    add("run-lie", "run the synthetic barren-plateau escape experiment")
    add("run-scaling", "sweep qubit counts on the TFIM comparison")
    add("analyze", "summarize existing paired trial CSVs", analyze=True)
    return parser


_COMMANDS = {
    "validate-chisq": (harness.cmd_validate_chisq, harness.check_validate_chisq),
    "run-tfim": (harness.cmd_run_tfim, harness.check_run_tfim),
    "run-lie": (harness.cmd_run_lie, harness.check_run_lie),
    "run-scaling": (harness.cmd_run_scaling, harness.check_run_scaling),
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            summary = harness.cmd_analyze(Path(args.out))
            if args.check:
                harness.check_run_tfim(summary)
            print(json.dumps(summary, indent=2, sort_keys=True))
            return EXIT_OK
        config = _load_config(args.config)
        if args.seeds is not None:
            config["seeds"] = _parse_seeds(args.seeds)
        if args.budget is not None:
            if args.budget <= 0:
                raise ConfigError("--budget must be positive")
            config["budget"] = args.budget
        run, check = _COMMANDS[args.command]
        report = run(config, Path(args.out))
        if args.check:
            check(report)
        print(f"{args.command}: wrote results to {args.out}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
