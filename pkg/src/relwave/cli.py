"""Command-line entry point: ``relwave <command> [--scenario FILE] ...``."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import ConfigError
from .runner import DISCREPANCY, FAIL, SuiteError, run
from .scenario import ALL_COMMANDS, load, parse_convention_flag, validate

DEFAULT_OUTPUT = "relwave-output"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="relwave", description="Run verification suites and simulations; write CSV/JSON artifacts.")
    ap.add_argument("command", choices=ALL_COMMANDS)
    ap.add_argument("--scenario", type=Path, help="TOML or JSON scenario file (defaults are used when omitted)")
    ap.add_argument("--output", type=Path, help="output directory (beats RELWAVE_OUTPUT and the scenario's output_dir)")
    ap.add_argument("--seed", type=int, help="seed for the perturbation ensembles")
    ap.add_argument("--convention", help="sign/unit overrides, e.g. eps=+1,s=-1")
    ap.add_argument("--discrepancies-fatal", action="store_true", help="treat measured discrepancies as failures")
    ap.add_argument("--quiet", action="store_true", help="only print the final verdict")
    return ap


def resolve_output(flag, scenario_dir) -> Path:
    if flag is not None:
        return Path(flag)
    env = os.environ.get("RELWAVE_OUTPUT")
    if env:
        return Path(env)
    return Path(scenario_dir) if scenario_dir is not None else Path(DEFAULT_OUTPUT)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = parse_convention_flag(args.convention) if args.convention else None
        if args.scenario is not None:
            scen = load(args.scenario, args.command, overrides)
        else:
            scen = validate({}, args.command, overrides)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError(f"--seed={args.seed} must be non-negative")
            scen.seed = args.seed
        if args.discrepancies_fatal:
            scen.discrepancies_fatal = True
    except ConfigError as exc:
        print("config error:", file=sys.stderr)
        for e in exc.errors:
            print(f"  {e}", file=sys.stderr)
        return 2

    out = resolve_output(args.output, scen.output_dir)
    try:
        report = run(scen, out)
    except SuiteError as exc:
        print(f"error in {exc}", file=sys.stderr)
        return 1
    if not args.quiet:
        for c in report.checks:
            tag = {FAIL: "FAIL", DISCREPANCY: "DISC"}.get(c.verdict, "ok  ")
            extra = ""
            if "value" in c.values and "tolerance" in c.values:
                extra = f"  ({c.values['value']:.3g} vs {c.values['tolerance']:.3g})"
            print(f"[{tag}] {c.name}{extra}")
    n = report.counts()
    print(
        f"{report.verdict.upper()}: {n['pass']} pass, {n['fail']} fail, {n['measured-discrepancy']} measured-discrepancy"
        f" | {len(report.artifacts)} artifacts in {out} | {report.wall_clock:.1f} s"
    )
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
