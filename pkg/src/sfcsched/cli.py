"""Command line front end: run one scenario, sweep policies, or validate a file.

Exit status is 0 on success, 2 on scenario parse/validation problems and 1 on
any other failure.  Results go to --out or stdout.
"""

import argparse
import sys

from .engine import run
from .errors import SfcSchedError
from .reporting import (SweepSpec, emit_results, parse_scenario, parse_sweep,
                        render_results, report_rows, run_sweep)
from .scenario import POLICY_NAMES, Scenario


def _add_common(parser):
    parser.add_argument("--scenario", help="scenario file (JSON); defaults apply")
    parser.add_argument("--policy", choices=POLICY_NAMES,
                        help="override the scenario policy")
    parser.add_argument("--seed", type=int, help="override the rng seed")
    parser.add_argument("--out", help="output path (stdout when omitted)")
    parser.add_argument("--format", choices=("csv", "structured"), default="csv")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sfcsched",
        description="Chain scheduling simulator: fair weighted vs greedy policies")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="simulate one scenario")
    _add_common(run_p)
    sweep_p = sub.add_parser("sweep", help="policy comparison sweep")
    _add_common(sweep_p)
    sweep_p.add_argument("--var", choices=("demand", "load"), default="demand",
                         help="sweep the demand count or the background load")
    val_p = sub.add_parser("validate", help="parse and validate a scenario file")
    val_p.add_argument("--scenario", required=True)
    return parser


def _load(args):
    scenario = parse_scenario(args.scenario) if args.scenario else Scenario()
    if args.seed is not None:
        scenario = scenario.with_overrides(rng_seed=args.seed)
    if args.policy is not None:
        scenario = scenario.with_overrides(policy=args.policy)
    return scenario.validate()


def _deliver(rows, args):
    if args.out:
        emit_results(rows, args.out, args.format)
    else:
        sys.stdout.write(render_results(rows, args.format))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            parse_scenario(args.scenario)
            parse_sweep(args.scenario)
            print(f"{args.scenario}: ok")
            return 0
        scenario = _load(args)
        if args.command == "run":
            report = run(scenario)
            rows = report_rows(report, "demand", scenario.request_count)
            _deliver(rows, args)
            return 0
        sweep = parse_sweep(args.scenario) if args.scenario else SweepSpec()
        if args.policy is not None:
            sweep.policies = (args.policy,)
        rows = run_sweep(scenario, sweep, var=args.var)
        _deliver(rows, args)
        return 0
    except SfcSchedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        from .errors import ParseError, ValidationError
        return 2 if isinstance(exc, (ParseError, ValidationError)) else 1


if __name__ == "__main__":
    sys.exit(main())
