"""
Online machine-minimization lab - command line
Main application entry point

Subcommands: gen, oracle, run, compare, certify, report.
Data (JSON, CSV, markdown) goes to stdout or --out; status lines go to stderr.
Exit codes: 0 success, 1 infeasible run / failed check, 2 usage or input error.
"""

import argparse
import glob
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

from .certify.bounds import implied_lower_bound
from .certify.critical import check_critical, check_weakly_critical, load_certificate, write_certificate
from .certify.sjf_certificate import extract_sjf_certificate
from .core.rational import format_rational, parse_rational
from .engine.simulator import RunResult, simulate
from .engine.verify import verify
from .errors import MachMinError, OracleError
from .experiments.harness import compare, oracle_m_star, write_csv
from .experiments.report import SUITES, build_report, render_report
from .gen.generator import KINDS, GenSpec, generate
from .gen.instance_io import dump_instance, load_instance
from .oracle.flow_oracle import demand_lower_bound, feasible, min_machines
from .schedulers.hybrid import PoolConstants
from .schedulers.registry import ALGORITHMS, AlgorithmConfig, build_scheduler
from .settings import get_settings

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _status(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
        _status(f"✅ wrote {out}")
    else:
        sys.stdout.write(text)


def _rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _constants(args) -> PoolConstants:
    settings = get_settings()
    return PoolConstants(
        c_edf=args.c_edf if args.c_edf is not None else settings.c_edf,
        c_sjf=args.c_sjf if args.c_sjf is not None else settings.c_sjf,
        c_cms=args.c_cms if args.c_cms is not None else settings.c_cms,
    )


# --- commands -------------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = GenSpec(
        kind=args.kind,
        n=args.n,
        horizon=args.horizon,
        max_size=args.max_size,
        seed=args.seed,
        l1=args.l1,
        l2=args.l2,
        m=args.m,
        rho0=args.rho0,
    )
    _emit(dump_instance(generate(spec)), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    if not inst.jobs:
        print("m*=0")
        return EXIT_OK
    try:
        m_star = min_machines(inst, args.speed)
    except OracleError as e:
        _status(f"❌ {e}")
        return EXIT_FAILED
    print(f"m*={m_star}")
    print(f"demand_lower_bound={demand_lower_bound(inst, args.speed)}")
    print(f"speed={format_rational(args.speed)}")
    if args.witness:
        result = feasible(inst, m_star, args.speed, want_witness=True)
        report = verify(result.witness, inst, m_star, args.speed)
        if not report.ok:
            _status(f"❌ witness rejected: {report.violation.detail}")
            return EXIT_FAILED
        pieces = [piece.model_dump(mode="json") for piece in result.witness]
        Path(args.witness).write_text(json.dumps(pieces, indent=2) + "\n")
        _status(f"✅ witness on {m_star} machines verified, wrote {args.witness}")
    return EXIT_OK


def _config(args) -> AlgorithmConfig:
    return AlgorithmConfig(
        algorithm=args.alg,
        machines=args.machines,
        m_star=args.mstar,
        constants=_constants(args),
        doubling=args.doubling,
        multiplier=args.multiplier,
        trace=args.trace,
    )


def cmd_run(args) -> int:
    inst = load_instance(args.instance)
    config = _config(args)
    m_star = None
    if config.needs_m_star:
        m_star = oracle_m_star(inst, args.speed)
        _status(f"ℹ️  m*={m_star} from the oracle")
    scheduler = build_scheduler(config, m_star=m_star)
    result = simulate(scheduler, inst, speed=args.speed, abort_on_miss=not args.no_abort)
    _emit(result.model_dump_json(indent=2) + "\n", args.out)
    if result.feasible:
        _status(f"✅ {result.algorithm}: feasible on {result.machines_used} machines")
        return EXIT_OK
    failure = result.failure
    where = f" ({failure.scheduler}: {failure.reason} at t={format_rational(failure.time)})" if failure else ""
    _status(f"❌ {result.algorithm}: infeasible{where}")
    return EXIT_FAILED


def _instance_paths(patterns: Sequence[str]) -> List[str]:
    paths: List[str] = []
    for pattern in patterns:
        matches = sorted(glob.glob(pattern))
        paths.extend(matches if matches else [pattern])
    return sorted(dict.fromkeys(paths))


def cmd_compare(args) -> int:
    instances = [(path, load_instance(path)) for path in _instance_paths(args.instances)]
    constants = _constants(args)
    configs = [
        AlgorithmConfig(algorithm=alg.strip(), constants=constants, multiplier=args.multiplier)
        for alg in args.algs.split(",")
        if alg.strip()
    ]
    if args.doubling:
        configs += [
            AlgorithmConfig(algorithm=alg, doubling=True, multiplier=args.multiplier)
            for alg in ("edf", "sjf", "cms")
            if alg in {c.algorithm for c in configs}
        ]
    rows = compare(instances, configs, speed=args.speed, threads=args.threads)
    write_csv(rows, args.csv or sys.stdout, timing=args.timing)
    if args.csv:
        _status(f"✅ {len(rows)} rows written to {args.csv}")
    return EXIT_OK


def cmd_certify(args) -> int:
    inst = load_instance(args.instance)
    if args.from_run:
        run = RunResult.model_validate_json(Path(args.from_run).read_text())
        pair = extract_sjf_certificate(run, inst)
        _status(f"ℹ️  extracted |G|={len(pair.jobs)}, |T|={format_rational(pair.measure)} from {args.from_run}")
        if args.write:
            write_certificate(pair, args.write)
            _status(f"✅ wrote {args.write}")
    elif args.certificate:
        pair = load_certificate(args.certificate)
    else:
        _status("❌ give a certificate file or --from-run")
        return EXIT_USAGE

    strong = check_critical(pair, inst)
    weak = check_weakly_critical(pair, inst)
    for label, report in (("critical", strong), ("weakly critical", weak)):
        if report.ok:
            print(f"{label}: yes")
        else:
            where = f" at t={format_rational(report.time)}" if report.time is not None else ""
            job = f" (job {report.job})" if report.job is not None else ""
            print(f"{label}: no, {report.condition}{where}{job}: {report.detail}")
    bound = implied_lower_bound(pair.mu, pair.beta, pair.alpha)
    print(f"implied lower bound: {'unbounded' if bound.is_infinite() else f'{bound:.12g}'}")
    accepted = weak.ok if (args.weak or args.from_run) else strong.ok
    return EXIT_OK if accepted else EXIT_FAILED


def cmd_report(args) -> int:
    if args.seeds < 1:
        _status("❌ --seeds must be at least 1")
        return EXIT_USAGE
    data = build_report(
        args.suite, seeds=args.seeds, seed0=args.seed0, constants=_constants(args), threads=args.threads
    )
    _emit(render_report(data), args.out)
    return EXIT_OK


# --- parser ----------------------------------------------------------------------


def _add_constants(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--c-edf", type=int, help="EDF pool multiplier (default MACHMIN_C_EDF or 16)")
    parser.add_argument("--c-sjf", type=int, help="SJF bucket multiplier (default MACHMIN_C_SJF or 8)")
    parser.add_argument("--c-cms", type=int, help="CMS pool multiplier (default MACHMIN_C_CMS or 8)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="machmin", description="Online machine minimization with deadlines")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a seeded instance")
    gen.add_argument("--kind", choices=KINDS, required=True)
    gen.add_argument("--n", type=int, default=20, help="Number of jobs")
    gen.add_argument("--horizon", type=int, default=100, help="Release horizon")
    gen.add_argument("--max-size", type=int, default=10, help="Largest job size P")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--l1", type=_rational, help="Lowest relative laxity (bucketed, burst)")
    gen.add_argument("--l2", type=_rational, help="Highest relative laxity (bucketed, burst)")
    gen.add_argument("--m", type=int, help="Machine count defining 'very tight' (rho <= 1/m)")
    gen.add_argument("--rho0", type=_rational, default="1/2", help="Smallest relative laxity (loose)")
    gen.add_argument("--out", help="Output file (default stdout)")
    gen.set_defaults(handler=cmd_gen)

    oracle = sub.add_parser("oracle", help="Compute m* exactly")
    oracle.add_argument("instance")
    oracle.add_argument("--speed", type=_rational, default="1")
    oracle.add_argument("--witness", metavar="PATH", help="Write a verified optimal schedule here")
    oracle.set_defaults(handler=cmd_oracle)

    run = sub.add_parser("run", help="Simulate one online algorithm")
    run.add_argument("instance")
    run.add_argument("--alg", choices=ALGORITHMS, required=True)
    run.add_argument("--machines", type=int, help="Machines (per size class for classed-edf); default multiplier * m*")
    run.add_argument("--mstar", type=int, help="m* given to the hybrid; default from the oracle")
    _add_constants(run)
    run.add_argument("--multiplier", type=int, default=1, help="Machines per unit of m* or of the doubling guess")
    run.add_argument("--speed", type=_rational, default="1")
    run.add_argument("--doubling", action="store_true", help="Wrap edf/sjf/cms in the doubling cascade")
    run.add_argument("--trace", action="store_true", help="Record every CMS recompute")
    run.add_argument("--no-abort", action="store_true", help="Keep running past the first deadline miss")
    run.add_argument("--out", help="Output file (default stdout)")
    run.set_defaults(handler=cmd_run)

    cmp_ = sub.add_parser("compare", help="Run a scheduler matrix over instance files")
    cmp_.add_argument("instances", nargs="+", help="Instance files or glob patterns")
    cmp_.add_argument("--algs", default="edf,sjf,cms,hybrid,hybrid-adaptive")
    _add_constants(cmp_)
    cmp_.add_argument("--multiplier", type=int, default=1, help="Sized algorithms run on multiplier * m* machines")
    cmp_.add_argument("--doubling", action="store_true", help="Also run the doubling cascade of edf/sjf/cms")
    cmp_.add_argument("--speed", type=_rational, default="1")
    cmp_.add_argument("--threads", type=int, help="Worker processes (default MACHMIN_THREADS)")
    cmp_.add_argument("--csv", help="Output CSV (default stdout)")
    cmp_.add_argument("--timing", action="store_true", help="Add a wall-time column")
    cmp_.set_defaults(handler=cmd_compare)

    cert = sub.add_parser("certify", help="Check a critical-pair certificate")
    cert.add_argument("certificate", nargs="?", help="Certificate JSON")
    cert.add_argument("--instance", required=True)
    cert.add_argument("--from-run", metavar="RUN_JSON", help="Extract the certificate from an SJF failure")
    cert.add_argument("--weak", action="store_true", help="Accept on the weakly critical check")
    cert.add_argument("--write", metavar="PATH", help="Store the extracted certificate")
    cert.set_defaults(handler=cmd_certify)

    report = sub.add_parser("report", help="Run experiment suites and render a markdown report")
    report.add_argument("--suite", choices=SUITES, default="all")
    report.add_argument("--seeds", type=int, default=20, help="Instances per suite")
    report.add_argument("--seed0", type=int, default=0)
    _add_constants(report)
    report.add_argument("--threads", type=int, help="Worker processes (default MACHMIN_THREADS)")
    report.add_argument("--out", help="Output file (default stdout)")
    report.set_defaults(handler=cmd_report)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = get_settings().log_level
    if verbosity == 1:
        level = "INFO"
    elif verbosity >= 2:
        level = "DEBUG"
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _configure_logging(args.verbose)
        return args.handler(args)
    except ValidationError as e:
        _status(f"❌ invalid arguments: {e}")
        return EXIT_USAGE
    except MachMinError as e:
        _status(f"❌ {e}")
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        _status(f"❌ {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
