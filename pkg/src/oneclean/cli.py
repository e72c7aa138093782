"""Command-line front end.

Exit codes: 0 success, 1 bad input or usage, 2 feasibility cap exceeded,
3 promise violation.  All records are single-line JSON with sorted keys,
so identical (argv, seed) invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .circuit import (BqpCircuit, CircuitError, parse_circuit, parse_instance,
                      format_instance)
from .decider import (PromiseViolationError, end_to_end_decide,
                      run_first_trials, run_second_trials)
from .density import dqc1_density
from .reduction import reduce_bqp_to_dqc1
from .selftest import run_selftest
from .simulate import CapExceededError, dqc1_exact, dqc1_sample

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAP = 2
EXIT_PROMISE = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; this tool reserves 2 for cap overruns
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _emit(record: dict) -> None:
    print(json.dumps(record, sort_keys=True))


def _cmd_simulate(args) -> int:
    instance = parse_instance(_read_input(args.infile))
    caps = {} if args.cap is None else {"cap": args.cap}
    if args.shots is not None:
        if args.backend == "density" or args.mixed_clean:
            raise CircuitError("--shots supports neither --backend density "
                               "nor --mixed-clean")
        dist = dqc1_sample(instance, args.shots, args.seed)
    elif args.backend == "density":
        dist = dqc1_density(instance, mixed_clean=args.mixed_clean, **caps)
    else:
        dist = dqc1_exact(instance, mixed_clean=args.mixed_clean, **caps)
    _emit(dist.to_json_dict())
    return EXIT_OK


def _reduce_report(art) -> dict:
    p0 = dqc1_exact(art.instance).prob(0)
    return {
        "q": art.accept_prob,
        "predictedP0": art.predicted_p0,
        "p0": p0,
        "residual": abs(p0 - art.predicted_p0),
    }


def _cmd_reduce(args) -> int:
    bqp = BqpCircuit(parse_circuit(_read_input(args.infile)), args.delta,
                     args.output_wire)
    art = reduce_bqp_to_dqc1(bqp)
    text = format_instance(art.instance)
    if args.out is not None:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    _emit(_reduce_report(art))
    return EXIT_OK


def _cmd_verify_identity(args) -> int:
    bqp = BqpCircuit(parse_circuit(_read_input(args.infile)), args.delta,
                     args.output_wire)
    _emit(_reduce_report(reduce_bqp_to_dqc1(bqp)))
    return EXIT_OK


def _cmd_decide(args) -> int:
    bqp = BqpCircuit(parse_circuit(_read_input(args.infile)), args.delta,
                     args.output_wire)
    if args.trials > 0:
        art = reduce_bqp_to_dqc1(bqp)
        if args.proof == "first":
            report = run_first_trials(art, trials=args.trials, seed=args.seed,
                                      delta=args.delta, r=args.r)
            _emit(report.to_json_dict())
        else:
            result = run_second_trials(art, trials=args.trials, seed=args.seed,
                                       delta=args.delta, epsilon=args.epsilon,
                                       eta=args.eta,
                                       median_reps=args.median_reps)
            _emit(result.to_json_dict())
        return EXIT_OK
    estimator = args.estimator or ("exact-rounded" if args.proof == "first"
                                   else "mock-fpras")
    result = end_to_end_decide(bqp, estimator=estimator, r=args.r,
                               epsilon=args.epsilon, eta=args.eta,
                               shots=args.shots, majority_k=args.majority_k,
                               median_reps=args.median_reps, seed=args.seed)
    _emit({"decision": result.decision, "report": result.report.to_json_dict()})
    return EXIT_OK


def _cmd_selftest(args) -> int:
    results = run_selftest(quick=args.quick, seed=args.seed)
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}")
    failed = [r.name for r in results if not r.ok]
    if failed:
        print(f"{len(failed)} of {len(results)} checks failed: "
              f"{', '.join(failed)}", file=sys.stderr)
        return EXIT_USAGE
    print(f"all {len(results)} checks passed "
          f"({sum(r.seconds for r in results):.1f}s)", file=sys.stderr)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oneclean",
                     description="One-clean-qubit simulation, reduction, "
                                 "and classical deciders.")
    sub = parser.add_subparsers(dest="command", required=True,
                               parser_class=_Parser)

    p = sub.add_parser("simulate",
                       help="output distribution of an instance file")
    p.add_argument("--in", dest="infile", required=True,
                   help="instance file, or - for stdin")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true",
                      help="exact distribution by enumeration")
    mode.add_argument("--shots", type=int, help="sample this many shots")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=("enumeration", "density"),
                   default="enumeration")
    p.add_argument("--mixed-clean", action="store_true",
                   help="replace the clean qubit's input with I/2")
    p.add_argument("--cap", type=int, help="override the feasibility cap")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("reduce",
                       help="compile a promise circuit into an instance file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", help="instance file destination (default stdout)")
    p.add_argument("--delta", type=float, default=0.125)
    p.add_argument("--output-wire", type=int, default=0)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("verify-identity",
                       help="check the compiled instance against the "
                            "closed-form P(a=0)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--delta", type=float, default=0.125)
    p.add_argument("--output-wire", type=int, default=0)
    p.set_defaults(func=_cmd_verify_identity)

    p = sub.add_parser("decide",
                       help="run a decider on a promise circuit")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--proof", choices=("first", "second"), default="first")
    p.add_argument("--estimator",
                   choices=("exact-rounded", "mock-fpras", "mc"),
                   help="estimate source for a single decision "
                        "(default per --proof)")
    p.add_argument("--delta", type=float, default=0.125)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--eta", type=float, default=0.25)
    p.add_argument("--r", type=int, help="truncation bits (default n+8)")
    p.add_argument("--shots", type=int, default=10_000,
                   help="shots for the mc estimator")
    p.add_argument("--trials", type=int, default=0,
                   help="if > 0, report single-shot accept rates over this "
                        "many trials instead of deciding")
    p.add_argument("--majority-k", type=int, default=101)
    p.add_argument("--median-reps", type=int, default=55)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-wire", type=int, default=0)
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("selftest",
                       help="run the acceptance checklist at reduced scale")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or usage error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except PromiseViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROMISE
    except (CircuitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
