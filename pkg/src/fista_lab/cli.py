"""Command line entry point ``fista-lab``.

Exit status: 0 success, 1 a check failed, 2 usage error.
"""

import argparse
import logging
import sys
from pathlib import Path

from . import momentum
from .harness import COMPARISON_TOL, DEFAULT_SCHEMES, PRESETS, InstanceSpec, parse_scheme, run_comparison
from .verify import SUITES

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _add_instance_args(p):
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--kind", choices=["sparse", "group", "saturated", "pcp"])
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--structure", type=int, help="sparsity / active blocks / saturated count / rank")
    p.add_argument("--seed", type=int)
    p.add_argument("--noise", type=float, dest="noise_level")
    p.add_argument("--lambda", type=float, dest="lam")
    p.add_argument("--lambda2", type=float, dest="lam2")
    p.add_argument("--block-size", type=int)
    p.add_argument("--sparse-fraction", type=float)
    p.add_argument("--small", action="store_true", help="scale dimensions by 1/4")


def _spec_from_args(args):
    spec_file = getattr(args, "spec", None)
    if spec_file:
        path = Path(spec_file)
        if not path.is_file():
            raise UsageError(f"instance spec {spec_file} not found")
        try:
            spec = InstanceSpec.read(path)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    elif args.preset:
        spec = PRESETS[args.preset]
    else:
        missing = [k for k in ("kind", "m", "n", "structure") if getattr(args, k) is None]
        if missing:
            raise UsageError("give --spec, --preset, or all of --kind --m --n --structure")
        spec = InstanceSpec(args.kind, args.m, args.n, args.structure)
    overrides = {
        k: getattr(args, k, None)
        for k in ("kind", "m", "n", "structure", "seed", "noise_level", "lam", "lam2", "block_size", "sparse_fraction")
    }
    spec = InstanceSpec(**{**spec.__dict__, **{k: v for k, v in overrides.items() if v is not None}})
    if args.small:
        spec = spec.scaled(4)
    return spec


def cmd_gen(args):
    spec = _spec_from_args(args)
    if args.output:
        spec.write(args.output)
    else:
        sys.stdout.write(spec.to_text())
    return EXIT_OK


def cmd_solve(args):
    spec = _spec_from_args(args)
    scheme = parse_scheme(args.scheme)
    problem = spec.build()
    res = scheme.run(problem, tol=args.tol, max_iters=args.max_iters, record_objective=args.record_objective, instance_kind=spec.kind)
    if args.output:
        with open(args.output, "w") as fh:
            res.trace.to_csv(fh)
    else:
        res.trace.to_csv(sys.stdout)
    print(f"{scheme.name}: {res.iterations} iterations, stopped on {res.reason}", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args):
    spec = _spec_from_args(args)
    report = run_comparison(
        spec,
        schemes=args.schemes,
        tol=args.tol,
        max_iters=args.max_iters,
        seeds=args.seeds,
        out_dir=args.out_dir,
        threads=args.threads,
    )
    print(report.to_text())
    return EXIT_OK


def cmd_check_schedule(args):
    if args.scheme == "bt":
        params = momentum.MomentumParams.bt()
    elif args.scheme == "cd":
        params = momentum.MomentumParams.cd(args.d)
    else:
        params = momentum.MomentumParams.mod(args.p, args.q, args.r)
    if params.outside_theory:
        print(f"note: {params.label()} lies outside the d > 2 regime", file=sys.stderr)
    t, a = momentum.sequence(params, args.kmax)
    out = sys.stdout
    out.write("k,t_k,a_k\n")
    for k in range(1, args.kmax + 1):
        out.write(f"{k},{t[k]:.17g},{a[k]:.17g}\n")
    return EXIT_OK


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        for check in SUITES[name]():
            print(check.line())
            ok &= check.passed
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser():
    parser = argparse.ArgumentParser(prog="fista-lab", description="FISTA-family solvers and benchmarks")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write an instance spec")
    _add_instance_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run one scheme on one instance, emit the trace CSV")
    p.add_argument("--spec", required=True)
    _add_instance_args(p)
    p.add_argument("--scheme", default="bt")
    p.add_argument("--tol", type=float, default=COMPARISON_TOL)
    p.add_argument("--max-iters", type=int, default=100000)
    p.add_argument("--record-objective", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="iterations-to-tolerance comparison across schemes and seeds")
    p.add_argument("--spec")
    _add_instance_args(p)
    p.add_argument("--schemes", nargs="+", default=list(DEFAULT_SCHEMES))
    p.add_argument("--seeds", nargs="+", type=int, default=[0, 1, 2, 3, 4])
    p.add_argument("--tol", type=float, default=COMPARISON_TOL)
    p.add_argument("--max-iters", type=int, default=100000)
    p.add_argument("--out-dir")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("check-schedule", help="print (k, t_k, a_k) as CSV")
    p.add_argument("--scheme", choices=["bt", "cd", "mod"], default="mod")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--r", type=float, default=4.0)
    p.add_argument("--d", type=float, default=2.0)
    p.add_argument("--kmax", type=int, default=100)
    p.set_defaults(func=cmd_check_schedule)

    p = sub.add_parser("verify", help="run inequality / limit / prox check suites")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"fista-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
