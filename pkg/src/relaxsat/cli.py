"""Command line front end: ``solve``, ``generate`` and ``bench``.

Exit codes of ``solve`` follow the SAT competition convention: 10 when a
verified model is printed, 20 only for a syntactically empty clause, 0 when
no model was found (the solver is incomplete), 1 for usage or input errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import format_summary, records_to_csv, run_trials, summarize
from .cnf import DimacsError, EmptyClauseError, format_model, read_dimacs, verify_assignment
from .generate import GenSpec, generate_forced_ksat, save_instance
from .matrix import build_matrix
from .solver import SolverConfig, derive_seed, solve_portfolio

EXIT_SAT, EXIT_UNSAT, EXIT_UNKNOWN, EXIT_ERROR = 10, 20, 0, 1

log = logging.getLogger("relaxsat")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _solver_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("solver")
    g.add_argument("--max-itr", type=int, default=500, help="Newton iterations per try")
    g.add_argument("--max-try", type=int, default=100, help="perturbation restarts")
    g.add_argument("--ell", type=float, default=1.0, help="binarity penalty weight")
    g.add_argument("--beta", type=float, default=0.5, help="perturbation mix in [0, 1]")
    g.add_argument("--grid-levels", type=int, default=200, help="threshold candidates")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--weighted", action="store_true", help="use occurrence-weighted cost")
    g.add_argument("--jobs", type=int, default=1, help="portfolio width")
    g.add_argument("--timeout", type=float, default=None, help="seconds per solve")
    g.add_argument("--stride", type=int, default=1, help="iterations between threshold checks")


def _config(args) -> SolverConfig:
    return SolverConfig(ell=args.ell, beta=args.beta, max_itr=args.max_itr, max_try=args.max_try,
                        grid_levels=args.grid_levels, seed=args.seed,
                        threshold_stride=args.stride, timeout=args.timeout)


def _v_lines(u, width: int = 78) -> list[str]:
    lines, cur = [], "v"
    for tok in format_model(u).split():
        if len(cur) + 1 + len(tok) > width:
            lines.append(cur)
            cur = "v"
        cur += " " + tok
    lines.append(cur)
    return lines


def cmd_solve(args) -> int:
    try:
        cnf = read_dimacs(args.input)
    except EmptyClauseError as exc:
        print(f"c {exc}")
        print("s UNSATISFIABLE")
        return EXIT_UNSAT
    except (DimacsError, OSError) as exc:
        print(f"c error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for w in cnf.warnings:
        print(f"c warning: {w}")

    Q = build_matrix(cnf)
    out = solve_portfolio(Q, _config(args), jobs=args.jobs, weighted=args.weighted)
    print(f"c n={Q.n} m={Q.m} tries={out.tries_used} iterations={out.iterations_total} "
          f"time={out.wall_time:.3f}s error={out.error}" + (" timeout" if out.timed_out else ""))
    if out.satisfied and verify_assignment(cnf, out.assignment)[0]:
        print("s SATISFIABLE")
        print("\n".join(_v_lines(out.assignment)))
        return EXIT_SAT
    print("s UNKNOWN")
    return EXIT_UNKNOWN


def _resolve_m(args) -> int:
    if args.m is not None:
        return args.m
    return int(round(args.ratio * args.n))


def cmd_generate(args) -> int:
    try:
        m = _resolve_m(args)
        specs = [GenSpec(args.n, m, args.k, derive_seed(args.seed, i)) for i in range(args.count)]
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for i, spec in enumerate(specs):
        path = outdir / f"{args.prefix}-n{spec.n}-m{spec.m}-k{spec.k}-{i:03d}.cnf"
        for p in save_instance(generate_forced_ksat(spec), path, args.with_solution):
            print(p)
    return 0


def _bench_instances(args):
    if args.instances:
        paths = sorted(Path(args.instances).glob("*.cnf"))
        if not paths:
            raise ValueError(f"no .cnf files in {args.instances}")
        for p in paths:
            yield p.stem, build_matrix(read_dimacs(p))
    else:
        if args.n is None:
            raise ValueError("give either an instance directory or --n")
        m = _resolve_m(args)
        for i in range(args.count):
            spec = GenSpec(args.n, m, args.k, derive_seed(args.gen_seed, i))
            yield f"gen-n{spec.n}-m{spec.m}-k{spec.k}-{i:03d}", build_matrix(generate_forced_ksat(spec).cnf)


def cmd_bench(args) -> int:
    config = _config(args)
    records = []
    try:
        for instance_id, Q in _bench_instances(args):
            rs = run_trials(instance_id, Q, config, args.trials, weighted=args.weighted, jobs=args.jobs)
            for r in rs:
                log.info("%s seed=%d %s error=%d its=%d %.3fs", r.instance_id, r.seed, r.status,
                         r.error, r.iterations_total, r.wall_time_seconds)
            records.extend(rs)
    except (ValueError, DimacsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    timing = args.timing == "wall"
    Path(args.csv).write_text(records_to_csv(records, timing=timing))
    summary = format_summary(summarize(records))
    if args.summary:
        Path(args.summary).write_text(summary)
    sys.stdout.write(summary)
    return 0


def _gen_flags(p: argparse.ArgumentParser, n_required: bool):
    p.add_argument("--n", type=int, required=n_required, help="number of variables")
    p.add_argument("--k", type=int, default=3, help="literals per clause")
    mg = p.add_mutually_exclusive_group()
    mg.add_argument("--m", type=int, default=None, help="number of clauses")
    mg.add_argument("--ratio", type=float, default=4.26, help="m = round(ratio * n)")
    p.add_argument("--count", type=int, default=1, help="number of instances")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relaxsat", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve a DIMACS CNF file")
    p.add_argument("input", help="DIMACS CNF file")
    _solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="write planted random k-SAT instances")
    _gen_flags(p, n_required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--with-solution", action="store_true", help="also write .sol sidecars")
    p.add_argument("--prefix", default="forced")
    p.add_argument("-o", "--outdir", default=".")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="timed trials over a set of instances, CSV output")
    p.add_argument("instances", nargs="?", help="directory of .cnf files (else generate with --n)")
    _gen_flags(p, n_required=False)
    p.add_argument("--gen-seed", type=int, default=0, help="seed for generated instances")
    p.add_argument("--trials", type=int, default=5, help="solves per instance")
    p.add_argument("--csv", required=True, help="output CSV path")
    p.add_argument("--summary", default=None, help="also write the summary table here")
    p.add_argument("--timing", choices=("wall", "off"), default="wall",
                   help="'off' writes 0 in the time column for reproducible files")
    _solver_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="c %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ValueError as exc:
        # invalid solver settings, e.g. beta outside [0, 1]
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
