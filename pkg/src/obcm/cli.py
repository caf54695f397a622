"""Command line interface: ``obcm gen | solve | bench | stats``.

Exit codes: 0 success, 2 parameter error, 3 I/O or parse error.
"""

import argparse
import sys
from pathlib import Path

from .bench import ALGORITHMS, load_config, read_column, run_suite, solve
from .crossings import build_cross_table
from .errors import FormatError, ParameterError
from .evolutionary import StopRule
from .instance import (
    format_ordering,
    generate_random,
    read_instance,
    read_ordering,
    write_instance,
    write_ordering,
)
from .rng import derive_seed
from .stats import ALPHA, wilcoxon_rank_sum

EXIT_PARAM = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def cmd_gen(args):
    if args.count == 1 and args.out.suffix:
        write_instance(generate_random(args.n1, args.n2, args.p, args.seed), args.out)
        print(args.out)
        return
    args.out.mkdir(parents=True, exist_ok=True)
    for index in range(args.count):
        seed = derive_seed(args.seed, index, "instance")
        path = args.out / f"rnd{index:04d}.obcm"
        write_instance(generate_random(args.n1, args.n2, args.p, seed), path)
        print(path)


def cmd_solve(args):
    inst = read_instance(args.instance)
    table = build_cross_table(inst)
    stop = None
    if args.stagnation_exponent is not None or args.max_generations is not None:
        stop = StopRule.stagnation(inst.n2, args.stagnation_exponent or 1.5, args.max_generations)
    start = read_ordering(args.start, inst.n2) if args.start else None
    trace = solve(args.algo, inst, table, args.seed, stop, start)
    if args.out:
        write_ordering(trace.final_ordering, args.out)
    else:
        sys.stdout.write(format_ordering(trace.final_ordering))
    print(f"crossings {trace.final_crossings}", file=sys.stderr if not args.out else sys.stdout)
    print(f"generations {trace.generations}", file=sys.stderr)


def cmd_bench(args):
    config = load_config(args.config)
    if args.output:
        config.output_dir = args.output
    if config.output_dir is None:
        raise ParameterError("no output directory (set 'output' in the config or pass --output)")
    report = run_suite(config, workers=args.workers)
    for s in report.summary():
        print(f"{s['algorithm']:>12}  runs={s['runs']}  mean_gap={s['mean_gap']:.3f}  "
              f"median_gap={s['median_gap']:.1f}")
    print(f"wrote {config.output_dir}")


def cmd_stats(args):
    a = read_column(args.a, args.column)
    b = read_column(args.b, args.column)
    result = wilcoxon_rank_sum(a, b)
    print(f"n_a={len(a)} n_b={len(b)} method={result.method}")
    print(f"U={result.u_statistic:g} rank_sum={result.rank_sum:g}")
    print(f"p_two_sided={result.p_two_sided:.6g} p_less={result.p_less:.6g}")
    verdict = "a smaller" if result.p_less < args.alpha else "no evidence a smaller"
    print(f"alpha={args.alpha:g}: {verdict}")


def build_parser():
    parser = _Parser(prog="obcm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="write random instance files")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", type=Path, required=True,
                   help="file (count 1 with a suffix) or directory")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run one algorithm on an instance file")
    p.add_argument("instance", type=Path)
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stagnation-exponent", type=float)
    p.add_argument("--max-generations", type=int)
    p.add_argument("--start", type=Path, help="ordering file to start from")
    p.add_argument("--out", type=Path, help="write the ordering here instead of stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run a benchmark suite from a YAML config")
    p.add_argument("config", type=Path)
    p.add_argument("--output", type=Path)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="rank-sum test between two CSV columns")
    p.add_argument("--a", type=Path, required=True)
    p.add_argument("--b", type=Path, required=True)
    p.add_argument("--column", default="crossings")
    p.add_argument("--alpha", type=float, default=ALPHA)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except FormatError as exc:
        print(f"obcm: {exc}", file=sys.stderr)
        return EXIT_IO
    except ParameterError as exc:
        print(f"obcm: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"obcm: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
