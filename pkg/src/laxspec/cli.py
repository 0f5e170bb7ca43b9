"""``laxspec-bench`` command line.

Exit codes: 0 success, 2 configuration error, 3 solver divergence.
"""

from __future__ import annotations

import argparse
import sys

from . import bench
from .errors import ConfigError, DivergenceError, LaxSpecError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_run_flags(p):
    p.add_argument("--config", required=True, help="key = value run description")
    p.add_argument("--out", help="CSV report path (overrides config 'out')")
    p.add_argument("--svg", help="SVG chart path (overrides config 'svg')")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the error pass")
    p.add_argument("--seed", type=int, help="random-data seed (overrides config 'seed')")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="laxspec-bench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_run_flags(sub.add_parser("convergence", help="error and cost versus K"))
    _add_run_flags(sub.add_parser("error-vs-time", help="error and cost versus t at fixed K"))
    plot = sub.add_parser("plot", help="render a CSV report as SVG")
    plot.add_argument("--in", dest="inp", required=True, help="CSV report")
    plot.add_argument("--svg", required=True)
    plot.add_argument("--x", default="wall_seconds", help=f"one of {bench.AXES}")
    plot.add_argument("--y", default="error")
    plot.add_argument("--linear-x", action="store_true")
    plot.add_argument("--linear-y", action="store_true")
    return parser


def _run(args) -> int:
    if args.command == "plot":
        report = bench.ConvergenceReport.read(args.inp)
        bench.emit_svg(report, args.x, args.y, not args.linear_x, not args.linear_y, args.svg)
        return EXIT_OK
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    cfg = bench.load_config(args.config, out=args.out, svg=args.svg, seed=args.seed)
    runner = bench.run_convergence if args.command == "convergence" else bench.run_error_vs_time
    report = runner(cfg, jobs=args.jobs)
    if cfg.out is None:
        sys.stdout.write(report.to_csv())
    if cfg.svg and len(report):
        x, y = bench.default_axes(args.command, cfg)
        bench.emit_svg(report, x, y, True, True, cfg.svg,
                       title=f"{cfg.equation.value}: {y} vs {x}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except DivergenceError as exc:
        print(f"laxspec-bench: diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (ConfigError, LaxSpecError, ValueError, OSError) as exc:
        print(f"laxspec-bench: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
