"""equivlab command line.

Exit codes: 0 success, 1 failed self-check, 2 I/O error, 3 resource guard,
64 usage or input error.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from typing import Optional, Sequence

from . import selfcheck
from .binary_analytic import BssSource, achieving_channels, figure4_csv, figure4_table
from .binning import CSV_HEADER, SimConfig, run_experiment
from .binning.codes import enumeration_guard
from .errors import ConstraintError, InputError, ResourceError
from .infomeasures import JointDist, load
from .regions import (
    OptimizeOptions, SecInsSource, SourcePair, optimize_theorem1, optimize_theorem2, sweep, sweep_csv,
)

EXIT_OK, EXIT_CHECK, EXIT_IO, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 3, 64
GRID_TOL = 1e-12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` with stop included up to 1e-12, or a comma list."""
    if ":" not in text:
        try:
            vals = [float(t) for t in text.split(",")]
        except ValueError:
            raise UsageError(f"bad grid {text!r}") from None
        if not vals or not all(math.isfinite(v) for v in vals):
            raise UsageError(f"bad grid {text!r}")
        return vals
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None
    if not all(math.isfinite(v) for v in (start, stop, step)):
        raise UsageError(f"bad grid {text!r}")
    if step <= 0:
        raise UsageError("grid step must be positive")
    if stop <= start:
        raise UsageError(f"empty grid {text!r}: stop must exceed start")
    count = math.floor((stop - start) / step + GRID_TOL) + 1
    return [round(start + i * step, 12) for i in range(count)]


def parse_source(text: str):
    """``bss:<delta>`` or a path to a serialized joint law."""
    if text.startswith("bss:"):
        try:
            delta = float(text[4:])
        except ValueError:
            raise UsageError(f"bad crossover in {text!r}") from None
        return SourcePair.bss(BssSource(delta).delta)
    obj = load(text)
    if not isinstance(obj, JointDist):
        raise InputError(f"{text} holds a channel, not a joint law")
    names = set(obj.names)
    if names == {"X", "Y"}:
        return SourcePair(obj)
    if names == {"W", "X", "Y", "Z"}:
        return SecInsSource(obj)
    raise InputError(f"{text} must be a law on (X, Y) or (W, X, Y, Z), got {obj.names}")


def threads() -> int:
    raw = os.environ.get("EQUIVLAB_THREADS", "1").strip() or "1"
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"EQUIVLAB_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError("EQUIVLAB_THREADS must be nonnegative")
    return n if n > 0 else (os.cpu_count() or 1)


def _write(path: str, text: str, append: bool = False):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "a" if append else "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_fig4(args) -> int:
    rows = figure4_table(args.delta, parse_grid(args.grid))
    _write(args.out, figure4_csv(args.delta, rows))
    return EXIT_OK


def _pair_of(src, model: str):
    if model == "three":
        return src if isinstance(src, SecInsSource) else SecInsSource.without_side_info(src)
    if isinstance(src, SecInsSource):
        raise InputError(f"model {model} takes a law on (X, Y)")
    return src


def cmd_sweep(args) -> int:
    src = _pair_of(parse_source(args.source), args.model)
    grid = parse_grid(args.grid)
    opts = OptimizeOptions(starts=args.starts, seed=args.seed, rins_budget=args.rins, workers=threads())
    res = sweep(args.model, src, grid, opts)
    extra = [f"starts={args.starts}"] + ([f"rins={args.rins!r}"] if args.model == "three" else [])
    _write(args.out, sweep_csv(args.model, args.seed, args.source, grid, [p for p, _ in res], extra))
    return EXIT_OK


def _sim_aux(src: SourcePair, source_text: str, model: str, ry: float, seed: int, workers: int):
    if ry < 0:
        raise InputError("helper rate must be nonnegative")
    if source_text.startswith("bss:"):
        return achieving_channels(float(source_text[4:]), min(ry, 1.0), model)
    opts = OptimizeOptions(seed=seed, workers=workers)
    fn = optimize_theorem1 if model == "one" else optimize_theorem2
    return fn(src, ry, opts)[1]


def cmd_sim(args) -> int:
    src = _pair_of(parse_source(args.source), args.model)
    workers = threads()
    if args.exact:
        # fail before any optimization or code construction
        enumeration_guard(args.model, src.nx, src.ny, args.n)
    aux = _sim_aux(src, args.source, args.model, args.ry, args.seed, workers)
    cfg = SimConfig(args.n, src, aux, args.margin, args.eps, args.seed, args.trials, args.model,
                    args.exact, workers)
    report = run_experiment(cfg)
    row = report.csv_row() + "\n"
    if args.out == "-":
        _write("-", CSV_HEADER + "\n" + row)
    else:
        fresh = not os.path.exists(args.out) or os.path.getsize(args.out) == 0
        _write(args.out, (CSV_HEADER + "\n" if fresh else "") + row, append=True)
    return EXIT_OK


def cmd_check(args) -> int:
    results = selfcheck.run_checks(seed=args.seed, cases=args.cases, mgl_channels=args.mgl_channels)
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}: {r.detail}")
    failed = [r.name for r in results if not r.ok]
    if failed:
        print("violated: " + "; ".join(failed), file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="equivlab", description="Rate-equivocation regions with rate-limited helpers.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    f = sub.add_parser("fig4", help="closed-form binary-symmetric boundary table")
    f.add_argument("--delta", type=float, required=True)
    f.add_argument("--grid", required=True, help="start:stop:step or comma list of helper rates")
    f.add_argument("--out", default="-")
    f.set_defaults(fn=cmd_fig4)

    s = sub.add_parser("sweep", help="optimized region boundary over a budget grid")
    s.add_argument("--model", choices=["one", "two", "three"], required=True)
    s.add_argument("--source", required=True, help="bss:<delta> or path to a joint law")
    s.add_argument("--grid", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--starts", type=int, default=64)
    s.add_argument("--rins", type=float, default=0.0, help="insecure-link budget for model three")
    s.add_argument("--out", default="-")
    s.set_defaults(fn=cmd_sweep)

    m = sub.add_parser("sim", help="random-binning simulation, appends one CSV row")
    m.add_argument("--model", choices=["one", "two"], default="one")
    m.add_argument("--source", default="bss:0.05")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--margin", type=float, default=0.3)
    m.add_argument("--eps", type=float, default=0.35)
    m.add_argument("--ry", type=float, default=0.5, help="helper rate the auxiliary system is built for")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--trials", type=int, default=200)
    m.add_argument("--exact", action=argparse.BooleanOptionalAction, default=True,
                   help="compute exact equivocation by enumeration")
    m.add_argument("--out", default="-")
    m.set_defaults(fn=cmd_sim)

    c = sub.add_parser("check", help="reduction identities and Mrs. Gerber property suite")
    c.add_argument("--seed", type=int, default=1)
    c.add_argument("--cases", type=int, default=100)
    c.add_argument("--mgl-channels", type=int, default=1000)
    c.set_defaults(fn=cmd_check)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, InputError, ConstraintError) as e:
        print(f"equivlab: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as e:
        print(f"equivlab: resource guard: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as e:
        print(f"equivlab: I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
