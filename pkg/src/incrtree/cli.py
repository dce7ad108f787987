"""Command line interface: ``incrtree {sample,enumerate,stats,bench}``.

Exit codes: 0 success, 2 invalid usage or parameters, 1 runtime failure.
Relative ``--output`` paths are resolved against ``$INCRTREE_OUTPUT_DIR``
when that variable is set.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys
import time
from fractions import Fraction
from typing import List, Optional

from . import __version__, family, marchal, recursive, stats
from .errors import DomainError, IncrTreeError, SizeTooLarge
from .rng_bits import PRNG_VERSION, BitSource
from .sampling import MODELS, SampleConfig, sample_batch
from .tree_model import (encode, enumerate_family_trees, enumerate_strict_trees,
                         inorder_labels)

FORMATS = ("paren", "json", "dot", "perm")
OUTPUT_ENV = "INCRTREE_OUTPUT_DIR"


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _count(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 3 or 1/2, got {text!r}")


def _sizes(text: str) -> List[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("sizes are comma separated integers")
    if not out or any(x < 1 for x in out):
        raise argparse.ArgumentTypeError("sizes must be positive")
    return out


def _add_common(p: argparse.ArgumentParser, models=MODELS) -> None:
    p.add_argument("--model", choices=models, default="recursive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--a", type=_rational, default=Fraction(1), help="binary node weight")
    p.add_argument("--b", type=_rational, default=Fraction(0), help="unary node weight")
    p.add_argument("--c", type=_rational, default=Fraction(1), help="leaf weight")
    p.add_argument("--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="incrtree",
        description="Random strictly increasing binary trees and weighted unary-binary trees.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} ({PRNG_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw random trees")
    _add_common(p)
    p.add_argument("--size", type=_positive_int, required=True)
    p.add_argument("--count", type=_count, default=1)
    p.add_argument("--format", choices=FORMATS, default="paren")
    p.add_argument("--eps", type=_rational, default=marchal.DEFAULT_EPS,
                   help="target rejection probability for the initial precision")
    p.add_argument("--kappa", type=int, default=marchal.DEFAULT_KAPPA)
    p.add_argument("--jobs", type=_positive_int, default=1)

    p = sub.add_parser("enumerate", help="list every tree of a small size")
    _add_common(p)
    p.add_argument("--size", type=_positive_int, required=True)
    p.add_argument("--format", choices=FORMATS, default="paren")

    p = sub.add_parser("stats", help="run a statistical suite and print a JSON report")
    _add_common(p, MODELS + ("biased",))
    p.add_argument("--suite", required=True)
    p.add_argument("--size", type=_positive_int)
    p.add_argument("--sizes", type=_sizes, default=[101, 1001])
    p.add_argument("--reps", type=_positive_int, default=10000)
    p.add_argument("--jobs", type=_positive_int, default=1)

    p = sub.add_parser("bench", help="time and bit cost per tree as CSV")
    _add_common(p, ("marchal", "recursive"))
    p.add_argument("--sizes", type=_sizes, default=[101, 1001])
    p.add_argument("--reps", type=_positive_int, default=20)
    return parser


def _spec(args) -> Optional[family.FamilySpec]:
    if args.model != "family":
        return None
    return family.make_spec(args.a, args.b, args.c)


def _render(tree, fmt: str) -> str:
    if fmt == "perm":
        return " ".join(map(str, inorder_labels(tree)))
    return encode(tree, fmt)


@contextlib.contextmanager
def _open_output(path: Optional[str]):
    if path is None:
        yield sys.stdout
        return
    base = os.environ.get(OUTPUT_ENV)
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        yield fh


def _join(records: List[str], fmt: str) -> str:
    sep = "\n\n" if fmt == "dot" else "\n"
    return sep.join(records) + ("\n" if records else "")


def _sample_record(d, fmt):
    return _render(d.tree, fmt), d.bits, d.restarts


def cmd_sample(args) -> int:
    spec = _spec(args)
    if args.format == "perm" and args.model == "family" and spec.b != 0:
        raise UsageError("format perm needs a binary model (b = 0)")
    if args.eps <= 0 or args.eps > 1:
        raise UsageError("eps must lie in (0, 1]")
    cfg = SampleConfig(args.model, args.size, args.eps, args.kappa, spec)
    emit = _FORMATTERS[args.format]
    rows = sample_batch(cfg, args.count, args.seed, args.jobs, emit=emit)
    with _open_output(args.output) as out:
        out.write(_join([r[0] for r in rows], args.format))
    bits = sum(r[1] for r in rows)
    restarts = sum(r[2] for r in rows)
    print(f"# model={args.model} size={args.size} count={args.count} seed={args.seed} "
          f"bits={bits} restarts={restarts}", file=sys.stderr)
    return 0


def _fmt_paren(d):
    return _sample_record(d, "paren")


def _fmt_json(d):
    return _sample_record(d, "json")


def _fmt_dot(d):
    return _sample_record(d, "dot")


def _fmt_perm(d):
    return _sample_record(d, "perm")


_FORMATTERS = {"paren": _fmt_paren, "json": _fmt_json, "dot": _fmt_dot, "perm": _fmt_perm}


def cmd_enumerate(args) -> int:
    spec = _spec(args)
    records = []
    if spec is None:
        if args.size % 2 == 0:
            raise UsageError(f"size {args.size} is even; strict binary trees need odd size")
        trees = enumerate_strict_trees(args.size)
        records = [_render(t, args.format) for t in trees]
        summary = f"# count={len(trees)}"
    else:
        if args.format == "perm":
            raise UsageError("format perm is only defined for strict binary trees")
        census = enumerate_family_trees(spec.a, spec.b, spec.c, args.size)
        for tree, w in census:
            text = _render(tree, args.format)
            if args.format == "json":
                records.append(json.dumps({"tree": json.loads(text), "weight": w},
                                          separators=(",", ":")))
            elif args.format == "dot":
                records.append(f"// weight {w}\n{text}")
            else:
                records.append(f"{text}\t{w}")
        summary = f"# count={len(census)} total_weight={sum(w for _, w in census)}"
    with _open_output(args.output) as out:
        out.write(_join(records, args.format))
        out.write(summary + "\n")
    return 0


def cmd_stats(args) -> int:
    suite = args.suite
    if suite not in stats.SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(stats.SUITES)}")
    spec = _spec(args)
    if suite == "uniformity":
        size = args.size or 5
        report = stats.uniformity_suite(args.model, size, args.reps, args.seed, spec, args.jobs)
    elif suite == "mdist":
        report = stats.mdist_suite(args.size or 7, args.reps, args.seed)
    elif suite == "arcsine":
        n = args.size or 51
        report = stats.arcsine_suite(args.reps, args.seed, n=n, index=n - 1)
    elif suite == "accept-rate":
        report = stats.accept_rate_suite(args.size or 101, args.reps, args.seed)
    else:
        if args.model not in ("marchal", "recursive"):
            raise UsageError("the bits suite covers the marchal and recursive models")
        report = stats.bit_report(args.model, args.sizes, args.reps, args.seed)
    with _open_output(args.output) as out:
        out.write(report.to_json() + "\n")
    return 0


BENCH_COLUMNS = ("size", "mean_ms", "mean_bits", "bits_per_nlogn", "mean_M_iterations")


def cmd_bench(args) -> int:
    lines = [",".join(BENCH_COLUMNS)]
    for n in sorted(args.sizes):
        if n % 2 == 0:
            raise UsageError(f"size {n} is even; strict binary trees need odd size")
        bits = 0
        mst = recursive.MSampleStats()
        t0 = time.perf_counter()
        for i in range(args.reps):
            src = BitSource(args.seed, i)
            if args.model == "recursive":
                recursive.sample_tree(n, src, mst)
            else:
                marchal.sample_tree(n, src)
            bits += src.bits_consumed
        ms = 1000 * (time.perf_counter() - t0) / args.reps
        mean_bits = bits / args.reps
        ratio = mean_bits / (n * math.log2(n)) if n > 1 else 0.0
        iters = f"{mst.iterations / mst.calls:.4f}" if mst.calls else ""
        lines.append(f"{n},{ms:.3f},{mean_bits:.2f},{ratio:.4f},{iters}")
    with _open_output(args.output) as out:
        out.write("\n".join(lines) + "\n")
    return 0


COMMANDS = {"sample": cmd_sample, "enumerate": cmd_enumerate,
            "stats": cmd_stats, "bench": cmd_bench}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainError, SizeTooLarge, ValueError) as exc:
        print(f"incrtree {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (IncrTreeError, OSError) as exc:
        print(f"incrtree {args.command}: failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
