"""Command line interface: sample, enumerate, stats and bench."""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import re
import sys
import time
from contextlib import contextmanager
from typing import List, Optional

from .census import (BoundTooLarge, InsufficientSamples, chisquare_gof, enumerate_orbits,
                     orbit_weights, tally)
from .forms import discriminant, ring_table, stab_order
from .randomsource import MASK64, entropy_seed
from .sampler import BoundTooSmall, iter_samples, make_params

STATS_MAX_BOUND = 10 ** 4
STATS_MIN_PER_ORBIT = 20
SIGNIFICANCE = 0.001

EXIT_OK, EXIT_STAT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_bound(text: str) -> int:
    """A positive integer written in decimal or as ``2^k``."""
    text = text.strip()
    m = re.fullmatch(r"(\d+)\s*(?:\^|\*\*)\s*(\d+)", text)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    if re.fullmatch(r"\d+", text):
        return int(text)
    raise argparse.ArgumentTypeError(f"invalid bound {text!r}; use a decimal integer or 2^k")


def parse_seed(text: str) -> int:
    try:
        seed = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= seed <= MASK64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


def parse_exponents(text: str) -> List[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid exponent list {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("exponents must be positive integers")
    return out


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randcubic",
        description="Random cubic rings via GL2(Z)-orbits of integral binary cubic forms.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, bound=True):
        p.add_argument("--signature", type=int, choices=(1, 3), required=True,
                       help="1 for one real embedding, 3 for totally real")
        if bound:
            p.add_argument("--bound", type=parse_bound, required=True,
                           help="discriminant bound T, decimal or 2^k")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default="-", help="output path (default: standard output)")

    def sampling(p):
        p.add_argument("--count", type=_positive, default=1)
        p.add_argument("--mode", choices=("weighted", "uniform"), default="weighted")
        p.add_argument("--seed", type=parse_seed, default=None,
                       help="unsigned 64-bit seed (default: OS entropy, echoed to stderr)")
        p.add_argument("--jobs", type=_positive, default=1)
        p.add_argument("--initial-precision", type=_positive, default=2,
                       help="first working precision in bits (does not change results)")

    p = sub.add_parser("sample", help="draw random forms")
    common(p)
    sampling(p)

    p = sub.add_parser("enumerate", help="list all orbits by brute force")
    common(p)

    p = sub.add_parser("stats", help="chi-square test of sampled orbit frequencies")
    common(p)
    sampling(p)

    p = sub.add_parser("bench", help="time weighted sampling at T = 2^t")
    p.add_argument("--exponents", type=parse_exponents, default=[20, 200, 2000],
                   help="comma separated exponents t")
    p.add_argument("--count", type=_positive, default=10, help="samples per cell")
    p.add_argument("--seed", type=parse_seed, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default="-")
    return parser


@contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _seed(args) -> int:
    if args.seed is None:
        args.seed = entropy_seed()
    print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def sample_record(s, r: int) -> dict:
    f = s.form
    return {
        "form": f.to_json(),
        "disc": str(discriminant(f)),
        "signature": r,
        "stab": stab_order(f) if s.stab is None else s.stab,
        "ring": ring_table(f).to_json(),
        "attempt_id": s.attempt_id,
        "attempts": s.attempts,
        "precision": s.precision,
    }


_CSV_FIELDS = ("a", "b", "c", "d", "disc", "signature", "stab", "attempt_id", "attempts", "precision")


def _csv_row(rec: dict) -> list:
    return [*rec["form"], *(rec[k] for k in _CSV_FIELDS[4:])]


def cmd_sample(args) -> int:
    params = make_params(args.signature, args.bound)
    seed = _seed(args)
    stream = iter_samples(params, seed, args.mode, jobs=args.jobs,
                          initial_precision=args.initial_precision)
    with _output(args.out) as fh:
        writer = csv.writer(fh, lineterminator="\n") if args.format == "csv" else None
        if writer:
            writer.writerow(_CSV_FIELDS)
        for s in itertools.islice(stream, args.count):
            rec = sample_record(s, args.signature)
            if writer:
                writer.writerow(_csv_row(rec))
            else:
                fh.write(json.dumps(rec) + "\n")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    records = enumerate_orbits(args.signature, args.bound)
    with _output(args.out) as fh:
        if args.format == "csv":
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("a", "b", "c", "d", "disc", "signature", "stab"))
            for rec in records:
                writer.writerow([*rec.form, rec.disc, rec.signature, rec.stab])
        else:
            for rec in records:
                fh.write(rec.to_json() + "\n")
    return EXIT_OK


def run_stats(r: int, T: int, count: int, mode: str, seed: int, jobs: int = 1,
              initial_precision: int = 2) -> dict:
    """Sample ``count`` forms and compare orbit frequencies with the census."""
    if T > STATS_MAX_BOUND:
        raise UsageError(f"stats needs a bound of at most {STATS_MAX_BOUND}")
    params = make_params(r, T)
    records = enumerate_orbits(r, T)
    if count < STATS_MIN_PER_ORBIT * len(records):
        raise UsageError(f"{count} samples is below {STATS_MIN_PER_ORBIT} per orbit "
                         f"({STATS_MIN_PER_ORBIT * len(records)} for {len(records)} orbits)")
    samples = itertools.islice(iter_samples(params, seed, mode, jobs=jobs,
                                            initial_precision=initial_precision), count)
    observed = tally(s.form for s in samples)
    result = chisquare_gof(observed, orbit_weights(records, mode))
    return {
        "signature": r,
        "bound": str(T),
        "mode": mode,
        "seed": seed,
        "count": count,
        "orbits": len(records),
        "statistic": result.statistic,
        "df": result.df,
        "pvalue": result.pvalue,
        "pass": result.pvalue > SIGNIFICANCE,
    }


def cmd_stats(args) -> int:
    seed = _seed(args)
    report = run_stats(args.signature, args.bound, args.count, args.mode, seed,
                       args.jobs, args.initial_precision)
    with _output(args.out) as fh:
        if args.format == "csv":
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(report.keys())
            writer.writerow(report.values())
        else:
            fh.write(json.dumps(report) + "\n")
    return EXIT_OK if report["pass"] else EXIT_STAT_FAIL


def time_per_sample(r: int, T: int, count: int, seed: int) -> float:
    params = make_params(r, T)
    start = time.perf_counter()
    for _ in itertools.islice(iter_samples(params, seed, "weighted", chunk=64), count):
        pass
    return (time.perf_counter() - start) / count


def cmd_bench(args) -> int:
    seed = _seed(args)
    with _output(args.out) as fh:
        if args.format == "text":
            fh.write("# t seconds_r3 seconds_r1\n")
        for t in args.exponents:
            r3 = time_per_sample(3, 2 ** t, args.count, seed)
            r1 = time_per_sample(1, 2 ** t, args.count, seed)
            if args.format == "json":
                fh.write(json.dumps({"t": t, "seconds_r3": r3, "seconds_r1": r1}) + "\n")
            else:
                fh.write(f"{t} {r3:.6g} {r1:.6g}\n")
            fh.flush()
    return EXIT_OK


COMMANDS = {"sample": cmd_sample, "enumerate": cmd_enumerate, "stats": cmd_stats, "bench": cmd_bench}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (BoundTooSmall, BoundTooLarge, InsufficientSamples, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
