"""Command-line entry point: ``orc4 {build,synth,stats,random,linear,bench,hard}``.

Exit codes: 0 success, 2 bad arguments or unparsable input, 3 function needs
more than L gates, 4 table missing, unreadable or corrupt.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import experiments as ex
from .bfs import build, expanded_counts
from .gates import CircuitSyntaxError, GateError, parse_circuit
from .perm import format_perm, parse_perm
from .store import CanonicalTable, TableError, load, save
from .synth import ExpandMode, SearchConfig, SizeExceedsError, synthesize

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_EXCEEDS = 3
EXIT_IO = 4

TABLE_ENV = "ORC4_TABLE"
DEFAULT_BUILD_K = 6

log = logging.getLogger("orc4")


class UsageError(Exception):
    pass


class TableIOError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--table", type=Path,
                        help=f"ORC1 table file (default: ${TABLE_ENV}, else build in memory)")
    common.add_argument("--k", type=int, help="table depth used for lookups (default: table's k)")
    common.add_argument("--m", type=int, help="scan depth (default: min(k, 6))")
    common.add_argument("--expand-mode", choices=[e.value for e in ExpandMode],
                        default=ExpandMode.ON_THE_FLY.value)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="orc4", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build and save a canonical table")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--out", type=Path, required=True)
    b.add_argument("-v", "--verbose", action="store_true")

    s = sub.add_parser("synth", parents=[common], help="minimal circuit for one function")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--perm", help='16 images, "p0,...,p15" or "[p0,...,p15]"')
    src.add_argument("--circuit", help='gate list, e.g. "TOF(a,b,c) CNOT(a,b)"')

    sub.add_parser("stats", parents=[common], help="per-size counts of a table")

    r = sub.add_parser("random", parents=[common], help="size histogram of random functions")
    r.add_argument("--samples", type=int, default=10_000)
    r.add_argument("--seed", type=int, default=ex.DEFAULT_SEED)
    r.add_argument("--tsv", action="store_true", help="only size<TAB>count lines")

    lin = sub.add_parser("linear", parents=[common], help="size histogram of all linear functions")
    lin.add_argument("--tsv", action="store_true", help="only size<TAB>count lines")

    bn = sub.add_parser("bench", parents=[common], help="synthesize the benchmark functions")
    bn.add_argument("names", nargs="*", help="subset of benchmark names")

    h = sub.add_parser("hard", parents=[common], help="extend maximal functions gate by gate")
    h.add_argument("--budget", type=float, default=60.0, help="seconds")
    return p


def _table(args) -> CanonicalTable:
    path = args.table or (Path(os.environ[TABLE_ENV]) if os.environ.get(TABLE_ENV) else None)
    if path is None:
        k = args.k if args.k is not None else DEFAULT_BUILD_K
        log.info("no table given; building k=%d in memory", k)
        return build(k)
    try:
        return load(path)
    except OSError as e:
        raise TableIOError(f"cannot read table {path}: {e.strerror or e}") from e
    except TableError as e:
        raise TableIOError(f"bad table {path}: {e}") from e


def _config(args, table: CanonicalTable) -> SearchConfig:
    k = table.k if args.k is None else args.k
    m = min(k, 6) if args.m is None else args.m
    if not 0 <= k <= table.k:
        raise UsageError(f"--k {k} needs a table with k >= {k}; this one has k={table.k}")
    if not 0 <= m <= table.k:
        raise UsageError(f"--m {m} needs a table with k >= {m}; this one has k={table.k}")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    return SearchConfig(k, m, ExpandMode(args.expand_mode))


def _header(cfg: SearchConfig, **extra) -> str:
    parts = [f"k={cfg.k}", f"m={cfg.m}", f"L={cfg.L}"]
    parts += [f"{key}={val}" for key, val in extra.items()]
    return "# " + " ".join(parts)


def cmd_build(args) -> int:
    if args.k < 0:
        raise UsageError("--k must be >= 0")
    t0 = time.perf_counter()
    table = build(args.k)
    try:
        save(table, args.out)
    except OSError as e:
        raise TableIOError(f"cannot write {args.out}: {e.strerror or e}") from e
    print(f"# k={table.k} built in {time.perf_counter() - t0:.1f}s -> {args.out}")
    for size, n in enumerate(table.level_counts()):
        print(f"{size}\t{n}")
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.perm is not None:
        try:
            f = parse_perm(args.perm)
        except ValueError as e:
            raise UsageError(str(e)) from e
        given = None
    else:
        try:
            given = parse_circuit(args.circuit)
        except (CircuitSyntaxError, GateError) as e:
            raise UsageError(str(e)) from e
        f = given.evaluate()
    table = _table(args)
    cfg = _config(args, table)
    print(_header(cfg))
    print(f"perm [{format_perm(f)}]")
    if given is not None:
        print(f"input size {given.size}")
    try:
        c = synthesize(f, cfg, table)
    except SizeExceedsError:
        print(f"size >{cfg.L}")
        return EXIT_EXCEEDS
    assert c.evaluate() == f
    print(f"size {c.size}")
    print(f"circuit {c}")
    if given is not None:
        print(f"saved {given.size - c.size}")
    return EXIT_OK


def cmd_stats(args) -> int:
    table = _table(args)
    funcs = expanded_counts(table)
    st = table.stats()
    print(f"# k={table.k}")
    print(f"{'size':>4}  {'reduced':>12}  {'functions':>14}")
    for size, (n, nf) in enumerate(zip(table.level_counts(), funcs)):
        print(f"{size:>4}  {n:>12}  {nf:>14}")
    print(f"{'all':>4}  {sum(table.level_counts()):>12}  {sum(funcs):>14}")
    print(f"# capacity {st.capacity} load {st.load:.3f} "
          f"chain mean {st.mean_chain:.3f} max {st.max_chain}")
    return EXIT_OK


def _print_hist(hist: ex.SizeHistogram, cfg: SearchConfig, tsv: bool, **extra) -> None:
    print(_header(cfg, **extra))
    if tsv:
        print("\n".join(hist.lines(cfg.L)))
    else:
        print(hist.table(cfg.L))


def cmd_random(args) -> int:
    if args.samples < 0:
        raise UsageError("--samples must be >= 0")
    table = _table(args)
    cfg = _config(args, table)
    hist = ex.random_distribution(args.samples, args.seed, cfg, table, threads=args.threads)
    _print_hist(hist, cfg, args.tsv, samples=args.samples, seed=args.seed,
                prng=ex.PRNG_NAME.split()[0])
    return EXIT_OK


def cmd_linear(args) -> int:
    table = _table(args)
    cfg = _config(args, table)
    if cfg.L < 10:
        raise UsageError(f"linear functions need L >= 10, have L={cfg.L}")
    hist = ex.linear_distribution(cfg, table, threads=args.threads)
    _print_hist(hist, cfg, args.tsv, functions=hist.total)
    return EXIT_OK


def cmd_bench(args) -> int:
    unknown = [n for n in args.names if n not in ex.BENCHMARK_INDEX]
    if unknown:
        raise UsageError(f"unknown benchmark(s): {', '.join(unknown)}")
    cases = [ex.BENCHMARK_INDEX[n] for n in args.names] or list(ex.BENCHMARKS)
    table = _table(args)
    cfg = _config(args, table)
    report = ex.run_benchmarks(cases, cfg, table)
    print(report.format())
    return EXIT_OK


def cmd_hard(args) -> int:
    table = _table(args)
    cfg = _config(args, table)
    res = ex.hard_search(table, cfg, args.budget, threads=args.threads)
    print(_header(cfg, budget=args.budget))
    for size, n in res.history:
        print(f"{size}\t{n}")
    state = "exhausted" if res.complete else "budget expired"
    print(f"# largest certified size {res.best_size} ({len(res.witnesses)} functions, "
          f"{res.evaluated} evaluated, {res.seconds:.1f}s, {state})")
    print(f"example [{format_perm(res.example)}]")
    return EXIT_OK


COMMANDS = {
    "build": cmd_build, "synth": cmd_synth, "stats": cmd_stats, "random": cmd_random,
    "linear": cmd_linear, "bench": cmd_bench, "hard": cmd_hard,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"orc4 {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TableIOError as e:
        print(f"orc4 {args.command}: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
