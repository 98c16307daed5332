"""Reproduction drivers: size distributions, benchmarks and the hard search."""

from __future__ import annotations

import itertools
import logging
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .gates import GATE_PERMS, GATES, Circuit
from .perm import IDENTITY, compose_left_many, compose_many, from_images
from .store import CanonicalTable
from .synth import EXCEEDS, SearchConfig, SizeExceedsError, size_of_many, synthesize

log = logging.getLogger(__name__)

PRNG_NAME = "MT19937 (random.Random)"
DEFAULT_SEED = 20100524


@dataclass
class SizeHistogram:
    """Function counts per size; ``exceeded`` counts results above L."""

    counts: Counter = field(default_factory=Counter)
    exceeded: int = 0

    @classmethod
    def from_sizes(cls, sizes: Iterable[int]) -> "SizeHistogram":
        h = cls()
        h.add(sizes)
        return h

    def add(self, sizes: Iterable[int]) -> None:
        sizes = np.asarray(list(sizes) if not isinstance(sizes, np.ndarray) else sizes)
        vals, cnts = np.unique(sizes, return_counts=True)
        for v, c in zip(vals.tolist(), cnts.tolist()):
            if v == EXCEEDS:
                self.exceeded += c
            else:
                self.counts[v] += c

    def merge(self, other: "SizeHistogram") -> "SizeHistogram":
        return SizeHistogram(self.counts + other.counts, self.exceeded + other.exceeded)

    @property
    def total(self) -> int:
        return sum(self.counts.values()) + self.exceeded

    def fraction(self, size: int) -> float:
        n = self.total
        if not n:
            return 0.0
        return (self.exceeded if size == EXCEEDS else self.counts.get(size, 0)) / n

    @property
    def exceeded_fraction(self) -> float:
        return self.fraction(EXCEEDS)

    @property
    def mean(self) -> float:
        """Mean over the sizes that were resolved (a lower bound if any exceeded)."""
        n = sum(self.counts.values())
        return sum(s * c for s, c in self.counts.items()) / n if n else float("nan")

    def as_list(self) -> list[int]:
        top = max(self.counts, default=-1)
        return [self.counts.get(s, 0) for s in range(top + 1)]

    def lines(self, limit: int | None = None) -> list[str]:
        """Machine-readable ``size<TAB>count`` lines; ``>L`` for the exceeded bucket."""
        out = [f"{s}\t{c}" for s, c in sorted(self.counts.items())]
        if self.exceeded:
            out.append(f">{limit if limit is not None else 'L'}\t{self.exceeded}")
        return out

    def table(self, limit: int | None = None) -> str:
        n = self.total or 1
        rows = [f"{'size':>6} {'count':>12} {'fraction':>10}"]
        for s, c in sorted(self.counts.items()):
            rows.append(f"{s:>6} {c:>12} {c / n:>10.6f}")
        if self.exceeded:
            label = f">{limit}" if limit is not None else ">L"
            rows.append(f"{label:>6} {self.exceeded:>12} {self.exceeded / n:>10.6f}")
        rows.append(f"{'total':>6} {self.total:>12}")
        rows.append(f"mean size (resolved): {self.mean:.4f}")
        return "\n".join(rows)


def random_permutations(n: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """``n`` uniform permutations from a seeded Fisher-Yates shuffle."""
    rng = random.Random(seed)
    out = np.empty(n, dtype=np.uint64)
    images = list(range(16))
    for i in range(n):
        images.sort()
        rng.shuffle(images)
        out[i] = from_images(images)
    return out


def random_distribution(
    n_samples: int,
    seed: int,
    cfg: SearchConfig,
    table: CanonicalTable,
    threads: int = 1,
    chunk: int = 256,
) -> SizeHistogram:
    fs = random_permutations(n_samples, seed)
    hist = SizeHistogram()
    t0 = time.perf_counter()
    for lo in range(0, n_samples, chunk):
        sizes, _ = size_of_many(fs[lo:lo + chunk], cfg, table, threads=threads)
        hist.add(sizes)
        log.info("random: %d/%d done (%.0fs)", min(lo + chunk, n_samples), n_samples,
                 time.perf_counter() - t0)
    return hist


# -- linear (NOT/CNOT) functions ---------------------------------------------

LINEAR_COUNT = 322_560


def linear_gate_perms() -> np.ndarray:
    return np.array([g.perm for g in GATES if g.name in ("NOT", "CNOT")], dtype=np.uint64)


def enumerate_linear() -> np.ndarray:
    """Every function computable with NOT and CNOT gates, sorted.

    Built as the closure of the identity under appending NOT/CNOT gates.
    """
    gens = linear_gate_perms()
    seen = np.array([IDENTITY], dtype=np.uint64)
    frontier = seen
    buf = np.empty(0, dtype=np.uint64)
    while len(frontier):
        if len(buf) < len(frontier):
            buf = np.empty(len(frontier), dtype=np.uint64)
        found = []
        for g in gens:
            compose_many(frontier, g, buf[:len(frontier)])
            found.append(buf[:len(frontier)].copy())
        cand = np.unique(np.concatenate(found))
        frontier = cand[~np.isin(cand, seen, assume_unique=True)]
        seen = np.union1d(seen, frontier)
    return seen


def affine_functions() -> np.ndarray:
    """Invertible 4x4 GF(2) matrices times 16 output masks, sorted.

    An independent construction of the same set as :func:`enumerate_linear`.
    """
    xs = np.arange(16)
    bits = (xs[:, None] >> np.arange(4)) & 1  # bits[x, j]
    words = []
    for cols in itertools.product(range(1, 16), repeat=4):
        # column j is the image of basis vector e_j
        image = np.zeros(16, dtype=np.int64)
        for j, c in enumerate(cols):
            image ^= bits[:, j] * c
        if len(set(image.tolist())) != 16:
            continue
        for mask in range(16):
            words.append(from_images((image ^ mask).tolist()))
    return np.unique(np.array(words, dtype=np.uint64))


def linear_distribution(
    cfg: SearchConfig, table: CanonicalTable, funcs: np.ndarray | None = None, threads: int = 1
) -> SizeHistogram:
    if cfg.L < 10:
        raise ValueError(f"linear functions need up to 10 gates; L={cfg.L}")
    fs = enumerate_linear() if funcs is None else funcs
    sizes, _ = size_of_many(fs, cfg, table, threads=threads)
    return SizeHistogram.from_sizes(sizes)


# -- benchmarks ---------------------------------------------------------------

@dataclass(frozen=True)
class BenchmarkCase:
    name: str
    images: tuple[int, ...]
    known_best: int | None  # None when no earlier circuit is known
    proved_optimal: bool
    expected_soc: int
    reference_circuit: str = ""  # a known optimal circuit, verbatim
    note: str = ""
    reference_complete: bool = True  # False when the printed circuit lost a gate

    def __post_init__(self):
        if sorted(self.images) != list(range(16)):
            raise ValueError(f"{self.name}: not a permutation of 0..15")

    @property
    def spec(self) -> int:
        return from_images(self.images)


BENCHMARKS: tuple[BenchmarkCase, ...] = (
    BenchmarkCase("4_49", (15, 1, 12, 3, 5, 6, 8, 7, 0, 10, 13, 9, 2, 4, 14, 11), 12, False, 12,
                  "NOT(a) CNOT(c,a) CNOT(a,d) TOF(a,b,d) CNOT(d,a) TOF(c,d,b) TOF(a,d,c) "
                  "TOF(b,c,a) TOF(a,b,d) NOT(a) CNOT(d,b) CNOT(d,c)"),
    BenchmarkCase("4bit-7-8", (0, 1, 2, 3, 4, 5, 6, 8, 7, 9, 10, 11, 12, 13, 14, 15), 7, False, 7,
                  "CNOT(d,b) CNOT(d,a) CNOT(c,d) TOF4(a,b,d,c) CNOT(c,d) CNOT(d,b) CNOT(d,a)"),
    BenchmarkCase("decode42", (1, 2, 4, 8, 0, 3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15), 11, False, 10,
                  "CNOT(c,b) CNOT(d,a) CNOT(c,a) TOF(a,d,b) CNOT(b,c) TOF4(a,b,c,d) TOF(b,d,c) "
                  "CNOT(c,a) CNOT(a,b) NOT(a)"),
    BenchmarkCase("hwb4", (0, 2, 4, 12, 8, 5, 9, 11, 1, 6, 10, 13, 3, 14, 7, 15), 11, True, 11,
                  "CNOT(b,d) CNOT(d,a) CNOT(a,c) TOF4(b,c,d,a) CNOT(d,b) CNOT(c,d) TOF(a,c,b) "
                  "TOF4(b,c,d,a) CNOT(d,c) CNOT(a,c) CNOT(b,d)"),
    BenchmarkCase("imark", (4, 5, 2, 14, 0, 3, 6, 10, 11, 8, 15, 1, 12, 13, 7, 9), 7, False, 7,
                  "TOF(c,d,a) TOF(a,b,d) CNOT(d,c) CNOT(b,c) CNOT(d,a) TOF(a,c,b) NOT(c)"),
    BenchmarkCase("mperk", (3, 11, 2, 10, 0, 7, 1, 6, 15, 8, 14, 9, 13, 5, 12, 4), 9, False, 9,
                  "NOT(c) CNOT(d,c) TOF(c,d,b) TOF(a,c,d) CNOT(b,a) CNOT(d,a) CNOT(c,a) "
                  "CNOT(a,b) CNOT(b,c)",
                  note="earlier 9-gate circuit needs extra output SWAPs"),
    BenchmarkCase("oc5", (6, 0, 12, 15, 7, 1, 5, 2, 4, 10, 13, 3, 11, 8, 14, 9), 15, False, 11,
                  "TOF(b,d,c) TOF(c,d,b) TOF(a,b,c) NOT(a) CNOT(d,b) CNOT(a,c) TOF(b,c,d) "
                  "CNOT(a,b) CNOT(c,a) CNOT(a,c) TOF4(a,b,d,c)"),
    BenchmarkCase("oc6", (9, 0, 2, 15, 11, 6, 7, 8, 14, 3, 4, 13, 5, 1, 12, 10), 14, False, 12,
                  "TOF4(b,c,d,a) TOF4(a,c,d,b) CNOT(d,c) TOF(b,c,d) TOF(c,d,a) TOF4(a,b,d,c) "
                  "CNOT(b,a) NOT(a) CNOT(c,b) CNOT(d,c) CNOT(a,d) TOF(b,d,c)"),
    BenchmarkCase("oc7", (6, 15, 9, 5, 13, 12, 3, 7, 2, 10, 1, 11, 0, 14, 4, 8), 17, False, 13,
                  "TOF(b,d,c) TOF(a,b,d) CNOT(b,a) TOF4(a,c,d,b) CNOT(c,b) CNOT(d,c) TOF(a,c,d) "
                  "NOT(b) NOT(d) CNOT(b,c) TOF(b,d,a) TOF(a,c,d) CNOT(c,a)"),
    BenchmarkCase("oc8", (11, 3, 9, 2, 7, 13, 15, 14, 8, 1, 4, 10, 0, 12, 6, 5), 16, False, 12,
                  "CNOT(d,a) TOF(b,c,a) TOF(c,d,b) TOF4(a,b,d,c) TOF(a,b,d) TOF(a,d,b) NOT(a) "
                  "NOT(b) TOF(b,d,a) CNOT(a,d) TOF(b,c,d)",
                  reference_complete=False),
    BenchmarkCase("primes4", (2, 3, 5, 7, 11, 13, 0, 1, 4, 6, 8, 9, 10, 12, 14, 15), None, False, 10,
                  "CNOT(d,c) CNOT(c,a) CNOT(b,c) NOT(b) TOF(b,c,d) TOF4(a,b,d,c) TOF(a,c,b) "
                  "NOT(a) TOF4(a,c,d,b) CNOT(b,a)"),
    BenchmarkCase("rd32", (0, 7, 6, 9, 4, 11, 10, 13, 8, 15, 14, 1, 12, 3, 2, 5), 4, True, 4,
                  "TOF(a,b,d) CNOT(a,b) TOF(b,c,d) CNOT(b,c)"),
    BenchmarkCase("shift4", (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 0), 4, True, 4,
                  "TOF4(a,b,c,d) TOF(a,b,c) CNOT(a,b) NOT(a)"),
)
BENCHMARK_INDEX = {c.name: c for c in BENCHMARKS}


@dataclass
class BenchmarkResult:
    case: BenchmarkCase
    size: int  # EXCEEDS when above L
    circuit: Circuit | None
    verified: bool
    seconds: float

    @property
    def matches(self) -> bool:
        return self.size == self.case.expected_soc

    @property
    def status(self) -> str:
        if self.size == EXCEEDS:
            return "EXCEEDS"
        if not self.verified:
            return "WRONG"
        return "ok" if self.matches else "MISMATCH"


@dataclass
class BenchmarkReport:
    cfg: SearchConfig
    results: list[BenchmarkResult]

    @property
    def all_ok(self) -> bool:
        return all(r.status == "ok" for r in self.results)

    def format(self) -> str:
        L = self.cfg.L
        out = [f"benchmarks (k={self.cfg.k}, m={self.cfg.m}, L={L})",
               f"{'name':<10} {'SBKC':>5} {'PO':>3} {'SOC':>4} {'found':>6} {'status':>8} {'sec':>9}"]
        for r in self.results:
            c = r.case
            best = "N/A" if c.known_best is None else str(c.known_best)
            if c.note:
                best += "*"
            found = f">{L}" if r.size == EXCEEDS else str(r.size)
            out.append(f"{c.name:<10} {best:>5} {'yes' if c.proved_optimal else 'no':>3} "
                       f"{c.expected_soc:>4} {found:>6} {r.status:>8} {r.seconds:>9.4f}")
            if r.circuit is not None:
                out.append(f"    {r.circuit}")
            if c.note and r.size != EXCEEDS:
                out.append(f"    note: SBKC {best} ({c.note}); exact optimum here is {r.size}")
        return "\n".join(out)


def run_benchmarks(
    cases: Sequence[BenchmarkCase], cfg: SearchConfig, table: CanonicalTable
) -> BenchmarkReport:
    results = []
    for case in cases:
        t0 = time.perf_counter()
        try:
            c = synthesize(case.spec, cfg, table)
        except SizeExceedsError:
            results.append(BenchmarkResult(case, EXCEEDS, None, False, time.perf_counter() - t0))
            continue
        dt = time.perf_counter() - t0
        results.append(BenchmarkResult(case, c.size, c, c.evaluate() == case.spec, dt))
    return BenchmarkReport(cfg, results)


# -- hard permutation search --------------------------------------------------

@dataclass
class HardSearchResult:
    best_size: int
    witnesses: np.ndarray  # every function found at best_size
    evaluated: int
    seconds: float
    complete: bool  # False when the budget ran out first
    history: list[tuple[int, int]] = field(default_factory=list)  # (size, count) per round

    @property
    def example(self) -> int:
        return int(self.witnesses[0])


def _extensions(fs: np.ndarray) -> np.ndarray:
    """All functions one gate away from ``fs``, on either end."""
    n = len(fs)
    out = np.empty(64 * n, dtype=np.uint64)
    for i, g in enumerate(GATE_PERMS):
        compose_many(fs, g, out[2 * i * n:(2 * i + 1) * n])        # append g
        compose_left_many(g, fs, out[(2 * i + 1) * n:(2 * i + 2) * n])  # prepend g
    return np.unique(out)


def hard_search(
    table: CanonicalTable,
    cfg: SearchConfig,
    budget: float,
    seeds: Sequence[int] | np.ndarray | None = None,
    chunk: int = 4096,
    threads: int = 1,
) -> HardSearchResult:
    """Grow the largest-size functions found so far one gate at a time.

    Each round extends every function of the current maximal size by each
    gate at both ends and keeps the extensions whose size went up.  Stops
    when ``budget`` seconds run out, when no extension is larger, or when
    the maximum reaches L (nothing bigger can be certified).  ``seeds``
    defaults to the canonical reps of size ``cfg.k``.
    """
    t0 = time.perf_counter()
    if seeds is None:
        seeds = table.levels[cfg.k]
    seeds = np.unique(np.asarray(seeds, dtype=np.uint64))
    sizes, _ = size_of_many(seeds, cfg, table, threads=threads)
    if (sizes == EXCEEDS).all():
        raise ValueError("no seed has a size within L")
    best = int(sizes.max())
    frontier = seeds[sizes == best]
    evaluated = len(seeds)
    history = [(best, len(frontier))]
    complete = True
    while best < cfg.L:
        found = []
        for lo in range(0, len(frontier), chunk):
            if time.perf_counter() - t0 > budget:
                complete = False
                break
            ext = _extensions(frontier[lo:lo + chunk])
            s, _ = size_of_many(ext, cfg, table, threads=threads)
            evaluated += len(ext)
            found.append(ext[s == best + 1])
        grown = np.unique(np.concatenate(found)) if found else np.empty(0, np.uint64)
        if not len(grown):
            break
        best += 1
        frontier = grown
        history.append((best, len(frontier)))
        log.info("hard search: %d functions of size %d", len(frontier), best)
        if not complete:
            break
    return HardSearchResult(best, frontier, evaluated, time.perf_counter() - t0, complete, history)
