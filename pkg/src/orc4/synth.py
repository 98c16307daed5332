"""Minimal circuits by table lookup plus a meet-in-the-middle scan.

Functions of size at most ``k`` are read straight out of the canonical
table by peeling one witness gate at a time.  For larger functions ``f`` the
scan tries every ``g`` of size ``1, 2, ..., m`` (in that order) until
``compose(g, f)`` is a size-``k`` function; then ``f`` is ``g`` reversed
followed by that function, and no shorter circuit exists because every
smaller ``g`` was tried first.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .canonical import (
    WALK_PERMS,
    _canon,
    _dedupe,
    _members,
    canonical_full,
    invert_wires,
)
from .gates import FIRST_FLAG, Circuit, Gate, conjugate_gate
from .perm import EMPTY, IDENTITY, U64, _compose, _hash64, compose
from .store import CanonicalTable, _find

EXCEEDS = -1
_CHUNK = 64


class SizeExceedsError(Exception):
    """The function needs more than ``k + m`` gates."""

    def __init__(self, f: int, limit: int):
        super().__init__(f"size of {f:#018x} is greater than L={limit}")
        self.f = f
        self.limit = limit


class ExpandMode(enum.Enum):
    ON_THE_FLY = "on-the-fly"
    MATERIALIZED = "materialized"


@njit(inline="always")
def _probe_batch(f, gs, n, hbuf, home, keys, sizes, k):
    """Index of the first ``gs[j]`` whose ``compose(gs[j], f)`` has size k, else -1."""
    for j in range(n):
        hbuf[j] = _canon(_compose(gs[j], f))
    # independent loads of the home slots first, so the cache misses overlap
    mask = U64(keys.shape[0] - 1)
    for j in range(n):
        home[j] = keys[_hash64(hbuf[j]) & mask]
    for j in range(n):
        if home[j] == U64(EMPTY):
            continue  # an empty home slot proves absence
        s = _find(keys, hbuf[j])
        if s >= 0 and sizes[s] == k:
            return j
    return -1


@njit(cache=True, nogil=True)
def _scan_reps(f, reps, csizes, lo, hi, keys, sizes, k):
    """Scan the class members of ``reps[lo:hi]``; returns ``(g, probes)``."""
    buf = np.empty(48, dtype=np.uint64)
    hbuf = np.empty(48, dtype=np.uint64)
    home = np.empty(48, dtype=np.uint64)
    probes = 0
    for idx in range(lo, hi):
        _members(reps[idx], buf)
        n = 48
        if csizes[idx] < 48:
            n = _dedupe(buf, 48)
        j = _probe_batch(f, buf, n, hbuf, home, keys, sizes, k)
        if j >= 0:
            return buf[j], probes + j + 1
        probes += n
    return U64(EMPTY), probes


@njit(cache=True, nogil=True)
def _scan_list(f, funcs, lo, hi, keys, sizes, k):
    hbuf = np.empty(_CHUNK, dtype=np.uint64)
    home = np.empty(_CHUNK, dtype=np.uint64)
    probes = 0
    for start in range(lo, hi, _CHUNK):
        n = min(_CHUNK, hi - start)
        j = _probe_batch(f, funcs[start:start + n], n, hbuf, home, keys, sizes, k)
        if j >= 0:
            return funcs[start + j], probes + j + 1
        probes += n
    return U64(EMPTY), probes


@njit(cache=True, nogil=True)
def _size_many(fs, keys, sizes, k, m, items, csizes, offsets, materialized,
               out_size, out_probes):
    for i in range(fs.shape[0]):
        f = fs[i]
        s = _find(keys, _canon(f))
        if s >= 0 and sizes[s] <= k:
            out_size[i] = sizes[s]
            out_probes[i] = 0
            continue
        out_size[i] = -1
        probes = 0
        for level in range(1, m + 1):
            lo = offsets[level - 1]
            hi = offsets[level]
            if materialized:
                g, p = _scan_list(f, items, lo, hi, keys, sizes, k)
            else:
                g, p = _scan_reps(f, items, csizes, lo, hi, keys, sizes, k)
            probes += p
            if g != U64(EMPTY):
                out_size[i] = k + level
                break
        out_probes[i] = probes


@njit(cache=True)
def _materialize(reps, csizes, out):
    buf = np.empty(48, dtype=np.uint64)
    pos = 0
    for idx in range(reps.shape[0]):
        _members(reps[idx], buf)
        n = 48
        if csizes[idx] < 48:
            n = _dedupe(buf, 48)
        out[pos:pos + n] = buf[:n]
        pos += n
    return pos


@dataclass
class ScanLists:
    """All functions of sizes ``1..m``, level after level.

    ``ON_THE_FLY`` keeps only the canonical reps and regenerates each class
    during the scan; ``MATERIALIZED`` stores every function.  Both visit the
    same functions in the same order.
    """

    m: int
    mode: ExpandMode
    items: np.ndarray
    csizes: np.ndarray
    offsets: np.ndarray  # items[offsets[i-1]:offsets[i]] belong to size i

    def level(self, i: int) -> np.ndarray:
        """Every function of size ``i`` as an explicit array."""
        lo, hi = int(self.offsets[i - 1]), int(self.offsets[i])
        if self.mode is ExpandMode.MATERIALIZED:
            return self.items[lo:hi]
        total = int(self.csizes[lo:hi].sum(dtype=np.int64))
        out = np.empty(total, dtype=np.uint64)
        _materialize(self.items[lo:hi], self.csizes[lo:hi], out)
        return out

    def lengths(self) -> list[int]:
        if self.mode is ExpandMode.MATERIALIZED:
            return [int(x) for x in np.diff(self.offsets)]
        return [
            int(self.csizes[self.offsets[i - 1]:self.offsets[i]].sum(dtype=np.int64))
            for i in range(1, self.m + 1)
        ]


def scan_lists_from_table(
    table: CanonicalTable, m: int, mode: ExpandMode = ExpandMode.ON_THE_FLY
) -> ScanLists:
    if m > table.k:
        raise ValueError(f"scan depth m={m} needs a table with k >= {m}, have k={table.k}")
    levels = [table.levels[i] for i in range(1, m + 1)]
    csizes = [table.class_sizes(i) for i in range(1, m + 1)]
    reps = np.concatenate(levels) if levels else np.empty(0, dtype=np.uint64)
    cs = np.concatenate(csizes) if csizes else np.empty(0, dtype=np.uint8)
    if mode is ExpandMode.ON_THE_FLY:
        offsets = np.zeros(m + 1, dtype=np.int64)
        offsets[1:] = np.cumsum([len(a) for a in levels])
        return ScanLists(m, mode, reps, cs, offsets)
    counts = [int(c.sum(dtype=np.int64)) for c in csizes]
    offsets = np.zeros(m + 1, dtype=np.int64)
    offsets[1:] = np.cumsum(counts)
    funcs = np.empty(int(offsets[-1]), dtype=np.uint64)
    _materialize(reps, cs, funcs)
    return ScanLists(m, mode, funcs, np.empty(0, dtype=np.uint8), offsets)


@dataclass
class SearchConfig:
    """Table depth ``k`` and scan depth ``m``; optimal up to ``L = k + m``.

    ``k`` may be smaller than the table's own depth, in which case deeper
    entries are ignored.
    """

    k: int
    m: int
    expand_mode: ExpandMode = ExpandMode.ON_THE_FLY
    _lists: ScanLists | None = field(default=None, repr=False, compare=False)
    _lists_table: CanonicalTable | None = field(default=None, repr=False, compare=False)

    @property
    def L(self) -> int:
        return self.k + self.m

    def scan_lists(self, table: CanonicalTable) -> ScanLists:
        lists = self._lists
        if (lists is None or self._lists_table is not table or lists.m != self.m
                or lists.mode is not self.expand_mode):
            self._lists = scan_lists_from_table(table, self.m, self.expand_mode)
            self._lists_table = table
        return self._lists

    def check(self, table: CanonicalTable) -> None:
        if not 0 <= self.k <= table.k:
            raise ValueError(f"k={self.k} needs a table built to at least k, have k={table.k}")
        if not 0 <= self.m <= table.k:
            raise ValueError(f"m={self.m} needs a table built to at least m, have k={table.k}")

    @classmethod
    def for_table(cls, table: CanonicalTable, m: int | None = None, **kw) -> "SearchConfig":
        return cls(table.k, min(table.k, 6) if m is None else m, **kw)


def _small_circuit(f: int, table: CanonicalTable, k: int) -> Circuit:
    """Circuit for a function known to have size <= k, by peeling witness gates."""
    front: list[Gate] = []
    back: list[Gate] = []
    last_size = None
    while f != IDENTITY:
        rep, step, inv = canonical_full(f)
        slot = table.slot_of(int(rep))
        if slot < 0 or table.sizes[slot] > k:
            raise SizeExceedsError(f, k)
        size = int(table.sizes[slot])
        assert last_size is None or size == last_size - 1, "witness chain broken"
        last_size = size
        byte = int(table.gates[slot])
        gate = conjugate_gate(Gate.from_byte(byte), invert_wires(WALK_PERMS[step]))
        # an inverted witness swaps which end the stored gate sits on
        if bool(byte & FIRST_FLAG) != bool(inv):
            front.append(gate)
            f = compose(gate.perm, f)
        else:
            back.append(gate)
            f = compose(f, gate.perm)
    return Circuit(front + back[::-1])


def _decompose(f: int, cfg: SearchConfig, table: CanonicalTable) -> tuple[int, int, int]:
    """``(size, g, probes)`` with ``g`` the scan hit (or EMPTY)."""
    lists = cfg.scan_lists(table)
    probes = 0
    mat = lists.mode is ExpandMode.MATERIALIZED
    for level in range(1, cfg.m + 1):
        lo, hi = int(lists.offsets[level - 1]), int(lists.offsets[level])
        if mat:
            g, p = _scan_list(np.uint64(f), lists.items, lo, hi, table.keys, table.sizes, cfg.k)
        else:
            g, p = _scan_reps(np.uint64(f), lists.items, lists.csizes, lo, hi,
                              table.keys, table.sizes, cfg.k)
        probes += p
        if g != EMPTY:
            return cfg.k + level, int(g), probes
    return EXCEEDS, EMPTY, probes


def synthesize(f: int, cfg: SearchConfig, table: CanonicalTable) -> Circuit:
    """A minimal circuit for ``f``; raises :class:`SizeExceedsError` beyond L."""
    cfg.check(table)
    entry = table.lookup(int(canonical_full(f)[0]))
    if entry is not None and entry.size <= cfg.k:
        return _small_circuit(f, table, cfg.k)
    size, g, _ = _decompose(f, cfg, table)
    if size == EXCEEDS:
        raise SizeExceedsError(f, cfg.L)
    head = _small_circuit(g, table, cfg.k).reversed()
    tail = _small_circuit(compose(g, f), table, cfg.k)
    return head + tail


def size_of(f: int, cfg: SearchConfig, table: CanonicalTable) -> int:
    """Minimal gate count of ``f``, or ``EXCEEDS`` when it is above L."""
    sizes, _ = size_of_many(np.array([f], dtype=np.uint64), cfg, table)
    return int(sizes[0])


def size_of_many(
    fs: np.ndarray, cfg: SearchConfig, table: CanonicalTable, threads: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Sizes (``EXCEEDS`` above L) and scan probe counts for many functions.

    With ``threads > 1`` the inputs are split into contiguous shards; the
    results do not depend on the thread count.
    """
    cfg.check(table)
    lists = cfg.scan_lists(table)
    fs = np.ascontiguousarray(fs, dtype=np.uint64)
    out_size = np.empty(len(fs), dtype=np.int64)
    out_probes = np.empty(len(fs), dtype=np.int64)
    mat = lists.mode is ExpandMode.MATERIALIZED

    def run(lo, hi):
        _size_many(fs[lo:hi], table.keys, table.sizes, cfg.k, cfg.m, lists.items, lists.csizes,
                   lists.offsets, mat, out_size[lo:hi], out_probes[lo:hi])

    if threads <= 1 or len(fs) < 2:
        run(0, len(fs))
    else:
        bounds = np.linspace(0, len(fs), threads + 1).astype(int)
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(run, bounds[:-1], bounds[1:]))
    return out_size, out_probes
