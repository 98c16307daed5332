"""Breadth-first generation of every canonical representative of size <= k."""

from __future__ import annotations

import logging
import time

import numpy as np
from numba import njit

from .canonical import _canon, _canon_full
from .gates import FIRST_FLAG, GATE_CONJ_BYTES, GATE_PERMS, NO_GATE
from .perm import EMPTY, IDENTITY, U64, _compose, _inverse
from .store import DEFAULT_LOAD, MAX_LOAD, CanonicalTable, _claim, capacity_for

log = logging.getLogger(__name__)

# Largest k whose table is known to fit comfortably in a few GB.
SAFE_K = 7


@njit(cache=True)
def _expand(frontier, start, keys, max_count, count, gate_perms, conj_bytes,
            out_reps, out_gates, out_n):
    """Extend ``frontier[start:]`` and the inverses by every gate.

    New canonical reps are claimed in ``keys`` and appended to the output
    buffers.  Stops early, before touching a rep, when either the key count
    or the output buffer could overflow; returns ``(next, out_n, count)``.
    """
    h = np.empty(32, dtype=np.uint64)
    c = np.empty(32, dtype=np.uint64)
    for idx in range(start, frontier.shape[0]):
        if count + 64 > max_count or out_n + 64 > out_reps.shape[0]:
            return idx, out_n, count
        r = frontier[idx]
        ri = _inverse(r)
        for side in range(2):
            f = r if side == 0 else ri
            if side == 1 and ri == r:
                break
            for gi in range(32):
                h[gi] = _compose(f, gate_perms[gi])
            for gi in range(32):
                c[gi] = _canon(h[gi])
            for gi in range(32):
                _, fresh = _claim(keys, c[gi])
                if fresh:
                    rep, step, inv = _canon_full(h[gi])
                    byte = conj_bytes[gi, step]
                    if inv:
                        byte |= FIRST_FLAG
                    out_reps[out_n] = rep
                    out_gates[out_n] = byte
                    out_n += 1
                    count += 1
    return frontier.shape[0], out_n, count


@njit(cache=True)
def _rehash(old, new):
    for i in range(old.shape[0]):
        if old[i] != U64(EMPTY):
            _claim(new, old[i])


def build(k: int, load: float = DEFAULT_LOAD, max_load: float = MAX_LOAD) -> CanonicalTable:
    """Canonical reps of all functions of size at most ``k``.

    Each non-identity rep carries one gate of a minimal circuit: the last
    gate, or the first when the new function was a conjugate of the rep's
    inverse.  Levels are sorted by rep word before they seed the next level,
    so the result is identical across runs.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if k > SAFE_K:
        log.warning("k=%d is above the tested tiers; memory grows ~10x per level", k)
    keys = np.full(capacity_for(1, load), EMPTY, dtype=np.uint64)
    _claim(keys, U64(IDENTITY))
    count = 1
    levels = [np.array([IDENTITY], dtype=np.uint64)]
    level_gates = [np.array([NO_GATE], dtype=np.uint8)]

    for size in range(1, k + 1):
        t0 = time.perf_counter()
        frontier = levels[-1]
        out_reps = np.empty(16 * len(frontier) + 64, dtype=np.uint64)
        out_gates = np.empty(len(out_reps), dtype=np.uint8)
        idx, out_n = 0, 0
        while idx < len(frontier):
            max_count = int(load * len(keys))
            idx, out_n, count = _expand(frontier, idx, keys, max_count, count, GATE_PERMS,
                                        GATE_CONJ_BYTES, out_reps, out_gates, out_n)
            if idx < len(frontier):
                if count + 64 > int(load * len(keys)):
                    bigger = np.full(2 * len(keys), EMPTY, dtype=np.uint64)
                    _rehash(keys, bigger)
                    keys = bigger
                if out_n + 64 > len(out_reps):
                    out_reps = np.concatenate([out_reps, np.empty_like(out_reps)])
                    out_gates = np.concatenate([out_gates, np.empty_like(out_gates)])
        order = np.argsort(out_reps[:out_n], kind="stable")
        levels.append(out_reps[:out_n][order])
        level_gates.append(out_gates[:out_n][order])
        del out_reps, out_gates, order
        log.info("size %d: %d reps (%.1fs)", size, out_n, time.perf_counter() - t0)

    del keys
    return CanonicalTable.from_levels(levels, level_gates, load=load, max_load=max_load)


def expanded_counts(t: CanonicalTable) -> list[int]:
    """Number of functions (not classes) of each size."""
    return [int(t.class_sizes(i).sum(dtype=np.int64)) for i in range(len(t.levels))]
