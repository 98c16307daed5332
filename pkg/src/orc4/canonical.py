"""Equivalence classes under wire relabeling and inversion.

Two functions are equivalent when one is obtained from the other by a
simultaneous relabeling of input and output wires, possibly followed by
inversion.  Equivalent functions need the same number of gates, so only the
class minimum (the canonical representative) has to be stored.

The 24 relabelings are visited by a fixed walk of 23 adjacent wire swaps
(plain changes).  The walk has period 8, ``2 1 0 2 0 1 2 0``, which the
straight-line kernel below spells out so that batch loops vectorize.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .perm import (
    _conj,
    _conj01,
    _conj12,
    _conj23,
    _inverse,
    inverse,
    to_images,
)

WirePerm = tuple[int, int, int, int]


def _plain_changes(n: int) -> list[int]:
    """Adjacent-swap positions of the Steinhaus-Johnson-Trotter sequence."""
    items = list(range(n))
    dirs = [-1] * n
    swaps = []
    while True:
        mobile = -1
        for i, v in enumerate(items):
            j = i + dirs[v]
            if 0 <= j < n and items[j] < v and (mobile < 0 or v > items[mobile]):
                mobile = i
        if mobile < 0:
            return swaps
        v = items[mobile]
        j = mobile + dirs[v]
        items[mobile], items[j] = items[j], items[mobile]
        swaps.append(min(mobile, j))
        for w in range(v + 1, n):
            dirs[w] = -dirs[w]


WALK = np.array(_plain_changes(4), dtype=np.int64)
assert list(WALK) == [2, 1, 0, 2, 0, 1, 2, 0] * 2 + [2, 1, 0, 2, 0, 1, 2]


def _swap(t: int) -> WirePerm:
    w = [0, 1, 2, 3]
    w[t], w[t + 1] = w[t + 1], w[t]
    return tuple(w)


def compose_wires(first: WirePerm, second: WirePerm) -> WirePerm:
    """Wire map sending ``w`` to ``second[first[w]]``."""
    return tuple(second[first[w]] for w in range(4))


def invert_wires(sigma: WirePerm) -> WirePerm:
    inv = [0] * 4
    for w, s in enumerate(sigma):
        inv[s] = w
    return tuple(inv)


def _walk_perms() -> list[WirePerm]:
    perms = [(0, 1, 2, 3)]
    for t in WALK:
        perms.append(compose_wires(perms[-1], _swap(int(t))))
    return perms


# WALK_PERMS[j] is the relabeling reached after the first j swaps.
WALK_PERMS: list[WirePerm] = _walk_perms()
assert len(set(WALK_PERMS)) == 24
WALK_INDEX = {s: j for j, s in enumerate(WALK_PERMS)}


def relabel_value(x: int, sigma: WirePerm) -> int:
    """Move bit ``w`` of ``x`` to bit ``sigma[w]``."""
    y = 0
    for w in range(4):
        if x >> w & 1:
            y |= 1 << sigma[w]
    return y


def conjugate(p: int, sigma: WirePerm) -> int:
    """Relabel the wires of ``p``: the result maps ``R(x)`` to ``R(p(x))``."""
    images = to_images(p)
    word = 0
    for x in range(16):
        word |= relabel_value(images[x], sigma) << (4 * relabel_value(x, sigma))
    return word


@njit(inline="always")
def _lo(best, f, g):
    m = f if f < g else g
    return m if m < best else best


@njit(inline="always")
def _canon(f):
    g = _inverse(f)
    best = f if f < g else g
    f = _conj23(f); g = _conj23(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj12(f); g = _conj12(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj01(f); g = _conj01(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj23(f); g = _conj23(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj01(f); g = _conj01(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj12(f); g = _conj12(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj23(f); g = _conj23(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj01(f); g = _conj01(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj23(f); g = _conj23(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj12(f); g = _conj12(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj01(f); g = _conj01(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj23(f); g = _conj23(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj01(f); g = _conj01(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj12(f); g = _conj12(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj23(f); g = _conj23(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj01(f); g = _conj01(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj23(f); g = _conj23(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj12(f); g = _conj12(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj01(f); g = _conj01(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj23(f); g = _conj23(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj01(f); g = _conj01(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj12(f); g = _conj12(g); best = _lo(best, f, g)  # noqa: E702
    f = _conj23(f); g = _conj23(g); best = _lo(best, f, g)  # noqa: E702
    return best


@njit(inline="always")
def _canon_full(f):
    g = _inverse(f)
    best = f
    best_step = 0
    best_inv = False
    if g < best:
        best = g
        best_inv = True
    for j in range(23):
        t = WALK[j]
        f = _conj(f, t)
        g = _conj(g, t)
        # prefer the non-inverted witness on ties
        if f < best or (f == best and best_inv):
            best = f
            best_step = j + 1
            best_inv = False
        if g < best:
            best = g
            best_step = j + 1
            best_inv = True
    return best, best_step, best_inv


@njit(inline="always")
def _members(f, buf):
    """Write the 48 walk conjugates of ``f`` and ``f^-1`` (interleaved)."""
    g = _inverse(f)
    buf[0] = f
    buf[1] = g
    for j in range(23):
        t = WALK[j]
        f = _conj(f, t)
        g = _conj(g, t)
        buf[2 * j + 2] = f
        buf[2 * j + 3] = g


@njit(inline="always")
def _dedupe(buf, n):
    """Compact ``buf[:n]`` to first occurrences, keeping order."""
    m = 0
    for i in range(n):
        x = buf[i]
        dup = False
        for j in range(m):
            if buf[j] == x:
                dup = True
                break
        if not dup:
            buf[m] = x
            m += 1
    return m


@njit("Tuple((uint64, int64, boolean))(uint64)", cache=True)
def canonical_full(f):
    """Class minimum plus the walk step and inversion flag that reach it."""
    return _canon_full(f)


@njit("uint64(uint64)", cache=True)
def canonical_word(f):
    return _canon(f)


@njit("void(uint64[:], uint64[:])", cache=True)
def canonical_many(fs, out):
    for i in range(fs.shape[0]):
        out[i] = _canon(fs[i])


@njit("int64(uint64, uint64[:])", cache=True)
def class_members(f, out):
    """Distinct class members of ``f`` in walk order; returns the count.

    ``out`` needs room for 48 words.
    """
    _members(f, out)
    return _dedupe(out, 48)


@njit("void(uint64[:], uint8[:])", cache=True)
def class_sizes_many(fs, out):
    buf = np.empty(48, dtype=np.uint64)
    for i in range(fs.shape[0]):
        _members(fs[i], buf)
        buf.sort()
        n = 1
        for j in range(1, 48):
            if buf[j] != buf[j - 1]:
                n += 1
        out[i] = n


@dataclass(frozen=True)
class ClassWitness:
    """How to rebuild a function from its canonical representative.

    ``f == conjugate(rep, sigma)``, or ``conjugate(inverse(rep), sigma)``
    when ``inverted``.
    """

    sigma: WirePerm = (0, 1, 2, 3)
    inverted: bool = False

    def apply(self, rep: int) -> int:
        base = inverse(rep) if self.inverted else rep
        return conjugate(base, self.sigma)


def witness_from_step(step: int, inverted: bool) -> ClassWitness:
    return ClassWitness(invert_wires(WALK_PERMS[step]), bool(inverted))


def canonical_rep(f: int) -> tuple[int, ClassWitness]:
    rep, step, inv = canonical_full(f)
    return int(rep), witness_from_step(int(step), bool(inv))


def equivalence_class(f: int) -> set[int]:
    out = np.empty(48, dtype=np.uint64)
    n = class_members(f, out)
    return {int(x) for x in out[:n]}


def is_canonical(f: int) -> bool:
    return int(canonical_word(f)) == f
