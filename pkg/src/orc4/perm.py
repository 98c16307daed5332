"""Bit-packed permutations of {0..15}.

A 4-bit reversible function is stored in one unsigned 64-bit word: nibble
``i`` (bits ``4i..4i+3``) holds ``f(i)``.  Words are plain Python ints at the
API boundary and ``np.uint64`` inside jitted kernels.

Wire ``a`` is bit 0 of a value, ``b`` bit 1, ``c`` bit 2, ``d`` bit 3.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

import numpy as np
from numba import njit

U64 = np.uint64
MASK64 = (1 << 64) - 1
IDENTITY = 0xFEDCBA9876543210
# All-ones repeats nibble 15, so it is never a permutation.
EMPTY = MASK64

TRANSPOSITIONS = {"01": 0, "12": 1, "23": 2}


# Kernels below are inlined into the batch loops so LLVM can vectorize them.


@njit(inline="always")
def _compose(p, q):
    r = U64(0)
    for i in range(16):
        r |= ((q >> ((p & U64(15)) << U64(2))) & U64(15)) << U64(4 * i)
        p >>= U64(4)
    return r


@njit(inline="always")
def _inverse(p):
    q = U64(0)
    for i in range(16):
        q |= U64(i) << ((p & U64(15)) << U64(2))
        p >>= U64(4)
    return q


@njit(inline="always")
def _conj01(p):
    p = (
        (p & U64(0xF00FF00FF00FF00F))
        | ((p & U64(0x00F000F000F000F0)) << U64(4))
        | ((p & U64(0x0F000F000F000F00)) >> U64(4))
    )
    return (
        (p & U64(0xCCCCCCCCCCCCCCCC))
        | ((p & U64(0x1111111111111111)) << U64(1))
        | ((p & U64(0x2222222222222222)) >> U64(1))
    )


@njit(inline="always")
def _conj12(p):
    p = (
        (p & U64(0xFF0000FFFF0000FF))
        | ((p & U64(0x0000FF000000FF00)) << U64(8))
        | ((p & U64(0x00FF000000FF0000)) >> U64(8))
    )
    return (
        (p & U64(0x9999999999999999))
        | ((p & U64(0x2222222222222222)) << U64(1))
        | ((p & U64(0x4444444444444444)) >> U64(1))
    )


@njit(inline="always")
def _conj23(p):
    p = (
        (p & U64(0xFFFF00000000FFFF))
        | ((p & U64(0x00000000FFFF0000)) << U64(16))
        | ((p & U64(0x0000FFFF00000000)) >> U64(16))
    )
    return (
        (p & U64(0x3333333333333333))
        | ((p & U64(0x4444444444444444)) << U64(1))
        | ((p & U64(0x8888888888888888)) >> U64(1))
    )


@njit(inline="always")
def _conj(p, t):
    if t == 0:
        return _conj01(p)
    if t == 1:
        return _conj12(p)
    return _conj23(p)


@njit(inline="always")
def _hash64(key):
    key = (~key) + (key << U64(21))
    key = key ^ (key >> U64(24))
    key = (key + (key << U64(3))) + (key << U64(8))
    key = key ^ (key >> U64(14))
    key = (key + (key << U64(2))) + (key << U64(4))
    key = key ^ (key >> U64(28))
    key = key + (key << U64(31))
    return key


@njit("uint64(uint64, uint64)", cache=True)
def compose(p, q):
    """Return ``r`` with ``r(x) = q(p(x))``: ``p`` is applied first."""
    return _compose(p, q)


@njit("uint64(uint64)", cache=True)
def inverse(p):
    return _inverse(p)


@njit("uint64(uint64, int64)", cache=True)
def conjugate_step(p, t):
    """Conjugate ``p`` by the swap of wires ``t`` and ``t + 1``."""
    return _conj(p, t)


@njit("uint64(uint64)", cache=True)
def hash64(key):
    """Thomas Wang's 64-bit mix; every right shift is logical."""
    return _hash64(key)


@njit("void(uint64[:], uint64, uint64[:])", cache=True)
def compose_many(ps, q, out):
    """``out[i] = compose(ps[i], q)``."""
    for i in range(ps.shape[0]):
        out[i] = _compose(ps[i], q)


@njit("void(uint64, uint64[:], uint64[:])", cache=True)
def compose_left_many(p, qs, out):
    """``out[i] = compose(p, qs[i])``."""
    for i in range(qs.shape[0]):
        out[i] = _compose(p, qs[i])


@njit("void(uint64[:], uint64[:])", cache=True)
def inverse_many(ps, out):
    for i in range(ps.shape[0]):
        out[i] = _inverse(ps[i])


def is_permutation(p: int) -> bool:
    if not 0 <= p <= MASK64:
        return False
    return sorted(to_images(p)) == list(range(16))


def conjugate_adjacent(p: int, t: str | int) -> int:
    """Conjugate by the wire swap ``"01"``, ``"12"`` or ``"23"`` (or 0, 1, 2)."""
    if isinstance(t, str):
        try:
            t = TRANSPOSITIONS[t]
        except KeyError:
            raise ValueError(f"unknown transposition {t!r}") from None
    if t not in (0, 1, 2):
        raise ValueError(f"transposition index out of range: {t}")
    return conjugate_step(p, t)


def total_order_less(p: int, q: int) -> bool:
    """Unsigned comparison of the raw words."""
    return p < q


def apply(p: int, x: int) -> int:
    if not 0 <= x < 16:
        raise ValueError(f"input {x} outside 0..15")
    return (p >> (4 * x)) & 15


def from_images(images: Sequence[int]) -> int:
    """Pack ``[f(0), ..., f(15)]`` into a word."""
    images = [int(v) for v in images]
    if len(images) != 16 or sorted(images) != list(range(16)):
        raise ValueError(f"not a permutation of 0..15: {images}")
    word = 0
    for i, v in enumerate(images):
        word |= v << (4 * i)
    return word


def to_images(p: int) -> list[int]:
    p = int(p)
    return [(p >> (4 * i)) & 15 for i in range(16)]


def parse_perm(text: str) -> int:
    """Parse ``"p0,...,p15"``, optionally wrapped in brackets."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = [s for s in re.split(r"[,\s]+", body) if s]
    try:
        images = [int(s) for s in parts]
    except ValueError:
        raise ValueError(f"malformed permutation: {text!r}") from None
    return from_images(images)


def format_perm(p: int, brackets: bool = False) -> str:
    body = ",".join(str(v) for v in to_images(p))
    return f"[{body}]" if brackets else body


def compose_all(perms: Iterable[int]) -> int:
    """Left fold of :func:`compose`, leftmost applied first."""
    r = IDENTITY
    for p in perms:
        r = compose(r, p)
    return r
