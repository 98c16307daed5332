"""Slow, independent reference implementations for cross-checking.

Everything here works on explicit lists/arrays of 16 images and shares no
arithmetic with the packed-word code, so agreement between the two is
meaningful.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

N_BITS = 4
N_POINTS = 16


@dataclass(frozen=True)
class ArrayPermutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(N_POINTS)):
            raise ValueError(f"not a permutation of 0..15: {self.images}")

    def then(self, other: "ArrayPermutation") -> "ArrayPermutation":
        """Apply ``self`` first, then ``other``."""
        return ArrayPermutation(tuple(other.images[y] for y in self.images))

    def inverse(self) -> "ArrayPermutation":
        inv = [0] * N_POINTS
        for x, y in enumerate(self.images):
            inv[y] = x
        return ArrayPermutation(tuple(inv))

    @classmethod
    def identity(cls) -> "ArrayPermutation":
        return cls(tuple(range(N_POINTS)))


def gate_images(target: int, controls: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for x in range(N_POINTS):
        fire = all((x >> c) & 1 for c in controls)
        out.append(x ^ (1 << target) if fire else x)
    return tuple(out)


def all_gates() -> list[tuple[int, ...]]:
    """Image tuples of the 32 NOT/CNOT/TOF/TOF4 gates."""
    gates = []
    for target in range(N_BITS):
        others = [w for w in range(N_BITS) if w != target]
        for r in range(len(others) + 1):
            for controls in itertools.combinations(others, r):
                gates.append(gate_images(target, controls))
    assert len(set(gates)) == 32
    return gates


def naive_bfs(max_size: int) -> dict[tuple[int, ...], int]:
    """Optimal gate count of every function with at most ``max_size`` gates.

    Plain BFS over explicit image arrays with no symmetry reduction.
    """
    if not 0 <= max_size <= 4:
        raise ValueError("naive_bfs stores every function explicitly; use max_size <= 4")
    gates = np.array(all_gates(), dtype=np.uint8)
    ident = tuple(range(N_POINTS))
    sizes = {ident: 0}
    frontier = np.array([ident], dtype=np.uint8)
    for size in range(1, max_size + 1):
        # row i of gates[:, frontier] applies the gate after each frontier function
        cand = np.take_along_axis(
            np.broadcast_to(gates[:, None, :], (32, len(frontier), N_POINTS)),
            np.broadcast_to(frontier[None].astype(np.int64), (32, len(frontier), N_POINTS)),
            axis=2,
        ).reshape(-1, N_POINTS)
        cand = np.unique(cand, axis=0)
        fresh = []
        for row in cand:
            key = tuple(row.tolist())
            if key not in sizes:
                sizes[key] = size
                fresh.append(row)
        frontier = np.array(fresh, dtype=np.uint8).reshape(-1, N_POINTS)
    return sizes


def exhaustive_two_gate() -> set[tuple[int, ...]]:
    """Functions of every 1- and 2-gate circuit."""
    gates = [ArrayPermutation(g) for g in all_gates()]
    out = {g.images for g in gates}
    for g, h in itertools.product(gates, repeat=2):
        out.add(g.then(h).images)
    return out


def images_to_word(images) -> int:
    """Pack images as nibbles (low nibble first) for comparing with packed words."""
    return sum(int(y) << (4 * x) for x, y in enumerate(images))


def count_by_size(sizes: dict) -> list[int]:
    top = max(sizes.values())
    counts = [0] * (top + 1)
    for s in sizes.values():
        counts[s] += 1
    return counts
