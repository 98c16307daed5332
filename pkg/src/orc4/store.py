"""Linear-probing table of canonical representatives and its file format.

Slots live in three parallel arrays: ``keys`` (rep words, all-ones when
empty), ``gates`` (witness gate byte) and ``sizes``.  A key's home slot is
``hash64(key) & (capacity - 1)``; collisions step forward by one.

File layout (``ORC1``), all integers little-endian::

    b"ORC1"
    u8 version, u8 n, u8 k, u8 gate_set, u8 capacity_log2, 3 x u8 zero
    (k + 1) x u64       level counts
    per level, sorted by rep word: u64 rep, u8 gate byte
    u64                 checksum (BLAKE2b-64 of the bytes between magic and checksum)
"""

from __future__ import annotations

import enum
import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from numba import njit

from .canonical import class_sizes_many
from .gates import FIRST_FLAG, NO_GATE, Gate
from .perm import EMPTY, IDENTITY, U64, _hash64

MAGIC = b"ORC1"
VERSION = 1
GATE_SET_ID = 0  # NOT, CNOT, TOF, TOF4
DEFAULT_LOAD = 0.6
MAX_LOAD = 0.9

RECORD = np.dtype([("rep", "<u8"), ("gate", "u1")])
_HEADER = struct.Struct("<4sBBBBB3x")


class TableError(Exception):
    pass


class CapacityError(TableError):
    pass


class DuplicateKeyError(TableError):
    pass


class TableFormatError(TableError):
    pass


class ChecksumError(TableFormatError):
    pass


class GateSide(enum.Enum):
    LAST = 0
    FIRST = 1


@dataclass(frozen=True)
class CanonicalEntry:
    rep: int
    size: int
    gate: Gate | None = None
    side: GateSide | None = None

    def to_byte(self) -> int:
        if self.gate is None:
            return NO_GATE
        return self.gate.to_byte(first=self.side is GateSide.FIRST)

    @classmethod
    def from_byte(cls, rep: int, size: int, byte: int) -> "CanonicalEntry":
        if byte == NO_GATE:
            return cls(rep, size)
        side = GateSide.FIRST if byte & FIRST_FLAG else GateSide.LAST
        return cls(rep, size, Gate.from_byte(byte), side)


@dataclass(frozen=True)
class TableStats:
    level_counts: tuple[int, ...]
    capacity: int
    load: float
    mean_chain: float
    max_chain: int

    def format(self) -> str:
        lines = [f"{'size':>4}  {'reduced':>12}"]
        lines += [f"{i:>4}  {c:>12,}" for i, c in enumerate(self.level_counts)]
        lines.append(f"capacity {self.capacity:,}  load {self.load:.3f}")
        lines.append(f"chain mean {self.mean_chain:.3f}  max {self.max_chain}")
        return "\n".join(lines)


@njit(inline="always")
def _find(keys, key):
    mask = U64(keys.shape[0] - 1)
    i = _hash64(key) & mask
    while True:
        k = keys[i]
        if k == key:
            return np.int64(i)
        if k == U64(EMPTY):
            return np.int64(-1)
        i = (i + U64(1)) & mask


@njit(inline="always")
def _claim(keys, key):
    """Slot for ``key``: ``(slot, True)`` if newly claimed, else ``(slot, False)``."""
    mask = U64(keys.shape[0] - 1)
    i = _hash64(key) & mask
    while True:
        k = keys[i]
        if k == U64(EMPTY):
            keys[i] = key
            return np.int64(i), True
        if k == key:
            return np.int64(i), False
        i = (i + U64(1)) & mask


@njit(cache=True)
def _bulk_insert(keys, gates, sizes, reps, gbytes, size):
    """Insert a whole level; returns the index of the first duplicate or -1."""
    for j in range(reps.shape[0]):
        slot, fresh = _claim(keys, reps[j])
        if not fresh:
            return j
        gates[slot] = gbytes[j]
        sizes[slot] = size
    return -1


@njit(cache=True)
def _lookup_many(keys, words, out):
    for j in range(words.shape[0]):
        out[j] = _find(keys, words[j])


@njit(cache=True)
def _chain_stats(keys):
    mask = U64(keys.shape[0] - 1)
    total = 0
    longest = 0
    n = 0
    for i in range(keys.shape[0]):
        k = keys[i]
        if k != U64(EMPTY):
            home = _hash64(k) & mask
            length = np.int64((U64(i) - home) & mask) + 1
            total += length
            n += 1
            if length > longest:
                longest = length
    return total, longest, n


def capacity_for(count: int, load: float = DEFAULT_LOAD) -> int:
    """Smallest power of two (at least 16) holding ``count`` keys at ``load``."""
    cap = 16
    while count > load * cap:
        cap <<= 1
    return cap


class CanonicalTable:
    """Canonical representatives by size with their witness gates.

    ``levels[i]`` holds the reps of size ``i`` and ``level_gates[i]`` the
    matching gate bytes.  Levels built by :func:`orc4.bfs.build` or read by
    :func:`load` are sorted by rep word.
    """

    def __init__(self, capacity: int = 16, max_load: float = MAX_LOAD):
        if capacity < 1 or capacity & (capacity - 1):
            raise ValueError(f"capacity must be a power of two, got {capacity}")
        self.capacity = capacity
        self.max_load = max_load
        self.keys = np.full(capacity, EMPTY, dtype=np.uint64)
        self.gates = np.zeros(capacity, dtype=np.uint8)
        self.sizes = np.zeros(capacity, dtype=np.uint8)
        self.levels: list[np.ndarray] = []
        self.level_gates: list[np.ndarray] = []
        self.count = 0
        self._class_sizes: dict[int, np.ndarray] = {}

    @classmethod
    def from_levels(
        cls,
        levels: Sequence[np.ndarray],
        level_gates: Sequence[np.ndarray],
        capacity: int | None = None,
        load: float = DEFAULT_LOAD,
        max_load: float = MAX_LOAD,
    ) -> "CanonicalTable":
        total = sum(len(a) for a in levels)
        if capacity is None:
            capacity = capacity_for(total, load)
        if total > max_load * capacity:
            raise CapacityError(f"{total} keys exceed load {max_load} of {capacity} slots")
        t = cls(capacity, max_load)
        for size, (reps, gb) in enumerate(zip(levels, level_gates)):
            reps = np.ascontiguousarray(reps, dtype=np.uint64)
            gb = np.ascontiguousarray(gb, dtype=np.uint8)
            dup = _bulk_insert(t.keys, t.gates, t.sizes, reps, gb, size)
            if dup >= 0:
                raise DuplicateKeyError(f"rep {int(reps[dup]):#018x} inserted twice")
            t.levels.append(reps)
            t.level_gates.append(gb)
            t.count += len(reps)
        return t

    @property
    def k(self) -> int:
        return len(self.levels) - 1

    @property
    def load(self) -> float:
        return self.count / self.capacity

    def level_counts(self) -> list[int]:
        return [len(a) for a in self.levels]

    def insert(self, e: CanonicalEntry) -> None:
        """Add one entry.  Slow path; bulk builds go through :meth:`from_levels`."""
        if self.count + 1 > self.max_load * self.capacity:
            raise CapacityError(
                f"insert would push load above {self.max_load} ({self.capacity} slots)"
            )
        if e.size < 0 or e.size > 255:
            raise ValueError(f"size {e.size} out of range")
        if (e.gate is None) != (e.size == 0):
            raise ValueError("exactly the size-0 entry has no witness gate")
        slot, fresh = _claim(self.keys, np.uint64(e.rep))
        if not fresh:
            raise DuplicateKeyError(f"rep {e.rep:#018x} already present")
        self.gates[slot] = e.to_byte()
        self.sizes[slot] = e.size
        self.count += 1
        while len(self.levels) <= e.size:
            self.levels.append(np.empty(0, dtype=np.uint64))
            self.level_gates.append(np.empty(0, dtype=np.uint8))
        self.levels[e.size] = np.append(self.levels[e.size], np.uint64(e.rep))
        self.level_gates[e.size] = np.append(self.level_gates[e.size], np.uint8(e.to_byte()))
        self._class_sizes.pop(e.size, None)

    def slot_of(self, rep: int) -> int:
        out = np.empty(1, dtype=np.int64)
        _lookup_many(self.keys, np.array([rep], dtype=np.uint64), out)
        return int(out[0])

    def lookup(self, rep: int) -> CanonicalEntry | None:
        slot = self.slot_of(rep)
        if slot < 0:
            return None
        return CanonicalEntry.from_byte(rep, int(self.sizes[slot]), int(self.gates[slot]))

    def __contains__(self, rep: int) -> bool:
        return self.slot_of(rep) >= 0

    def lookup_many(self, words: np.ndarray) -> np.ndarray:
        """Slot index per word, -1 where absent."""
        out = np.empty(len(words), dtype=np.int64)
        _lookup_many(self.keys, np.ascontiguousarray(words, dtype=np.uint64), out)
        return out

    def class_sizes(self, size: int) -> np.ndarray:
        """Equivalence class size of every rep in ``levels[size]``."""
        if size not in self._class_sizes:
            out = np.empty(len(self.levels[size]), dtype=np.uint8)
            class_sizes_many(self.levels[size], out)
            self._class_sizes[size] = out
        return self._class_sizes[size]

    def stats(self) -> TableStats:
        total, longest, n = _chain_stats(self.keys)
        return TableStats(
            level_counts=tuple(self.level_counts()),
            capacity=self.capacity,
            load=self.load,
            mean_chain=total / n if n else 0.0,
            max_chain=int(longest),
        )

    def entries(self):
        for size, (reps, gb) in enumerate(zip(self.levels, self.level_gates)):
            for rep, byte in zip(reps.tolist(), gb.tolist()):
                yield CanonicalEntry.from_byte(rep, size, byte)


def _checksum(payload: bytes | memoryview) -> bytes:
    return hashlib.blake2b(payload, digest_size=8).digest()


def dumps(t: CanonicalTable) -> bytes:
    if t.k < 0 or int(t.levels[0][0]) != IDENTITY:
        raise TableError("table has no identity level; build it first")
    log2 = t.capacity.bit_length() - 1
    parts = [_HEADER.pack(MAGIC, VERSION, 4, t.k, GATE_SET_ID, log2)]
    parts.append(np.array(t.level_counts(), dtype="<u8").tobytes())
    for reps, gb in zip(t.levels, t.level_gates):
        order = np.argsort(reps, kind="stable")
        rec = np.empty(len(reps), dtype=RECORD)
        rec["rep"] = reps[order]
        rec["gate"] = gb[order]
        parts.append(rec.tobytes())
    body = b"".join(parts)
    return body + _checksum(memoryview(body)[4:])


def save(t: CanonicalTable, path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(dumps(t))
    return path


def loads(data: bytes) -> CanonicalTable:
    if len(data) < 4 or data[:4] != MAGIC:
        raise TableFormatError("not an ORC1 table (bad magic)")
    # nothing after the magic is trusted until the digest matches
    if len(data) < _HEADER.size + 16 or _checksum(memoryview(data)[4:-8]) != data[-8:]:
        raise ChecksumError("checksum mismatch (corrupted or truncated file)")
    _, version, n, k, gate_set, log2 = _HEADER.unpack_from(data)
    if version != VERSION:
        raise TableFormatError(f"unsupported version {version}")
    if n != 4 or gate_set != GATE_SET_ID:
        raise TableFormatError(f"unsupported n={n} / gate set {gate_set}")
    off = _HEADER.size
    if len(data) < off + 8 * (k + 1) + 8:
        raise TableFormatError("header promises more levels than the file holds")
    counts = np.frombuffer(data, dtype="<u8", count=k + 1, offset=off).astype(np.int64)
    off += 8 * (k + 1)
    expected = off + RECORD.itemsize * int(counts.sum()) + 8
    if len(data) != expected:
        raise TableFormatError(f"file length {len(data)} != expected {expected}")
    levels, gates = [], []
    for c in counts:
        rec = np.frombuffer(data, dtype=RECORD, count=int(c), offset=off)
        levels.append(rec["rep"].astype(np.uint64))
        gates.append(rec["gate"].copy())
        off += RECORD.itemsize * int(c)
    return CanonicalTable.from_levels(levels, gates, capacity=1 << log2)


def load(path: str | Path) -> CanonicalTable:
    return loads(Path(path).read_bytes())
