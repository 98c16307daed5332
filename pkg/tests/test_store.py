import numpy as np
import pytest
from conftest import random_words

from orc4.bfs import build
from orc4.canonical import canonical_many
from orc4.gates import Gate
from orc4.perm import IDENTITY
from orc4.store import (
    MAGIC,
    CanonicalEntry,
    CanonicalTable,
    CapacityError,
    ChecksumError,
    DuplicateKeyError,
    GateSide,
    TableFormatError,
    capacity_for,
    dumps,
    load,
    loads,
    save,
)


def test_insert_and_lookup_identity():
    t = CanonicalTable(16)
    e = CanonicalEntry(IDENTITY, 0)
    t.insert(e)
    assert t.lookup(IDENTITY) == e
    assert IDENTITY in t
    assert t.level_counts() == [1]


def test_insert_size_one_reps(table2):
    t = CanonicalTable(64)
    t.insert(CanonicalEntry(IDENTITY, 0))
    for rep, byte in zip(table2.levels[1], table2.level_gates[1]):
        t.insert(CanonicalEntry.from_byte(int(rep), 1, int(byte)))
    assert t.level_counts() == [1, 4]
    for rep in table2.levels[1]:
        assert t.lookup(int(rep)) == table2.lookup(int(rep))


def test_duplicate_and_capacity_errors():
    t = CanonicalTable(16, max_load=0.9)
    t.insert(CanonicalEntry(IDENTITY, 0))
    with pytest.raises(DuplicateKeyError):
        t.insert(CanonicalEntry(IDENTITY, 0))
    for i, w in enumerate(random_words(13, 1)):
        t.insert(CanonicalEntry(int(w), 1, Gate(0), GateSide.LAST))
    assert t.count == 14
    with pytest.raises(CapacityError):
        t.insert(CanonicalEntry(int(random_words(1, 2)[0]), 1, Gate(0), GateSide.LAST))


def test_entry_validation():
    t = CanonicalTable(16)
    with pytest.raises(ValueError):
        t.insert(CanonicalEntry(IDENTITY, 1))
    with pytest.raises(ValueError):
        t.insert(CanonicalEntry(IDENTITY, 0, Gate(0), GateSide.LAST))


def test_entry_byte_encoding():
    for side in GateSide:
        e = CanonicalEntry(123, 3, Gate(2, 0b1001), side)
        assert CanonicalEntry.from_byte(123, 3, e.to_byte()) == e
    assert CanonicalEntry(IDENTITY, 0).to_byte() == 0xFF


def test_absent_lookup(table4):
    for w in random_words(200, 3):
        assert table4.lookup(int(w)) is None  # random functions are far above size 4


def test_capacity_for():
    assert capacity_for(0) == 16
    assert capacity_for(1_591_670, 0.6) == 1 << 22
    for n in (1, 100, 12345):
        c = capacity_for(n, 0.6)
        assert n <= 0.6 * c and (c == 16 or n > 0.3 * c)


def test_stats(table4):
    st = table4.stats()
    assert st.level_counts == (1, 4, 33, 425, 6538)
    assert 1.0 <= st.mean_chain < st.max_chain < st.capacity
    assert 0 < st.load <= 0.6
    assert "6,538" in st.format()


def test_stored_keys_are_canonical_and_levels_partition(table4):
    reps = np.concatenate(table4.levels)
    again = np.empty_like(reps)
    canonical_many(reps, again)
    assert np.array_equal(reps, again)
    assert len(np.unique(reps)) == len(reps) == table4.count
    slots = table4.lookup_many(reps)
    sizes = np.repeat(np.arange(5), table4.level_counts())
    assert np.array_equal(table4.sizes[slots], sizes)


def test_round_trip_k3(tmp_path):
    t = build(3)
    path = save(t, tmp_path / "t3.orc")
    u = load(path)
    assert u.level_counts() == [1, 4, 33, 425]
    assert u.stats() == t.stats()
    assert list(u.entries()) == list(t.entries())
    assert np.array_equal(u.keys, t.keys)
    assert dumps(u) == path.read_bytes()


def test_file_size_k6(table6):
    data = dumps(table6)
    assert len(data) == 12 + 8 * 7 + 9 * 1_591_670 + 8
    assert data[:4] == MAGIC


@pytest.fixture(scope="module")
def k2_bytes(table2):
    return dumps(table2)


def test_truncated_file_is_checksum_error(k2_bytes):
    for cut in (1, 9, len(k2_bytes) // 2, len(k2_bytes) - 20):
        with pytest.raises(ChecksumError):
            loads(k2_bytes[:-cut])


def test_flipped_bits_are_checksum_errors(k2_bytes):
    for pos in (4, 5, 6, 20, 100, len(k2_bytes) - 9, len(k2_bytes) - 1):
        bad = bytearray(k2_bytes)
        bad[pos] ^= 0x10
        with pytest.raises(ChecksumError):
            loads(bytes(bad))


def test_bad_magic(k2_bytes):
    with pytest.raises(TableFormatError):
        loads(b"ORC2" + k2_bytes[4:])
    with pytest.raises(TableFormatError):
        loads(b"")


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load(tmp_path / "absent.orc")
