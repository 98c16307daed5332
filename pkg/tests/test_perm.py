import numpy as np
import pytest
from conftest import naive_images, naive_word, random_words

from orc4.gates import GATE_PERMS, Gate
from orc4.perm import (
    IDENTITY,
    apply,
    compose,
    compose_all,
    compose_left_many,
    compose_many,
    conjugate_adjacent,
    format_perm,
    from_images,
    hash64,
    inverse,
    inverse_many,
    is_permutation,
    parse_perm,
    to_images,
    total_order_less,
)

NOT_A = Gate(0).perm
SHIFT4 = from_images(list(range(1, 16)) + [0])


def naive_compose(p, q):
    pi, qi = naive_images(p), naive_images(q)
    return naive_word([qi[pi[x]] for x in range(16)])


def wang_listing(key):
    m = (1 << 64) - 1
    key = ((~key & m) + (key << 21)) & m
    key ^= key >> 24
    key = (key + (key << 3) + (key << 8)) & m
    key ^= key >> 14
    key = (key + (key << 2) + (key << 4)) & m
    key ^= key >> 28
    return (key + (key << 31)) & m


def test_identity_layout():
    assert to_images(IDENTITY) == list(range(16))
    assert IDENTITY == 0xFEDCBA9876543210


def test_compose_identity_left_and_right():
    for p in random_words(200, 1):
        assert compose(IDENTITY, p) == p
        assert compose(p, IDENTITY) == p


def test_compose_gate_twice_is_identity():
    for g in GATE_PERMS:
        assert compose(g, g) == IDENTITY


def test_compose_not_a_then_cnot_ab():
    cnot_ab = Gate(1, 0b0001).perm
    assert to_images(compose(NOT_A, cnot_ab)) == [3, 0, 1, 2, 7, 4, 5, 6, 11, 8, 9, 10, 15, 12, 13, 14]


def test_compose_matches_naive():
    ws = random_words(20_000, 2)
    for p, q in zip(ws[::2], ws[1::2]):
        assert compose(p, q) == naive_compose(p, q)


def test_compose_associative():
    ws = random_words(3000, 3)
    for p, q, r in zip(ws[0::3], ws[1::3], ws[2::3]):
        assert compose(compose(p, q), r) == compose(p, compose(q, r))


def test_inverse_examples():
    assert inverse(IDENTITY) == IDENTITY
    for g in GATE_PERMS:
        assert inverse(g) == g
    assert to_images(inverse(SHIFT4)) == [15] + list(range(15))


def test_inverse_round_trip():
    for p in random_words(5000, 4):
        ip = inverse(p)
        assert compose(p, ip) == IDENTITY
        assert compose(ip, p) == IDENTITY


def test_batch_kernels_agree_with_scalar():
    ws = random_words(500, 5)
    q = ws[0]
    out = np.empty_like(ws)
    compose_many(ws, q, out)
    assert all(out[i] == compose(ws[i], q) for i in range(len(ws)))
    compose_left_many(q, ws, out)
    assert all(out[i] == compose(q, ws[i]) for i in range(len(ws)))
    inverse_many(ws, out)
    assert all(out[i] == inverse(ws[i]) for i in range(len(ws)))


def test_apply():
    assert apply(IDENTITY, 7) == 7
    assert apply(SHIFT4, 15) == 0
    for p in random_words(100, 6):
        imgs = naive_images(p)
        assert all(apply(p, x) == imgs[x] for x in range(16))
    with pytest.raises(ValueError):
        apply(IDENTITY, 16)
    with pytest.raises(ValueError):
        apply(IDENTITY, -1)


def test_conjugate_adjacent_examples():
    for t in ("01", "12", "23"):
        assert conjugate_adjacent(IDENTITY, t) == IDENTITY
    assert conjugate_adjacent(NOT_A, "01") == Gate(1).perm
    assert conjugate_adjacent(Gate(1).perm, "12") == Gate(2).perm
    assert conjugate_adjacent(Gate(2).perm, "23") == Gate(3).perm


def test_conjugate_adjacent_involution_and_homomorphism():
    ws = random_words(3000, 7)
    for t in (0, 1, 2):
        for p, q in zip(ws[::2], ws[1::2]):
            assert conjugate_adjacent(conjugate_adjacent(p, t), t) == p
            assert conjugate_adjacent(compose(p, q), t) == compose(
                conjugate_adjacent(p, t), conjugate_adjacent(q, t))


def test_conjugate_adjacent_relabels_bits():
    # swapping wires i and i+1 moves bit i of every index and value
    def swap_bits(x, i):
        lo, hi = (x >> i) & 1, (x >> (i + 1)) & 1
        return x & ~(3 << i) | (lo << (i + 1)) | (hi << i)

    for p in random_words(200, 8):
        imgs = naive_images(p)
        for t in range(3):
            want = [0] * 16
            for x in range(16):
                want[swap_bits(x, t)] = swap_bits(imgs[x], t)
            assert to_images(conjugate_adjacent(p, t)) == want


def test_conjugate_adjacent_rejects_bad_transposition():
    with pytest.raises(ValueError):
        conjugate_adjacent(IDENTITY, "02")


def test_total_order():
    ws = [int(w) for w in random_words(300, 9)]
    for p in ws[:50]:
        assert not total_order_less(p, p)
    for p, q in zip(ws[::2], ws[1::2]):
        assert total_order_less(p, q) != total_order_less(q, p)
    gates = [int(g) for g in GATE_PERMS]
    s = sorted(gates)
    assert len(set(s)) == 32
    assert all(total_order_less(a, b) for a, b in zip(s, s[1:]))


def test_hash64_listing():
    assert int(hash64(0)) == 0x77CFA1EEF01BCA90
    assert int(hash64(0)) == wang_listing(0)
    for w in random_words(1000, 10):
        assert int(hash64(w)) == wang_listing(int(w))
    assert hash64(IDENTITY) == hash64(IDENTITY)


def test_hash64_spreads_linear_functions():
    from orc4.experiments import enumerate_linear

    words = enumerate_linear()
    slots = np.array([int(hash64(w)) & ((1 << 20) - 1) for w in words])
    occupancy = np.bincount(slots, minlength=1 << 20)
    mean = len(words) / (1 << 20)
    assert occupancy.max() <= 50 * mean


def test_parse_and_format():
    assert parse_perm("[1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,0]") == SHIFT4
    assert parse_perm("1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 0") == SHIFT4
    assert format_perm(SHIFT4) == "1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,0"
    assert format_perm(SHIFT4, brackets=True).startswith("[1,2")
    for bad in ("0,1,2", "0,0,2,3,4,5,6,7,8,9,10,11,12,13,14,15", "x", "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,16"):
        with pytest.raises(ValueError):
            parse_perm(bad)


def test_is_permutation():
    assert is_permutation(IDENTITY)
    assert not is_permutation(0)
    assert not is_permutation((1 << 64) - 1)


def test_compose_all_order():
    assert compose_all([]) == IDENTITY
    ws = [int(w) for w in random_words(3, 11)]
    assert compose_all(ws) == compose(compose(ws[0], ws[1]), ws[2])
