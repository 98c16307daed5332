import random

import pytest
from conftest import naive_images

from orc4.canonical import WALK_PERMS, conjugate
from orc4.gates import (
    FIRST_FLAG,
    GATE_CONJ_BYTES,
    GATE_PERMS,
    GATES,
    Circuit,
    CircuitSyntaxError,
    Gate,
    GateError,
    conjugate_gate,
    enumerate_gates,
    eval_circuit,
    format_circuit,
    gate_to_perm,
    parse_circuit,
    parse_gate,
)
from orc4.perm import IDENTITY, from_images, inverse, to_images

HARD_LINEAR = ("CNOT(b,a) CNOT(c,d) CNOT(d,b) NOT(d) CNOT(a,b) "
               "CNOT(d,c) CNOT(b,d) CNOT(d,a) NOT(d) CNOT(c,b)")


def hard_linear_map():
    # a,b,c,d -> b^1, a^c^1, d^1, a  with a = bit 0
    out = []
    for x in range(16):
        a, b, c, d = (x >> 0) & 1, (x >> 1) & 1, (x >> 2) & 1, (x >> 3) & 1
        out.append((b ^ 1) | (a ^ c ^ 1) << 1 | (d ^ 1) << 2 | a << 3)
    return from_images(out)


def random_circuit(rng, n):
    return Circuit(rng.choice(GATES) for _ in range(n))


def test_gate_perm_examples():
    assert to_images(Gate(0).perm) == [1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 13, 12, 15, 14]
    tof4 = list(range(16))
    tof4[7], tof4[15] = 15, 7
    assert to_images(parse_gate("TOF4(a,b,c,d)").perm) == tof4


def test_gate_perm_flips_target_when_controls_set():
    for g in GATES:
        imgs = naive_images(gate_to_perm(g))
        for x in range(16):
            fire = all(x >> c & 1 for c in g.control_wires)
            assert imgs[x] == (x ^ (1 << g.target) if fire else x)


def test_enumeration():
    gates = enumerate_gates()
    assert len(gates) == 32
    assert len({g.perm for g in gates}) == 32
    counts = [sum(1 for g in gates if len(g.control_wires) == n) for n in range(4)]
    assert counts == [4, 12, 12, 4]
    keys = [(len(g.control_wires), g.target, g.controls) for g in gates]
    assert keys == sorted(keys)
    assert all(inverse(p) == p for p in GATE_PERMS)


def test_gate_validation():
    with pytest.raises(GateError):
        Gate(0, 0b0001)
    with pytest.raises(GateError):
        Gate(4)
    with pytest.raises(GateError):
        Gate(0, 16)


def test_gate_byte_round_trip():
    for g in GATES:
        assert Gate.from_byte(g.to_byte()) == g
        assert Gate.from_byte(g.to_byte(first=True)) == g
        assert g.to_byte(first=True) & FIRST_FLAG
        assert g.to_byte() < 0x40


def test_conjugate_gate_examples():
    swap_ab = (1, 0, 2, 3)
    assert conjugate_gate(Gate(0), swap_ab) == Gate(1)
    cnot_ab = parse_gate("CNOT(a,b)")
    assert conjugate_gate(cnot_ab, (0, 1, 2, 3)) == cnot_ab


def test_conjugate_gate_commutes_with_perm():
    for g in GATES:
        for sigma in WALK_PERMS:
            assert conjugate_gate(g, sigma).perm == conjugate(g.perm, sigma)
    for i, g in enumerate(GATES):
        for j, sigma in enumerate(WALK_PERMS):
            assert Gate.from_byte(int(GATE_CONJ_BYTES[i, j])) == conjugate_gate(g, sigma)


def test_eval_examples():
    assert eval_circuit(Circuit()) == IDENTITY
    shift4 = parse_circuit("TOF4(a,b,c,d) TOF(a,b,c) CNOT(a,b) NOT(a)")
    assert to_images(shift4.evaluate()) == list(range(1, 16)) + [0]
    assert parse_circuit(HARD_LINEAR).evaluate() == hard_linear_map()
    assert len(parse_circuit(HARD_LINEAR)) == 10


def test_parse_examples():
    assert parse_gate("NOT(a)") == Gate(0)
    g = parse_gate("TOF(c,d,b)")
    assert g.target == 1 and g.control_wires == (2, 3)
    with pytest.raises(GateError):
        parse_gate("CNOT(a,a)")


@pytest.mark.parametrize("text, pos", [
    ("FOO(a)", 0),
    ("NOT(a) XOR(a,b)", 7),
    ("CNOT(a)", 5),
    ("NOT(e)", 4),
    ("NOT(a) )", 7),
    ("TOF(a,b,c", 0),
])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(CircuitSyntaxError) as info:
        parse_circuit(text)
    assert info.value.pos == pos


def test_parse_is_case_and_space_tolerant():
    assert parse_circuit(" tof( a , b , c )  not(d) ") == parse_circuit("TOF(a,b,c) NOT(d)")
    assert parse_circuit("") == Circuit()


def test_format_round_trip():
    rng = random.Random(1)
    for _ in range(500):
        c = random_circuit(rng, rng.randrange(0, 15))
        assert parse_circuit(format_circuit(c)) == c
        assert str(c) == format_circuit(c)


def test_circuit_laws():
    rng = random.Random(2)
    for _ in range(2000):
        c = random_circuit(rng, rng.randrange(0, 20))
        f = c.evaluate()
        assert (c + c.reversed()).evaluate() == IDENTITY
        assert c.reversed().evaluate() == inverse(f)
        sigma = rng.choice(WALK_PERMS)
        assert c.relabeled(sigma).evaluate() == conjugate(f, sigma)
        assert c.size == len(c.gates)
