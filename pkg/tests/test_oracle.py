import ast
from pathlib import Path

from orc4 import oracle
from orc4.oracle import (
    ArrayPermutation,
    all_gates,
    count_by_size,
    exhaustive_two_gate,
    images_to_word,
    naive_bfs,
)


def test_oracle_does_not_import_packed_code():
    tree = ast.parse(Path(oracle.__file__).read_text())
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            assert node.level == 0 and not (node.module or "").startswith("orc4"), node.module
        if isinstance(node, ast.Import):
            assert all(not a.name.startswith("orc4") for a in node.names)


def test_naive_counts(naive4):
    assert count_by_size(naive4) == [1, 32, 784, 16204, 294507]
    assert len(naive4) == 311_528


def test_size_two_inverses_have_size_two(naive4):
    for f, s in naive4.items():
        if s == 2:
            assert naive4[ArrayPermutation(f).inverse().images] == 2


def test_two_gate_enumeration(naive4):
    two = exhaustive_two_gate()
    assert len(two) == 817
    assert tuple(range(16)) in two
    assert two == {f for f, s in naive_bfs(2).items()}
    assert two == {f for f, s in naive4.items() if s <= 2}


def test_gg_is_identity():
    ident = ArrayPermutation.identity()
    for g in map(ArrayPermutation, all_gates()):
        assert g.then(g) == ident
        assert g.inverse() == g


def test_images_to_word():
    assert images_to_word(range(16)) == 0xFEDCBA9876543210
