from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from booklab import rng
from booklab.coloring import (Color, TwoColoring, VertexSet, build, density, dumps, load, loads,
                              neighbors, pair_count, save)
from booklab.constructions import random_coloring
from booklab.errors import DomainError, FormatError


@st.composite
def colorings(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build(n, chosen)


def test_splitmix_reference_vector():
    g = rng.SplitMix64(1234567)
    assert [g.next_u64() for _ in range(3)] == [6457827717110365317, 3203168211198807973,
                                                 9817491932198370423]


@pytest.mark.parametrize("seed", [0, 1, 2**63 + 5])
def test_block_generator_matches_scalar(seed):
    ref = oracles.splitmix64(seed)
    expected = [next(ref) for _ in range(40)]
    assert splitmix_list(seed, 0, 40) == expected
    assert splitmix_list(seed, 17, 5) == expected[17:22]


def splitmix_list(seed, start, count):
    return [int(x) for x in rng.splitmix64_block(seed, start, count)]


def test_randbelow_and_shuffle_are_deterministic():
    a, b = rng.SplitMix64(9), rng.SplitMix64(9)
    xs, ys = list(range(20)), list(range(20))
    a.shuffle(xs)
    b.shuffle(ys)
    assert xs == ys and sorted(xs) == list(range(20))
    assert all(0 <= rng.SplitMix64(i).randbelow(7) < 7 for i in range(50))


def test_build_and_accessors():
    c = build(4, [(0, 1), (2, 1)])
    assert c.is_blue(1, 2) and c.is_blue(2, 1)
    assert c.color_of(0, 3) is Color.RED
    assert neighbors(c, 1, Color.BLUE).sorted() == [0, 2]
    assert neighbors(c, 1, Color.RED).sorted() == [3]
    assert c.blue_edge_count() == 2 and c.red_edge_count() == 4
    assert c.blue_edges() == [(0, 1), (1, 2)]
    assert c.swapped().swapped() == c


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 5)], [(-1, 2)]])
def test_build_rejects_bad_pairs(edges):
    with pytest.raises(DomainError):
        build(3, edges)


def test_constructor_rejects_asymmetric_rows():
    with pytest.raises(DomainError, match="asymmetric"):
        TwoColoring(2, (0b10, 0))
    with pytest.raises(DomainError):
        TwoColoring(0, ())


def test_pair_count_uses_ordered_pairs():
    c = build(3, [(0, 1), (1, 2), (0, 2)])
    X = VertexSet.of([0, 1, 2])
    assert pair_count(c, X, X, Color.BLUE) == 6
    assert density(c, X, X, Color.BLUE) == Fraction(6, 9)
    assert pair_count(c, [0], [1, 2], Color.RED) == 0


def test_density_needs_nonempty_sets():
    c = build(3, [])
    with pytest.raises(DomainError):
        density(c, [], [1], Color.RED)


def test_vertex_set_algebra():
    a, b = VertexSet.of([1, 3, 5]), VertexSet.range(3, 7)
    assert (a & b).sorted() == [3, 5]
    assert (a | b).sorted() == [1, 3, 4, 5, 6]
    assert (a - b).sorted() == [1]
    assert 3 in a and 2 not in a and len(b) == 4
    big = VertexSet.range(0, 300)
    assert list(big) == list(range(300))


def test_kcg_format_is_exact():
    c = build(4, [(0, 1), (1, 3)])
    assert dumps(c) == "kcg 1\n4\n100\n01\n0\n"
    assert loads(dumps(c)) == c
    assert dumps(build(1, [])) == "kcg 1\n1\n"


@pytest.mark.parametrize("text, message", [
    ("kcg 2\n3\n00\n0\n", "malformed header"),
    ("kcg 1\nx\n", "malformed header"),
    ("kcg 1\n3\n000\n0\n", "row length mismatch"),
    ("kcg 1\n3\n00\n", "row length mismatch"),
    ("kcg 1\n3\n00\n0\n1\n", "row length mismatch"),
    ("kcg 1\n3\n02\n0\n", "other than 0/1"),
    ("kcg 1\n0\n", "at least 1"),
])
def test_kcg_errors(text, message):
    with pytest.raises(FormatError, match=message):
        loads(text)


def test_save_load_roundtrip_large(tmp_path):
    c = random_coloring(300, Fraction(1, 2), 3)
    path = tmp_path / "c.kcg"
    save(c, path)
    assert load(path) == c
    assert b"\r" not in path.read_bytes()


@settings(max_examples=60, deadline=None)
@given(colorings())
def test_roundtrip_and_matrix(c):
    assert loads(dumps(c)) == c
    m = c.matrix
    assert np.array_equal(m, m.T) and not m.diagonal().any()
    assert TwoColoring.from_matrix(m) == c


@settings(max_examples=60, deadline=None)
@given(colorings(), st.data())
def test_pair_count_matches_brute_force(c, data):
    X = data.draw(st.sets(st.integers(0, c.n - 1)))
    Y = data.draw(st.sets(st.integers(0, c.n - 1)))
    blue = {frozenset(e) for e in c.blue_edges()}
    for color, want in ((Color.BLUE, True), (Color.RED, False)):
        brute = sum(1 for x in X for y in Y if x != y and oracles.mono(blue, x, y, want))
        assert pair_count(c, X, Y, color) == brute
