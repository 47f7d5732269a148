from fractions import Fraction

import pytest

import oracles
from booklab.books import count_cliques, max_book
from booklab.coloring import Color, build
from booklab.constructions import (Partition, balanced_kpartite, dominant_bound, goodness_bound,
                                   random_bound, random_coloring)
from booklab.errors import DomainError

# blue edge counts produced by the pure-Python generator in oracles.py
PINNED_BLUE_COUNTS = {
    (10, Fraction(1, 2), 1): 18,
    (30, Fraction(1, 3), 7): 148,
    (100, Fraction(1, 2), 42): 2494,
}


@pytest.mark.parametrize("n, p, seed", [(10, Fraction(1, 2), 1), (30, Fraction(1, 3), 7),
                                        (17, Fraction(3, 5), 99), (12, Fraction(1, 7), 2**40)])
def test_random_coloring_matches_oracle(n, p, seed):
    c = random_coloring(n, p, seed)
    assert {frozenset(e) for e in c.blue_edges()} == oracles.random_blue_pairs(n, p, seed)


@pytest.mark.parametrize("key, count", PINNED_BLUE_COUNTS.items())
def test_random_coloring_pinned(key, count):
    assert random_coloring(*key).blue_edge_count() == count


def test_random_coloring_float_and_domain():
    assert random_coloring(20, 0.5, 4) == random_coloring(20, Fraction(1, 2), 4)
    for p in (0, 1, Fraction(3, 2)):
        with pytest.raises(DomainError):
            random_coloring(5, p, 0)
    with pytest.raises(DomainError):
        random_coloring(0, Fraction(1, 2), 0)


def test_random_coloring_seed_sensitivity():
    assert random_coloring(40, Fraction(1, 2), 1) != random_coloring(40, Fraction(1, 2), 2)


def test_kpartite_structure():
    c, part = balanced_kpartite(3, 4)
    assert c.n == 12 and part.sizes() == [4, 4, 4] and part.covers(12)
    assert c.blue_edge_count() == 3 * 6
    assert c.is_blue(0, 3) and not c.is_blue(3, 4)
    assert Partition.from_labels(part.labels(12)) == part


@pytest.mark.parametrize("k, size", [(1, 3), (2, 0)])
def test_kpartite_domain(k, size):
    with pytest.raises(DomainError):
        balanced_kpartite(k, size)


def test_partition_rejects_overlap():
    from booklab.coloring import VertexSet
    with pytest.raises(DomainError):
        Partition((VertexSet.of([0, 1]), VertexSet.of([1, 2])))


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("n", [3, 5, 8])
def test_goodness_witness(k, n):
    c, _ = balanced_kpartite(k, n + k - 1)
    assert c.n == goodness_bound(k, n) - 1
    assert count_cliques(c, Color.RED, k + 1) == 0
    assert max_book(c, Color.BLUE, k).pages == n - 1


def test_bounds():
    assert goodness_bound(2, 3) == 9
    assert random_bound(1, 2, 10) == pytest.approx(40.0)
    d = dominant_bound(Fraction(1, 2), 2, 10)
    assert d["dominant"] == "random" and d["p"] == pytest.approx(1 / (2**-0.5 + 1))
    assert dominant_bound(1e-12, 4, 10)["dominant"] == "goodness"
    with pytest.raises(DomainError):
        random_bound(0, 2, 3)
    with pytest.raises(DomainError):
        goodness_bound(1, 3)


def test_build_matches_kpartite():
    c, _ = balanced_kpartite(2, 2)
    assert c == build(4, [(0, 1), (2, 3)])
