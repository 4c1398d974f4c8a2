import itertools
import math

import pytest
from hypothesis import given, strategies as st

import oracles
from wishart_traces.coloring import (
    Coloring,
    EnumerationLimitError,
    color_cycle_counts,
    color_preserving_count,
    connecting_planar_sets,
    enumerate_color_preserving,
    long_cycle,
    planar_set,
    two_star_sigmas,
)
from wishart_traces.perm import Permutation, compose, cycle_count, euler_genus, orbits

colorings = st.integers(1, 7).flatmap(lambda n: st.lists(st.integers(1, 3), min_size=n, max_size=n)).map(
    lambda cs: Coloring(tuple(cs))
)


def test_table1_color_preserving():
    t = Coloring.parse("1,2,1,2")
    got = {str(a) for a in enumerate_color_preserving(t)}
    assert got == {"(1)(2)(3)(4)", "(1)(2,4)(3)", "(1,3)(2)(4)", "(1,3)(2,4)"}


def test_small_counts():
    assert len(list(enumerate_color_preserving(Coloring.constant(3)))) == 6
    only = list(enumerate_color_preserving(Coloring.parse("1,2,3")))
    assert len(only) == 1 and only[0].is_identity()


def test_color_cycle_counts():
    t = Coloring.parse("1,2,1,2")
    assert color_cycle_counts(Permutation.identity(4), t) == (2, 2)
    assert color_cycle_counts(Permutation.parse("(1,3)(2,4)"), t) == (1, 1)
    t6 = Coloring.parse("1,2,3,1,2,3")
    assert color_cycle_counts(Permutation.parse("(1,4)(2,5)(3,6)"), t6) == (1, 1, 1)
    with pytest.raises(ValueError):
        color_cycle_counts(Permutation.parse("(1,2)", n=4), t)


def test_cap_raises_eagerly():
    with pytest.raises(EnumerationLimitError):
        enumerate_color_preserving(Coloring.constant(6), cap=100)


def test_bad_coloring():
    with pytest.raises(ValueError):
        Coloring((0, 1))


@given(colorings)
def test_enumeration_matches_filter(t):
    got = [a.images for a in enumerate_color_preserving(t)]
    assert len(got) == len(set(got)) == color_preserving_count(t)
    assert sorted(got) == sorted(oracles.color_preserving(t.colors))
    assert len(got) == math.prod(math.factorial(len(c)) for c in t.classes())


def test_enumeration_all_colorings_up_to_8():
    # every coloring pattern of n <= 8 positions with <= 3 colors, up to relabeling
    for n in range(1, 9):
        for cs in itertools.product(range(1, 4), repeat=n):
            if cs[0] != 1 or (3 in cs and 2 not in cs):
                continue
            if cs != tuple(sorted(cs)):
                continue  # count depends only on class sizes
            t = Coloring(cs)
            alphas = list(enumerate_color_preserving(t))
            assert len(alphas) == len(set(alphas)) == color_preserving_count(t)
            assert all(cs[a.images[j]] == cs[j] for a in alphas for j in range(n))


def test_sharding_partitions_enumeration():
    t = Coloring.parse("1,1,1,2,2,1")
    full = [a.images for a in enumerate_color_preserving(t)]
    shards = [[a.images for a in enumerate_color_preserving(t, shard=(i, 3))] for i in range(3)]
    assert sorted(sum(shards, [])) == sorted(full)


def test_planar_small():
    assert [str(a) for a in planar_set(Coloring.constant(1))] == ["(1)"]
    assert len(list(planar_set(Coloring.constant(2)))) == 2
    # noncrossing partitions of 3 points: Catalan(3) = 5
    assert len(list(planar_set(Coloring.constant(3)))) == 5


@pytest.mark.parametrize("n", range(1, 7))
def test_planar_constant_is_catalan(n):
    assert len(list(planar_set(Coloring.constant(n)))) == math.comb(2 * n, n) // (n + 1)


@given(colorings.filter(lambda t: len(t) <= 6))
def test_planar_matches_oracle_and_genus_zero(t):
    got = sorted(a.images for a in planar_set(t))
    assert got == oracles.planar_single(t.colors)
    sigma = long_cycle(len(t))
    chosen = set(got)
    for a in enumerate_color_preserving(t):
        g = euler_genus(sigma, a)[1]
        assert (g == 0) == (a.images in chosen)


def test_connecting_smallest():
    star, starstar = connecting_planar_sets(Coloring.constant(1))
    assert [str(a) for a in star] == ["(1,2)"]
    assert [str(a) for a in starstar] == ["(1,2)"]


def test_connecting_n2_brute_force():
    n = 2
    s2, s3 = (s.images for s in two_star_sigmas(n))
    want_star, want_ss = [], []
    for a in itertools.permutations(range(2 * n)):
        if all(a[j] < n for j in range(n)):
            continue
        c = oracles.n_cycles(a)
        if c + oracles.n_cycles(oracles.compose(s2, a)) == 2 * n:
            want_star.append(a)
        if c + oracles.n_cycles(oracles.compose(s3, a)) == 2 * n:
            want_ss.append(a)
    star, ss = connecting_planar_sets(Coloring.constant(n))
    assert sorted(a.images for a in star) == sorted(want_star)
    assert sorted(a.images for a in ss) == sorted(want_ss)


@given(colorings.filter(lambda t: len(t) <= 4))
def test_connecting_sets_transitive_genus_zero(t):
    s2, s3 = two_star_sigmas(len(t))
    star, ss = connecting_planar_sets(t)
    for sigma, group in ((s2, star), (s3, ss)):
        for a in group:
            assert len(orbits(sigma, a)) == 1
            assert euler_genus(sigma, a)[1] == 0
            assert cycle_count(a) + cycle_count(compose(sigma, a)) == 2 * len(t)
