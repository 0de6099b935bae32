"""Gold-and-mines layouts, interval strategies and the network image."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from capgames import core, gmg
from capgames.gmg import GOLD, MINE, IntervalStrategy, make_layout, to_dncda
from capgames.instances import random_layout
from capgames.solvers import DncView, GmgView, enumerate_pnes

seeds = st.integers(0, 100_000)


def small():
    return make_layout([(0, GOLD), (1, MINE), (1, GOLD), (0, GOLD)], K=2, players=2,
                       gold=[2, 1], mine=[-1, -3], bound=2)


def test_validate_layout():
    assert gmg.validate_layout(small()) == []
    bad = make_layout([(2, GOLD)], K=2, players=2, gold=[1, -1])
    probs = gmg.validate_layout(bad)
    assert any("line 2" in p for p in probs)
    assert any("positive" in p for p in probs)
    assert gmg.validate_layout(make_layout([(0, MINE)], K=1, players=1, gold=[], mine=[1]))


def test_segments_and_intervals():
    f = IntervalStrategy((0, 1, 1, 0, 1))
    assert f.segments == 4
    assert f.intervals(1) == [(1, 2), (4, 4)]
    assert IntervalStrategy.from_intervals(5, [(1, 2), (4, 4)]) == f
    assert str(f) == "01101"


def test_payoff_welfare_potential():
    lay = small()
    a, b = IntervalStrategy((0, 0, 0, 0)), IntervalStrategy((0, 1, 1, 0))
    assert gmg.coverage_loads(lay, (a, b)) == [2, 1, 1, 2]
    assert gmg.payoff(lay, (a, b), 0) == 2
    assert gmg.payoff(lay, (a, b), 1) == 1 - 1 + 2 + 1
    assert gmg.welfare(lay, (a, b)) == 5
    assert gmg.potential(lay, (a, b)) == (2 + 1) + (-1) + 2 + (2 + 1)


@pytest.mark.parametrize("size, K, b", [(0, 2, 1), (1, 3, 2), (4, 2, 1), (4, 2, 3), (5, 3, 2), (5, 3, 9)])
def test_strategy_count(size, K, b):
    lay = make_layout([(0, GOLD)] * size, K=K, players=1, gold=[1])
    lay = gmg.GmgLayout(tuple(gmg.Resource(Fraction(p), 0, GOLD) for p in range(size)),
                        K, 1, (Fraction(1),), (), b)
    got = gmg.enumerate_strategies(lay)
    assert len(got) == gmg.strategy_count(size, K, b)
    assert len(set(got)) == len(got)
    assert all(f.segments <= max(b, 1) for f in got)
    brute = [a for a in itertools.product(range(K), repeat=size)
             if IntervalStrategy(a).segments <= b]
    assert sorted(f.assignment for f in got) == sorted(brute)


def test_enumeration_limit():
    lay = random_layout(0, size=6, K=3, bound=6)
    with pytest.raises(gmg.EnumerationTooLarge):
        gmg.enumerate_strategies(lay, limit=10)


@given(seeds)
def test_json_round_trip(seed):
    lay = random_layout(seed)
    assert gmg.layout_from_dict(gmg.layout_to_dict(lay)) == lay


def test_malformed_json():
    with pytest.raises(gmg.LayoutError):
        gmg.layout_from_dict({"K": 2})


@settings(max_examples=25)
@given(seeds, st.integers(1, 5), st.integers(1, 3), st.integers(1, 2))
def test_image_preserves_payoffs(seed, size, K, n):
    lay = random_layout(seed, size=size, K=K, players=n)
    img = to_dncda(lay)
    game = img.game
    assert core.validate_game(game, require_monotone=False).ok
    strategies = gmg.enumerate_strategies(lay)
    paths = [img.path_of(f) for f in strategies]
    assert all(core.is_feasible_path(game, p) for p in paths)
    assert all(img.strategy_of(p) == f for p, f in zip(paths, strategies))
    assert set(core.enumerate_strategies(game)) >= set(paths)
    for prof in itertools.islice(itertools.product(strategies, repeat=n), 200):
        net = tuple(img.path_of(f) for f in prof)
        for i in range(n):
            assert gmg.payoff(lay, prof, i) == -core.player_delay(game, net, i)


def test_image_lengths():
    lay = small()
    img = to_dncda(lay)
    for f in gmg.enumerate_strategies(lay, 4):
        assert core.path_weight(img.game, img.path_of(f)) == f.segments
    assert core.longest_path_weight(img.game) >= lay.size


@settings(max_examples=15)
@given(seeds, st.integers(1, 4))
def test_image_pne_sets_correspond(seed, size):
    lay = random_layout(seed, size=size, K=2, players=2)
    img = to_dncda(lay)
    left = enumerate_pnes(GmgView(lay))
    right = enumerate_pnes(DncView(img.game))
    mapped = {tuple(sorted(img.strategy_of(p) for p in prof)) for prof in right.profiles}
    assert {tuple(sorted(prof)) for prof in left.profiles} == mapped
