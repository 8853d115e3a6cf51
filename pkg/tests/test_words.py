import itertools

import pytest

from autgrp.errors import BudgetExceeded, NotInBall
from autgrp.words import (
    are_equal,
    canonical_key,
    cayley_ball,
    growth,
    is_identity_oracle,
    sections_closure,
    word_length,
)


def test_grigorchuk_relations_oracle(grig):
    for w in ("aa", "bb", "cc", "dd", "bcd", "dbc", "cdb"):
        assert is_identity_oracle(grig, w), w
    for w in ("a", "b", "c", "d", "ab", "ba", "bc"):
        assert not is_identity_oracle(grig, w), w


def test_are_equal(grig):
    assert are_equal(grig, "cd", "b")
    assert are_equal(grig, "bc", "d")
    assert are_equal(grig, "bd", "c")
    assert not are_equal(grig, "b", "c")
    assert are_equal(grig, "", "aa")


def test_sections_closure_size(grig):
    # b generates the finite section family {b, a, c, d, e}
    assert sections_closure(grig, "b").size == 5


def test_oracle_budget(adding):
    # the closure of a^40 passes through a^20, a^10, a^5, ... and outgrows
    # a three-word budget before any nontrivial permutation shows up
    with pytest.raises(BudgetExceeded):
        is_identity_oracle(adding, "a" * 40, budget=3)


def test_canonical_key_separates(grig):
    # five distinct nontrivial elements plus the identity spelled as aa
    keys = {canonical_key(grig, w) for w in ("a", "b", "c", "d", "ab", "aa")}
    assert len(keys) == 6
    assert canonical_key(grig, "aa") == canonical_key(grig, "")
    assert canonical_key(grig, "cd") == canonical_key(grig, "b")


def test_basilica_positive_words_distinct(basilica):
    # free semigroup on two letters: sample the length <= 7 slice here
    keys = set()
    count = 0
    for L in range(1, 8):
        for tup in itertools.product("ab", repeat=L):
            keys.add(canonical_key(basilica, "".join(tup)))
            count += 1
    assert len(keys) == count == 2**8 - 2


def test_cayley_ball_and_word_length(grig):
    ball = cayley_ball(grig, 3)
    assert ball.size == 23
    assert word_length(grig, "cd", 3) == 1
    assert word_length(grig, "", 3) == 0
    with pytest.raises(NotInBall):
        word_length(grig, "ababab", 2)


def test_growth_odometer(adding):
    gt = growth(adding, 20)
    assert tuple(gt.gamma) == tuple(2 * n + 1 for n in range(21))


def test_growth_grigorchuk_small(grig):
    gt = growth(grig, 6)
    assert tuple(gt.gamma) == (1, 5, 11, 23, 40, 68, 108)
    assert gt[0] == 1
    assert gt.radius == 6


def test_growth_monotone_all_catalog():
    from autgrp import catalog

    for name in catalog.names():
        gt = growth(catalog.get(name), 5)
        assert all(gt[i] <= gt[i + 1] for i in range(5))


def test_ball_walk_matches_oracle(grig):
    ball = cayley_ball(grig, 4)
    for L in range(0, 4):
        for tup in itertools.product(range(1, 5), repeat=L):
            assert ball.is_trivial_word(tup) == is_identity_oracle(
                grig, grig.word_str(tup)
            )
