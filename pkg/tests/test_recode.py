import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfentropy.parry import InadmissibleWord, SymbolWord, artin, cylinder_interval, random_word
from cfentropy.recode import (
    EXCEPTIONAL_BLOCKS,
    RANK2_MATCHING,
    TAILS,
    artin_words,
    exhaustive_check,
    extend_forced_tail,
    recode_by_blocks,
    recode_by_tracking,
    verify_block_identities,
    verify_rank2_table,
    verify_v_equality,
)


def tau(result):
    return result.tau.symbols


@pytest.mark.parametrize(
    "word, expected",
    [
        ((3, 7, 5, 1), (3, 5, 1, 1)),
        ((3, 7, 6, 2), (3, 5, 1, 2)),
        ((6, 2, 3, 7), (6, 4, 8, 7)),
        ((6, 2, 4, 8), (6, 4, 8, 8)),
        ((1, 1, 2, 4, 8), (1, 1, 2, 4, 8)),
        ((3, 7, 6, 2, 3, 7), (3, 5, 1, 2, 3, 5)),
    ],
)
def test_examples(word, expected):
    assert tau(recode_by_tracking(word)) == expected
    assert tau(recode_by_blocks(word)) == expected


def test_block_intervals_equal():
    assert cylinder_interval("artin", (3, 7, 5, 1)).endpoints == cylinder_interval("hurwitz", (3, 5, 1, 1)).endpoints


def test_rank2_table():
    rep = verify_rank2_table()
    assert rep.passed
    assert rep.matched == RANK2_MATCHING
    # only two rank-two words change
    assert {w for w, t in RANK2_MATCHING.items() if w != t} == {(3, 7), (6, 2)}


def test_block_identities():
    rep = verify_block_identities()
    assert rep.passed
    assert set(rep.maps_equal) == set(EXCEPTIONAL_BLOCKS)


def test_bad_inputs():
    with pytest.raises(InadmissibleWord):
        recode_by_tracking((3, 5))
    with pytest.raises(ValueError):
        recode_by_blocks((3, 7, 5))


def test_forced_tail():
    assert extend_forced_tail((3, 7, 5)).symbols == (3, 7, 5, 1)
    assert extend_forced_tail((1, 2)).symbols == (1, 2)


def test_word_enumeration():
    words = list(artin_words(4))
    A = artin()
    assert len(words) == len(set(words))
    assert all(w[-1] in TAILS for w in words)
    assert all(t in A.successors(s) for w in words for s, t in zip(w, w[1:]))
    # every admissible word of length 3 ending in a tail appears
    brute = [(x, y, z) for x in range(1, 9) for y in A.successors(x) for z in A.successors(y) if z in TAILS]
    assert sorted(w for w in words if len(w) == 3) == sorted(brute)


def test_exhaustive_small():
    rep = exhaustive_check(8)
    assert rep.passed and rep.n_words > 100


@st.composite
def tailed_artin_words(draw):
    rng = random.Random(draw(st.integers(0, 2**32)))
    w = random_word("artin", draw(st.integers(1, 30)), rng).symbols
    while w[-1] not in TAILS:
        w = w + (rng.choice(artin().successors(w[-1])),)
    return w


@given(tailed_artin_words())
@settings(max_examples=150, deadline=None)
def test_recoders_agree_on_long_words(w):
    t, b = recode_by_tracking(w), recode_by_blocks(w)
    assert t.tau == b.tau
    assert len(t.tau) == len(w) and t.tau.symbols[0] == w[0]
    assert cylinder_interval("hurwitz", t.tau).endpoints == cylinder_interval("artin", w).endpoints
    assert verify_v_equality(t)
    assert t.tail_class in {(1, 1), (8, 8), (2, 2), (2, 4), (7, 5), (7, 7)}


def test_result_word_regimes():
    r = recode_by_blocks(SymbolWord((3, 7, 5, 1)))
    assert r.omega.regime == "artin" and r.tau.regime == "hurwitz"
