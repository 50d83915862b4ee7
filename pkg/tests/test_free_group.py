import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeframe import free_group as fg
from freeframe.free_group import CapacityError, Word

from conftest import brute_ball, brute_reduce

letters = st.text(alphabet="abAB", max_size=12)
words = letters.map(fg.reduce)


@pytest.mark.parametrize("raw, expected", [("aA", ""), ("abBA", ""), ("aab", "aab"), ("e", ""), ("", "")])
def test_reduce_examples(raw, expected):
    assert fg.reduce(raw) == expected


def test_reduce_rejects_bad_letter():
    with pytest.raises(ValueError):
        fg.reduce("abc")


def test_word_constructor_validates():
    with pytest.raises(ValueError):
        Word("aA")
    with pytest.raises(ValueError):
        Word("x")
    assert Word("e") == "" and Word("e").pretty() == "e"


def test_multiply_and_inverse_examples():
    assert fg.multiply("ab", "Ba") == "aa"
    assert fg.multiply("", "b") == "b"
    assert fg.inverse("ab") == "BA"
    assert fg.inverse("") == ""
    assert Word("ab") * "Ba" == "aa"
    assert ~Word("ab") == "BA"


@given(letters)
def test_reduce_matches_stack_oracle(raw):
    assert fg.reduce(raw) == brute_reduce(raw)


@given(words, words, words)
def test_group_axioms(u, v, w):
    assert fg.multiply(fg.multiply(u, v), w) == fg.multiply(u, fg.multiply(v, w))
    assert fg.multiply(u, fg.inverse(u)) == ""
    assert fg.multiply(fg.IDENTITY, u) == u == fg.multiply(u, fg.IDENTITY)
    assert fg.inverse(fg.inverse(u)) == u


@given(words)
@settings(max_examples=200)
def test_rank_unrank_roundtrip(w):
    assert fg.unrank(fg.rank(w)) == w


def test_sizes():
    for d in range(1, 9):
        assert len(fg.sphere(d)) == fg.sphere_size(d) == 4 * 3 ** (d - 1)
    for k in range(0, 9):
        assert len(fg.ball(k)) == fg.ball_size(k) == 2 * 3**k - 1
    assert fg.sphere(1) == ("a", "b", "A", "B")


@pytest.mark.parametrize("R", [0, 1, 2, 3, 4])
def test_ball_order_matches_exhaustive_enumeration(R):
    assert list(fg.ball(R)) == brute_ball(R)


def test_rank_is_position_in_ball():
    for i, w in enumerate(fg.ball(5)):
        assert fg.rank(w) == i
        assert fg.unrank(i) == w


def test_unrank_far_beyond_cap():
    w = fg.unrank(10**30)
    assert fg.rank(w) == 10**30


def test_capacity():
    with pytest.raises(CapacityError):
        fg.ball(fg.get_enumeration_cap() + 1)
    assert len(fg.sphere(3, cap=3)) == 36
    with pytest.raises(CapacityError):
        fg.sphere(4, cap=3)
    old = fg.get_enumeration_cap()
    try:
        fg.set_enumeration_cap(2)
        with pytest.raises(CapacityError):
            fg.ball(3)
    finally:
        fg.set_enumeration_cap(old)
    with pytest.raises(ValueError):
        fg.sphere(-1)
    with pytest.raises(ValueError):
        fg.unrank(-1)
