from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from freelap.words import (
    CancellationProfile,
    InvalidLetterError,
    ShapeMismatchError,
    SizeGuardError,
    Word,
    _sphere_tuples,
    cancellation_profile,
    concat,
    concat_no_cancel,
    enumerate_words,
    inverse,
    parse_word,
    reduce,
    reduce_letters,
    sphere_size,
)


def W(text, rank=2):
    return parse_word(text, rank)


raw_letters = st.lists(
    st.integers(min_value=-2, max_value=2).filter(lambda s: s != 0),
    max_size=14)


def words_strategy(rank=2, max_len=10):
    return raw_letters.map(lambda ls: reduce(rank, ls))


# -- reduction ---------------------------------------------------------------

def test_reduce_full_cancellation():
    assert reduce(2, [1, -1]).is_identity()


def test_reduce_inner_cancellation():
    assert reduce(2, [1, 2, -2, 1]).letters == (1, 1)


def test_reduce_already_reduced():
    assert reduce(2, [1, 2, 1]).letters == (1, 2, 1)


def test_reduce_rejects_bad_letters():
    with pytest.raises(InvalidLetterError):
        reduce(2, [1, 3])
    with pytest.raises(InvalidLetterError):
        reduce(2, [0])


def test_word_constructor_requires_reduced():
    with pytest.raises(ValueError):
        Word(2, [1, -1])


@given(raw_letters)
@settings(max_examples=150, derandomize=True)
def test_reduce_idempotent(ls):
    once = reduce_letters(ls)
    assert reduce_letters(once) == once


@given(raw_letters)
@settings(max_examples=100, derandomize=True)
def test_reduce_has_no_adjacent_cancellation(ls):
    out = reduce_letters(ls)
    assert all(out[i] != -out[i + 1] for i in range(len(out) - 1))


# -- concat / inverse --------------------------------------------------------

def test_concat_single_cancellation():
    assert concat(W("1,2"), W("-2,1")).letters == (1, 1)


def test_concat_identity():
    w = W("1,-2,1")
    assert concat(w, W("")) == w
    assert concat(W(""), w) == w


def test_concat_inverse_gives_identity():
    w = W("1,-2,1")
    assert concat(w, inverse(w)).is_identity()


def test_concat_rank_mismatch():
    with pytest.raises(ShapeMismatchError):
        concat(parse_word("1", 2), parse_word("1", 3))


@given(words_strategy(), words_strategy(), words_strategy())
@settings(max_examples=120, derandomize=True)
def test_concat_associative(a, b, c):
    assert concat(concat(a, b), c) == concat(a, concat(b, c))


@given(words_strategy(), words_strategy())
@settings(max_examples=120, derandomize=True)
def test_concat_parity_and_upper_bound(a, b):
    p = concat(a, b)
    assert len(p) <= len(a) + len(b)
    assert (len(p) - len(a) - len(b)) % 2 == 0


def test_inverse_examples():
    assert inverse(W("1,2")).letters == (-2, -1)
    assert inverse(W("")).is_identity()
    assert inverse(W("-1")).letters == (1,)


@given(words_strategy())
@settings(max_examples=100, derandomize=True)
def test_inverse_involution_and_length(w):
    assert inverse(inverse(w)) == w
    assert len(inverse(w)) == len(w)


# -- no-cancellation concatenation -------------------------------------------

def test_concat_no_cancel_plain():
    assert concat_no_cancel(W("1"), W("2")).letters == (1, 2)


def test_concat_no_cancel_rejects():
    assert concat_no_cancel(W("1"), W("-1")) is None


def test_concat_no_cancel_empty_prefix():
    w = W("1,2")
    assert concat_no_cancel(W(""), w) == w


# -- enumeration --------------------------------------------------------------

def test_sphere_counts_match_formula():
    # exhaustive count law; large rank-3 spheres are counted by iteration
    for rank, n_top in ((2, 8), (3, 8)):
        for n in range(0, n_top + 1):
            got = sum(1 for _ in _sphere_tuples(rank, n))
            assert got == sphere_size(rank, n), (rank, n)
    _sphere_tuples.cache_clear()


def test_enumeration_examples():
    assert [w.text() for w in enumerate_words(2, 0)] == [""]
    assert len(enumerate_words(2, 1)) == 4
    assert len(enumerate_words(2, 3)) == 36


def test_enumeration_is_lexicographic():
    ws = enumerate_words(2, 2)
    assert [w.letters for w in ws[:3]] == [(1, 1), (1, 2), (1, -2)]
    assert sorted(ws) == ws  # shortlex agrees with enumeration order
    assert len(set(ws)) == len(ws)


def test_enumeration_words_are_reduced():
    for w in enumerate_words(2, 4):
        assert reduce_letters(w.letters) == w.letters


def test_size_guard_trips_and_overrides():
    with pytest.raises(SizeGuardError):
        enumerate_words(2, 3, guard_limit=10)
    assert len(enumerate_words(2, 3, guard_limit=10,
                               override_guard=True)) == 36


# -- cancellation profiles -----------------------------------------------------

def test_profile_no_cancellation():
    p = cancellation_profile(W("1,1"), W("2,2"), W("1,1"))
    assert p == CancellationProfile(0, 0, False)


def test_profile_left_cancellation():
    p = cancellation_profile(W("1,1"), W("-1,2"), W("1,1"))
    assert p == CancellationProfile(1, 0, False)


def test_profile_collapsed():
    p = cancellation_profile(W("1"), W("-1"), W("1"))
    assert p.collapsed


def test_profile_length_formula_exhaustive_small():
    small = [w for n in range(0, 3) for w in enumerate_words(2, n)]
    middles = [w for n in range(0, 4) for w in enumerate_words(2, n)]
    for x in small:
        for v in middles:
            for y in small:
                p = cancellation_profile(x, v, y)
                direct = len(concat(concat(x, v), y))
                predicted = len(x) + len(v) + len(y) - 2 * (p.left + p.right)
                if not p.collapsed:
                    assert direct == predicted, (x, v, y, p)
                else:
                    assert direct != predicted, (x, v, y, p)


# -- text format ----------------------------------------------------------------

def test_parse_reduces_and_reserializes():
    assert parse_word("1,-1", 2).text() == ""
    assert parse_word("1,-2,1", 2).text() == "1,-2,1"
    assert parse_word("", 2).is_identity()


def test_parse_rejects_garbage():
    with pytest.raises(InvalidLetterError):
        parse_word("1,x", 2)
    with pytest.raises(InvalidLetterError):
        parse_word("1,0", 2)
    with pytest.raises(InvalidLetterError):
        parse_word("3", 2)
