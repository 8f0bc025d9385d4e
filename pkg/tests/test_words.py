from hypothesis import given, strategies as st

from coarsegeo.models import get_model
from coarsegeo.words import (
    free_reduce,
    inverse,
    is_cyclically_reduced,
    is_reduced,
    shortlex_key,
)

letters = st.integers(min_value=-4, max_value=4).filter(lambda x: x != 0)
raw_words = st.lists(letters, max_size=40)


def test_forced_cancellation():
    assert free_reduce([1, -1, 2]) == (2,)


def test_identity_case():
    assert free_reduce([]) == ()


def test_single_cancellation():
    assert free_reduce([1, 2, -2, 1]) == (1, 1)


@given(raw_words)
def test_free_reduce_idempotent(w):
    once = free_reduce(w)
    assert free_reduce(once) == once


@given(raw_words)
def test_free_reduce_length_nonincreasing(w):
    assert len(free_reduce(w)) <= len(w)


@given(raw_words)
def test_free_reduce_is_reduced(w):
    assert is_reduced(free_reduce(w))


@given(raw_words)
def test_word_times_inverse_cancels(w):
    r = free_reduce(w)
    assert free_reduce(r + inverse(r)) == ()


def test_shortlex_order_prefers_lower_index_then_positive():
    # a < A < b < B, and shorter always wins
    assert shortlex_key((1,)) < shortlex_key((-1,))
    assert shortlex_key((-1,)) < shortlex_key((2,))
    assert shortlex_key((2,)) < shortlex_key((-2,))
    assert shortlex_key((-2,)) < shortlex_key((1, 1))


def test_token_roundtrip_free():
    model = get_model("free:2")
    w = model.word("a B a a")
    assert w == (1, -2, 1, 1)
    assert model.text(w) == "a B a a"


def test_token_roundtrip_surface():
    model = get_model("surface:2")
    w = model.word("a1 B1 b2")
    assert w == (1, -2, 4)
    assert model.text(w) == "a1 B1 b2"


def test_compact_tokens_parse():
    model = get_model("surface:2")
    assert model.word("a1B1b2") == (1, -2, 4)
    free = get_model("free:2")
    assert free.word("abA") == (1, 2, -1)


def test_parse_rejects_unknown_generator():
    model = get_model("free:2")
    try:
        model.word("z")
    except ValueError:
        return
    raise AssertionError("expected a parse error")


def test_cyclically_reduced():
    assert is_cyclically_reduced((1, 2))
    assert not is_cyclically_reduced((1, 2, -1))
