import random

import pytest
from hypothesis import given, strategies as st

from qmcoh import words
from qmcoh.errors import ResourceCapExceeded
from qmcoh.words import (
    chars,
    conjugate,
    cyclic_reduce,
    exponent_sum,
    fmt,
    inv,
    is_reduced,
    mul,
    parse,
    power,
    reduce,
)

letters = st.integers(min_value=-3, max_value=3).filter(lambda k: k != 0)
raw_words = st.lists(letters, max_size=24)
reduced_words = raw_words.map(reduce)


def test_parse_basics():
    assert parse("") == ()
    assert parse("ab") == (1, 2)
    assert parse("a'b") == (-1, 2)
    assert parse("Ab") == (-1, 2)
    assert parse("abAB") == (1, 2, -1, -2)
    assert parse("a a") == (1, 1)


def test_parse_cancels():
    assert parse("aa'b") == (2,)
    assert parse("aA") == ()


def test_parse_errors():
    with pytest.raises(ValueError, match="position 0"):
        parse("'a")
    with pytest.raises(ValueError, match="position 1"):
        parse("a1b")


def test_fmt_apostrophe_form():
    assert fmt((-1, 2, -2, 1)) == "a'bb'a" or fmt((-1, 2)) == "a'b"
    assert fmt(()) == ""
    assert fmt((1, 2, -1, -2)) == "aba'b'"


def test_chars_encoding():
    assert chars(parse("aba'b'")) == "abAB"
    assert chars(()) == ""


def test_reduce_examples():
    assert reduce([1, -1, 2]) == (2,)
    assert reduce([1, 2, -2, -1]) == ()
    assert reduce([1, 2, -2, 1]) == (1, 1)


def test_mul_cancellation_at_seam():
    assert mul(parse("ab"), parse("b'a")) == (1, 1)
    assert mul(parse("ab"), parse("b'a'")) == ()
    assert mul((), parse("ab"), ()) == (1, 2)


def test_inv():
    assert inv(parse("ab")) == parse("b'a'")
    assert inv(()) == ()


def test_power_examples():
    w = parse("aba'")
    assert power(w, 3) == parse("abbba'")
    assert power(w, 0) == ()
    assert power(w, -2) == parse("ab'b'a'")
    assert power(parse("ab"), 4) == parse("abababab")


def test_power_cap():
    power(parse("a"), words.POWER_CAP)
    with pytest.raises(ResourceCapExceeded):
        power(parse("a"), words.POWER_CAP + 1)


def test_cyclic_reduce_examples():
    assert cyclic_reduce(parse("aaba'")) == (parse("ab"), parse("a"))
    assert cyclic_reduce(parse("aba'")) == (parse("b"), parse("a"))
    assert cyclic_reduce(parse("abab")) == (parse("abab"), ())
    assert cyclic_reduce(()) == ((), ())
    # single letter words are their own core
    assert cyclic_reduce(parse("a")) == (parse("a"), ())


def test_exponent_sum():
    assert exponent_sum(parse("abAB"), 1) == 0
    assert exponent_sum(parse("aab'"), 1) == 2
    assert exponent_sum(parse("aab'"), 2) == -1


@given(raw_words)
def test_reduce_is_reduced_and_idempotent(ls):
    w = reduce(ls)
    assert is_reduced(w)
    assert reduce(w) == w


@given(reduced_words, reduced_words)
def test_mul_inverse_law(u, v):
    assert mul(u, inv(u)) == ()
    assert inv(mul(u, v)) == mul(inv(v), inv(u))


@given(reduced_words, reduced_words, reduced_words)
def test_mul_associative(u, v, w):
    assert mul(mul(u, v), w) == mul(u, mul(v, w))


@given(reduced_words, st.integers(min_value=-6, max_value=6))
def test_power_matches_iterated_mul(w, n):
    expect = ()
    step = w if n >= 0 else inv(w)
    for _ in range(abs(n)):
        expect = mul(expect, step)
    assert power(w, n) == expect


@given(reduced_words)
def test_cyclic_reduce_reassembles(w):
    core, conj = cyclic_reduce(w)
    assert mul(conj, core, inv(conj)) == w
    # the core really is cyclically reduced
    assert not (len(core) >= 2 and core[0] == -core[-1])


@given(reduced_words)
def test_parse_fmt_roundtrip(w):
    assert parse(fmt(w)) == w


@given(st.integers(min_value=0, max_value=40), st.integers(min_value=1, max_value=4))
def test_random_reduced_exact_length(length, rank):
    rng = random.Random(11)
    w = words.random_reduced(rng, rank, length)
    assert len(w) == length
    assert is_reduced(w)


def test_random_reduced_deterministic():
    a = words.random_reduced(random.Random(5), 2, 30)
    b = words.random_reduced(random.Random(5), 2, 30)
    assert a == b


def test_primitive_root_oracles():
    assert words.primitive_root(parse("abab")) == (parse("ab"), 2)
    assert words.primitive_root(parse("ab")) == (parse("ab"), 1)
    # conjugates of powers root through the conjugate: (aba')^3 = ab^3a'
    assert words.primitive_root(parse("abbba'")) == (parse("aba'"), 3)
    with pytest.raises(ValueError):
        words.primitive_root(())


def test_pow_entry_canonicalizes_roots():
    ab = parse("ab")
    assert words.pow_entry(parse("abab"), 3) == words.Pow(ab, 6)
    assert words.pow_entry(ab, -1) == words.inv(ab)
    assert words.pow_entry(parse("abab"), -1) == words.Pow(words.inv(ab), 2)
    assert words.pow_entry(ab, 0) == ()


def test_entry_mul_inverse_base_stays_symbolic():
    ab = parse("ab")
    big = words.Pow(ab, 2**40)
    out = words.entry_mul(big, words.Pow(words.inv(ab), 2**40 - 2))
    assert out == words.Pow(ab, 2)
    # a plain product that lands on a proper power is re-rooted
    assert words.entry_mul(ab, parse("abab")) == words.Pow(ab, 3)
