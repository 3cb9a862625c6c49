import itertools

import pytest
from hypothesis import given

from fliess.words import (Alphabet, DegreeError, Letter, bracket, check_hopf_degree,
                          check_word_degree, degree_caps, feedback_degree, format_word,
                          left_shift, letter_count, parse_word, shift_word, word_length,
                          words_by_feedback_degree, words_upto, x)

from conftest import words

X0, X1, X2, X3 = (Letter(i) for i in range(4))


def test_word_length():
    assert word_length(()) == 0
    assert word_length((X1, X2)) == 2
    assert word_length((X0, X1, X0)) == 3


def test_letter_count():
    w = (X1, x(1, 1), X1)
    assert letter_count(w, X1) == 2
    assert letter_count(w, x(1, 1)) == 1
    assert letter_count((), X0) == 0


def test_feedback_degree_examples():
    assert feedback_degree(()) == 0
    assert feedback_degree((X0,)) == 2
    assert feedback_degree((X1, X0)) == 3


def test_feedback_degree_rejects_brackets():
    with pytest.raises(DegreeError):
        feedback_degree((x(1, 2),))


def test_left_shift_examples():
    assert left_shift(X1, (X1, X2)) == (X2,)
    assert left_shift(X2, (X1, X2)) is None
    assert left_shift(X1, ()) is None
    assert shift_word((X0, X1), (X0, X1, X2)) == (X2,)


def test_bracket_examples():
    assert bracket(X1, X2) == x(1, 2)
    assert bracket(X1, X1) == x(1, 1)
    assert bracket(x(1, 2), X3) == x(1, 2, 3)


def test_letters_are_interned():
    assert Letter(1) is X1
    assert x(2, 1) is x(1, 2)


small_letters = [Letter(c) for n in (1, 2) for c in itertools.combinations_with_replacement(range(5), n)]


def test_bracket_commutative_exhaustive():
    for a, b in itertools.product(small_letters, repeat=2):
        assert bracket(a, b) == bracket(b, a)


def test_bracket_associative_exhaustive():
    base = [Letter(i) for i in range(5)]
    for a, b, c in itertools.product(base, repeat=3):
        assert bracket(bracket(a, b), c) == bracket(a, bracket(b, c))


def test_left_shift_inverts_prefixing():
    for w in words_upto([X0, X1, X2], 5):
        for a in (X0, X1, X2):
            assert left_shift(a, (a,) + w) == w


@given(words(m=2, max_len=5), words(m=2, max_len=5))
def test_feedback_degree_additive(a, b):
    assert feedback_degree(a + b) == feedback_degree(a) + feedback_degree(b)


@given(words(m=3, max_len=5, brackets=True))
def test_parse_format_roundtrip(w):
    assert parse_word(format_word(w)) == w


def test_parse_word_variants():
    assert parse_word("e") == ()
    assert parse_word("x0x1") == (X0, X1)
    assert parse_word("x[2,1] x0") == (x(1, 2), X0)
    with pytest.raises(ValueError):
        parse_word("y1")


def test_canonical_letter_order():
    assert sorted([x(1, 1), X2, X0]) == [X0, X2, x(1, 1)]


def test_words_upto_counts():
    assert len(list(words_upto([X0, X1], 3))) == 1 + 2 + 4 + 8


def test_words_by_feedback_degree_matches_filter():
    expect = {w for w in words_upto([X0, X1, X2], 5) if feedback_degree(w) <= 5}
    assert set(words_by_feedback_degree(2, 5)) == expect


def test_alphabet_letters():
    a = Alphabet(2)
    assert a.base == (X0, X1, X2)
    assert a.letters(2) == (X0, X1, X2)
    ext = Alphabet(2, extended=True).letters(2)
    assert x(1, 2) in ext and x(1, 1) in ext


def test_degree_caps(monkeypatch):
    monkeypatch.delenv("FLIESS_DEGREE_CAP", raising=False)
    assert degree_caps() == (12, 8)
    monkeypatch.setenv("FLIESS_DEGREE_CAP", "5,3")
    assert degree_caps() == (5, 3)
    with pytest.raises(DegreeError):
        check_word_degree(6)
    with pytest.raises(DegreeError):
        check_hopf_degree(4)
    monkeypatch.setenv("FLIESS_DEGREE_CAP", "junk")
    with pytest.raises(DegreeError):
        degree_caps()
