"""Folding round trips, tag layouts, and the chain syntax checkers."""

import random

import pytest

from binsquares.automata import Symbol
from binsquares.folding import (
    FoldedWord,
    alphabet_for,
    fold,
    pair_tags,
    parse_word,
    render_word,
    syntax_checker,
    unfold,
)


def test_pair_tag_layouts():
    assert pair_tags("odd", 1) == ("e",)
    assert pair_tags("odd", 2) == ("d", "e")
    assert pair_tags("odd", 3) == ("c", "d", "e")
    assert pair_tags("odd", 4) == ("b", "c", "d", "e")
    assert pair_tags("odd", 6) == ("a", "a", "b", "c", "d", "e")
    assert pair_tags("even", 1) == ("e",)
    assert pair_tags("even", 2) == ("d", "e")
    assert pair_tags("even", 3) == ("a", "d", "e")
    assert pair_tags("even", 4) == ("a", "b", "d", "e")
    assert pair_tags("even", 7) == ("a", "b", "c", "c", "c", "d", "e")
    with pytest.raises(ValueError):
        pair_tags("odd", 0)
    with pytest.raises(ValueError):
        pair_tags("both", 3)


def test_fold_small_even_by_hand():
    w = fold(43)  # bits 1,1,0,1,0,1
    assert w.parity == "even"
    assert w.pair_count == 1
    assert w.render() == "[1,1]e 0f 1g 0h 1i"
    assert w.value() == 43


def test_fold_odd_by_hand():
    value = 0b1010011001101  # 13 bits
    w = fold(value)
    assert w.parity == "odd"
    assert w.source_length == 13
    tags = tuple(s.tag for s in w.symbols)
    assert tags == ("a", "a", "b", "c", "d", "e", "f")
    # pair k carries [bit (6+k), bit k]
    assert w.symbols[0] == Symbol("a", (1, 1))
    assert w.symbols[6] == Symbol("f", (1,))
    assert w.value() == value


def test_fold_round_trips_exhaustively():
    for n in range(3, 16, 2):
        for value in range(1 << (n - 1), 1 << n):
            w = fold(value)
            assert w.source_length == n
            assert unfold(w.symbols) == value
    for n in range(6, 15, 2):
        for value in range(1 << (n - 1), 1 << n):
            w = fold(value)
            assert w.source_length == n
            assert unfold(w.symbols) == value


def test_fold_rejects_short_values():
    # 1- and 2-bit values are too short for any fold; 4-bit ones miss the
    # even minimum of 6; 5-bit values fold fine.
    for value in (0, 1, 2, 3, 8, 12, 15):
        with pytest.raises(ValueError):
            fold(value)
    assert fold(16).source_length == 5


def test_unfold_rejects_malformed_words():
    good = fold(0b1010011001101).symbols
    swapped = (good[2], good[1]) + (good[0],) + good[3:]
    with pytest.raises(ValueError):
        unfold(swapped)
    with pytest.raises(ValueError):
        unfold(good[:-1])  # no single run at all
    mixed = good[:-1] + (Symbol("a", (1, 1)),)
    with pytest.raises(ValueError):
        unfold(mixed)
    zero_top = good[:-1] + (Symbol("f", (0,)),)
    with pytest.raises(ValueError):
        unfold(zero_top)
    even_word = fold(43).symbols
    shuffled = even_word[:1] + (even_word[2], even_word[1]) + even_word[3:]
    with pytest.raises(ValueError):
        unfold(shuffled)
    # dropping a leading pair leaves a valid layout for a 2-bit-shorter value
    v = unfold(good)
    expected = ((v >> 1) & 31) | (((v >> 7) & 31) << 5) | (1 << 10)
    assert unfold(good[1:]) == expected
    assert isinstance(unfold(good[3:]), int)


def test_unfold_accepts_truncated_layouts():
    # c d e f is the 7-bit layout
    word = parse_word("[1,0]c [0,1]d [1,1]e 1f")
    assert unfold(word) == 110
    assert fold(110).symbols == word


def test_alphabet_sizes():
    assert len(alphabet_for("odd")) == 21
    assert len(alphabet_for("even")) == 27
    assert Symbol("f", (0,)) not in alphabet_for("odd")
    assert Symbol("i", (0,)) not in alphabet_for("even")


def count_words(nfa, length):
    vec = {q: 1 for q in nfa.initial}
    for _ in range(length):
        nxt = {}
        for q, c in vec.items():
            for sym_id, dsts in nfa.transitions[q].items():
                for d in dsts:
                    nxt[d] = nxt.get(d, 0) + c
        vec = nxt
    return sum(c for q, c in vec.items() if q in nfa.final)


def test_checker_state_counts():
    assert syntax_checker("odd", 13).num_states == 8
    assert syntax_checker("odd", 11).num_states == 7
    assert syntax_checker("even", 18).num_states == 12
    assert syntax_checker("even", 12).num_states == 9


def test_checker_bounds_are_validated():
    with pytest.raises(ValueError):
        syntax_checker("odd", 12)
    with pytest.raises(ValueError):
        syntax_checker("odd", 9)
    with pytest.raises(ValueError):
        syntax_checker("even", 13)
    with pytest.raises(ValueError):
        syntax_checker("even", 10)


def test_odd_checker_language():
    at_13 = syntax_checker("odd", 13)
    at_11 = syntax_checker("odd", 11)
    for value in range(1 << 12, 1 << 13):
        word = fold(value).symbols
        assert at_13.accepts(word)
        assert at_11.accepts(word)
    for value in range(1 << 10, 1 << 11):
        word = fold(value).symbols
        assert not at_13.accepts(word)
        assert at_11.accepts(word)
    for value in range(1 << 8, 1 << 9):
        assert not at_11.accepts(fold(value).symbols)


def test_even_checker_language():
    at_18 = syntax_checker("even", 18)
    at_12 = syntax_checker("even", 12)
    for value in range(1 << 11, 1 << 12):
        word = fold(value).symbols
        assert at_12.accepts(word)
        assert not at_18.accepts(word)
    rng = random.Random(21)
    for _ in range(500):
        value = rng.randrange(1 << 17, 1 << 18)
        word = fold(value).symbols
        assert at_18.accepts(word)
        assert at_12.accepts(word)


def test_checker_counts_match_fold_counts():
    # words with i pairs stand for n-bit numbers, 2**(n-1) of them
    odd = syntax_checker("odd", 13)
    assert count_words(odd, 6) == 0
    assert count_words(odd, 7) == 1 << 12
    assert count_words(odd, 8) == 1 << 14
    even = syntax_checker("even", 12)
    assert count_words(even, 7) == 0
    assert count_words(even, 8) == 1 << 11
    assert count_words(even, 9) == 1 << 13
    tall = syntax_checker("even", 18)
    assert count_words(tall, 10) == 0
    assert count_words(tall, 11) == 1 << 17


def test_render_parse_round_trip():
    for value in (43, 0b1010011001101, 0b110110001111001010):
        word = fold(value).symbols
        assert parse_word(render_word(word)) == word
    with pytest.raises(ValueError):
        parse_word("[2,0]a")
    with pytest.raises(ValueError):
        parse_word("1f extra?")


def test_folded_word_properties():
    w = fold(0b110110001111001010)
    assert isinstance(w, FoldedWord)
    assert w.parity == "even"
    assert w.source_length == 18
    assert w.pair_count == 7
