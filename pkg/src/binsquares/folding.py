"""Folding numbers into two-column tagged words.

An n-bit number is written least significant bit first and folded in half:
bit k and bit i+k travel together as the pair [high, low], leaving the top
bits as tagged singles.  Tags partition a word into zones, so a transition
can tell from the symbol alone how far along the fold it is.

Odd lengths n = 2i+1 fold into i pairs, tagged a...a b c d e, plus the
leading bit as the single 1f.  Even lengths n = 2i+4 fold the low 2i bits
into pairs tagged a b c...c d e and keep four singles f g h i, the last
being the leading 1.  Short words truncate the tag runs: the interior run
(a for odd, c for even) empties first, then b drops, then a.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .automata import Alphabet, Nfa, NfaBuilder, Symbol
from .numberforms import to_bits

PAIR_TAGS = ("a", "b", "c", "d", "e")
SINGLE_TAGS = {"odd": ("f",), "even": ("f", "g", "h", "i")}


def pair_tags(parity: str, pair_count: int) -> tuple[str, ...]:
    """Tag sequence for the pairs of a word with the given pair count."""
    if pair_count < 1:
        raise ValueError("a folded word has at least one pair")
    if parity == "odd":
        base = ("b", "c", "d", "e")
        if pair_count >= 4:
            return ("a",) * (pair_count - 4) + base
        return base[4 - pair_count:]
    if parity == "even":
        tail = ("d", "e")[max(0, 2 - pair_count):]
        room = pair_count - len(tail)
        head = ("a", "b")[: min(room, 2)]
        return head + ("c",) * (room - len(head)) + tail
    raise ValueError(f"unknown parity {parity!r}")


def _pair_symbols(tag: str) -> tuple[Symbol, ...]:
    return tuple(Symbol(tag, (hi, lo)) for hi in (0, 1) for lo in (0, 1))


@lru_cache(maxsize=None)
def alphabet_for(parity: str) -> Alphabet:
    """Full symbol set for one parity.

    Final singles exist only with bit 1: a canonical number always has a
    leading 1, so 0f (odd) and 0i (even) label no word at all.
    """
    symbols: list[Symbol] = []
    for tag in PAIR_TAGS:
        symbols.extend(_pair_symbols(tag))
    if parity == "odd":
        symbols.append(Symbol("f", (1,)))
    elif parity == "even":
        for tag in ("f", "g", "h"):
            symbols.append(Symbol(tag, (0,)))
            symbols.append(Symbol(tag, (1,)))
        symbols.append(Symbol("i", (1,)))
    else:
        raise ValueError(f"unknown parity {parity!r}")
    return Alphabet(symbols)


@dataclass(frozen=True)
class FoldedWord:
    parity: str
    symbols: tuple[Symbol, ...]

    @property
    def pair_count(self) -> int:
        return len(self.symbols) - len(SINGLE_TAGS[self.parity])

    @property
    def source_length(self) -> int:
        if self.parity == "odd":
            return 2 * self.pair_count + 1
        return 2 * self.pair_count + 4

    def value(self) -> int:
        return unfold(self.symbols)

    def render(self) -> str:
        return render_word(self.symbols)


def fold(value: int) -> FoldedWord:
    """Fold a positive number; needs 3 bits (odd) or 6 bits (even)."""
    bits = to_bits(value)
    n = len(bits)
    if n % 2 == 1:
        if n < 3:
            raise ValueError(f"odd fold needs at least 3 bits, got {n}")
        parity, i = "odd", (n - 1) // 2
    else:
        if n < 6:
            raise ValueError(f"even fold needs at least 6 bits, got {n}")
        parity, i = "even", (n - 4) // 2
    tags = pair_tags(parity, i)
    symbols = [
        Symbol(tags[k], (bits[i + k], bits[k])) for k in range(i)
    ]
    symbols.extend(
        Symbol(tag, (bits[2 * i + t],))
        for t, tag in enumerate(SINGLE_TAGS[parity])
    )
    return FoldedWord(parity, tuple(symbols))


def unfold(symbols: Iterable[Symbol]) -> int:
    """Value of a folded word; rejects malformed tag layouts."""
    word = tuple(symbols)
    split = 0
    while split < len(word) and word[split].is_pair:
        split += 1
    pairs, singles = word[:split], word[split:]
    if any(s.is_pair for s in singles):
        raise ValueError("pair symbol after a single")
    single_tags = tuple(s.tag for s in singles)
    for parity, expected in SINGLE_TAGS.items():
        if single_tags == expected:
            break
    else:
        raise ValueError(f"unrecognized single run {single_tags!r}")
    i = len(pairs)
    if i < 1:
        raise ValueError("a folded word has at least one pair")
    got_tags = tuple(p.tag for p in pairs)
    if got_tags != pair_tags(parity, i):
        raise ValueError(f"pair tags {got_tags!r} do not fit length {i}")
    if singles[-1].bits[0] != 1:
        raise ValueError("leading bit of a folded word must be 1")
    value = 0
    for k, p in enumerate(pairs):
        value |= p.bits[1] << k
        value |= p.bits[0] << (i + k)
    for t, s in enumerate(singles):
        value |= s.bits[0] << (2 * i + t)
    return value


def syntax_checker(parity: str, min_source_length: int) -> Nfa:
    """Chain recognizer for all folds of the parity at or above a length.

    The interior tag run absorbs the slack: every extra two bits of source
    add one more interior pair, so one looping state covers all lengths.
    """
    alphabet = alphabet_for(parity)
    builder = NfaBuilder(alphabet)
    if parity == "odd":
        if min_source_length % 2 == 0 or min_source_length < 11:
            raise ValueError("odd checker needs an odd bound of at least 11")
        mandatory = (min_source_length - 1) // 2 - 4
        chain = ["a"] * mandatory + ["b", "c", "d", "e"]
        loop_at, loop_tag = mandatory, "a"
        tail = [("f", (1,))]
    elif parity == "even":
        if min_source_length % 2 == 1 or min_source_length < 12:
            raise ValueError("even checker needs an even bound of at least 12")
        mandatory = (min_source_length - 4) // 2 - 4
        chain = ["a", "b"] + ["c"] * mandatory + ["d", "e"]
        loop_at, loop_tag = 2 + mandatory, "c"
        tail = [("f", (0,)), ("f", (1,)), ("g", (0,)), ("g", (1,)),
                ("h", (0,)), ("h", (1,)), ("i", (1,))]
    else:
        raise ValueError(f"unknown parity {parity!r}")
    builder.mark_initial(0)
    for step, tag in enumerate(chain):
        for symbol in _pair_symbols(tag):
            builder.add_edge(step, symbol, step + 1)
    for symbol in _pair_symbols(loop_tag):
        builder.add_edge(loop_at, symbol, loop_at)
    state = len(chain)
    singles: dict[str, list[tuple[int, ...]]] = {}
    for tag, bits in tail:
        singles.setdefault(tag, []).append(bits)
    for tag in SINGLE_TAGS[parity]:
        for bits in singles[tag]:
            builder.add_edge(state, Symbol(tag, bits), state + 1)
        state += 1
    builder.mark_final(state)
    return builder.build()


def render_word(symbols: Iterable[Symbol]) -> str:
    return " ".join(s.render() for s in symbols)


_PAIR_TOKEN = re.compile(r"^\[([01]),([01])\]([a-z])$")
_SINGLE_TOKEN = re.compile(r"^([01])([a-z])$")


def parse_word(text: str) -> tuple[Symbol, ...]:
    """Inverse of :func:`render_word`; whitespace separates symbols."""
    symbols: list[Symbol] = []
    for token in text.split():
        m = _PAIR_TOKEN.match(token)
        if m:
            symbols.append(Symbol(m.group(3), (int(m.group(1)), int(m.group(2)))))
            continue
        m = _SINGLE_TOKEN.match(token)
        if m:
            symbols.append(Symbol(m.group(2), (int(m.group(1)),)))
            continue
        raise ValueError(f"unrecognized symbol token {token!r}")
    return tuple(symbols)
