"""Explicit decompositions with certificates.

Small inputs go through the exhaustive sumset tables.  Large inputs fold
into a tagged word and run through a machine family's disjoint union in a
single pass: the accepting path lands inside exactly one member, the
per-edge guess records along that path rebuild each summand's digit
stream, and unstacking the streams gives the parts.  Every returned
decomposition is re-verified by predicate and sum before it leaves this
module."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache

from .automata import union
from .folding import fold
from .lemma_machines import alignment, family_members
from .numberforms import (
    GroundSetKind,
    is_binary_square,
    is_generalized_binary_square,
    is_power_of_two,
)
from .oracle import decompose_brute, sumset_table

ROLE_SQUARE = "BinarySquare"
ROLE_GENERALIZED = "GeneralizedBinarySquare"
ROLE_POWER = "PowerOfTwo"

_MACHINE_FLOOR = 1 << 17  # four-squares families are verified from 18 bits up
_SHORT_FLOOR = 1 << 10  # mixed and generalized families from 11 bits up
_LAST_EXCEPTION = 686


class NotRepresentable(ValueError):
    """The value has no decomposition of the requested shape."""

    def __init__(self, value: int, kind: str) -> None:
        super().__init__(f"{value} is not a sum of {kind}")
        self.value = value
        self.kind = kind


class InvalidInput(ValueError):
    """The value lies outside the operation's stated domain."""


@dataclass(frozen=True)
class Decomposition:
    """A target with its certified parts, each tagged by role."""

    target: int
    parts: tuple[tuple[int, str], ...]
    profile: str = ""
    states_visited: int = 0

    def values(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.parts)

    def verify(self) -> None:
        if sum(self.values()) != self.target:
            raise AssertionError(f"parts do not sum to {self.target}")
        for value, role in self.parts:
            if role == ROLE_SQUARE:
                ok = value == 0 or is_binary_square(value)
            elif role == ROLE_GENERALIZED:
                ok = is_generalized_binary_square(value)
            elif role == ROLE_POWER:
                ok = is_power_of_two(value)
            else:
                ok = False
            if not ok:
                raise AssertionError(f"part {value} fails its {role} predicate")


# -- machine-path plumbing -------------------------------------------------


def _accepting_path(nfa, symbols) -> tuple[list[int] | None, int]:
    """Simulate the word, keeping parent pointers; the product with the
    word's singleton machine never materializes beyond one frontier."""
    ids = [nfa.alphabet.id_of(s) for s in symbols]
    layers: list[dict[int, int]] = [{s: -1 for s in sorted(nfa.initial)}]
    visited = len(layers[0])
    for sid in ids:
        nxt: dict[int, int] = {}
        for st in layers[-1]:
            for d in sorted(nfa.transitions[st].get(sid, ())):
                nxt.setdefault(d, st)
        if not nxt:
            return None, visited
        layers.append(nxt)
        visited += len(nxt)
    finals = sorted(st for st in layers[-1] if st in nfa.final)
    if not finals:
        return None, visited
    states = [finals[0]]
    for layer in reversed(layers[1:]):
        states.append(layer[states[-1]])
    states.reverse()
    return states, visited


def _replay(profile, nfa, word, states):
    """Decode one accepting path into digit streams and power columns."""
    i = word.pair_count
    active = [s for s in profile.summands if s.count]
    aligns = [alignment(profile.parity, s.offset) for s in active]
    digits = [[0] * (i + a) for a in aligns]
    power_columns: list[int] = []
    for k, sym in enumerate(word.symbols):
        sid = nfa.alphabet.id_of(sym)
        guesses, inj_lo, inj_hi = nfa.edge_data[(states[k], sid, states[k + 1])]
        if sym.is_pair:
            for idx, records in enumerate(guesses):
                for site, value in records:
                    if site == "lo":
                        digits[idx][k] = value
                    elif site == "hi":
                        digits[idx][k - aligns[idx]] = value
                    else:
                        digits[idx][i + k] = value
            power_columns += [k] * inj_lo + [i + k] * inj_hi
        else:
            power_columns += [k + i] * inj_lo
    squares: list[int] = []
    for s, a, stream in zip(active, aligns, digits):
        h = i + a
        for r in range(s.count):
            root = 0
            for j, d in enumerate(stream):
                if d > r:
                    root |= 1 << j
            squares.append(root * ((1 << h) + 1))
    return squares, [1 << c for c in power_columns]


@lru_cache(maxsize=None)
def _family_runtime(family: str):
    """Disjoint union of a family's members plus the member id boundaries."""
    members = family_members(family)
    machines = [nfa for _, nfa in members]
    starts = []
    total = 0
    for nfa in machines:
        starts.append(total)
        total += len(nfa.transitions)
    return members, tuple(starts), union(machines)


def _machine_decompose(value: int, family: str):
    word = fold(value)
    members, starts, combined = _family_runtime(family)
    states, visited = _accepting_path(combined, word.symbols)
    if states is None:
        raise NotRepresentable(value, family)
    # a disjoint-union path stays inside one member from start to finish
    profile = members[bisect_right(starts, states[0]) - 1][0]
    squares, powers = _replay(profile, combined, word, states)
    return squares, powers, profile.label, visited


# -- cached small tables ---------------------------------------------------


@lru_cache(maxsize=None)
def _square_pairs_table():
    return sumset_table(GroundSetKind.BINARY_SQUARE, _SHORT_FLOOR, max_k=2)


def _final(target, raw_parts, role, profile="", visited=0) -> Decomposition:
    dec = Decomposition(target, tuple((v, role) for v in raw_parts), profile, visited)
    dec.verify()
    return dec


# -- public operations -----------------------------------------------------


def decompose(value: int) -> Decomposition:
    """Four binary squares summing to a value above the exception range."""
    if value < 0:
        raise InvalidInput("value must be a natural number")
    if value <= _LAST_EXCEPTION:
        parts = decompose_brute(value, GroundSetKind.BINARY_SQUARE, 4)
        if parts is None:
            raise NotRepresentable(value, "four binary squares")
        raise InvalidInput(f"{value} is below the guaranteed range (> 686)")
    if value < _MACHINE_FLOOR:
        parts = decompose_brute(value, GroundSetKind.BINARY_SQUARE, 4)
        if parts is None:
            raise AssertionError(f"{value} unexpectedly unrepresentable")
        return _final(value, parts, ROLE_SQUARE)
    family = "a-odd" if value.bit_length() % 2 else "a-even"
    squares, powers, label, visited = _machine_decompose(value, family)
    assert not powers
    squares += [0] * (4 - len(squares))
    dec = _final(value, squares, ROLE_SQUARE, label, visited)
    if len(dec.parts) != 4:
        raise AssertionError("four-squares mode must produce four parts")
    return dec


def decompose_square_power(value: int) -> Decomposition:
    """At most two binary squares plus at most two powers of two."""
    if value < 0:
        raise InvalidInput("value must be a natural number")
    if value < _SHORT_FLOOR:
        table = _square_pairs_table()
        pads = [()] + [((1 << a),) for a in range(10)]
        pads += [
            ((1 << a), (1 << b)) for a in range(10) for b in range(a, 10)
        ]
        for pad in pads:
            rest = value - sum(pad)
            if rest < 0 or not table.contains(2, rest):
                continue
            squares = decompose_brute(rest, GroundSetKind.BINARY_SQUARE, 2)
            parts = [(v, ROLE_SQUARE) for v in squares if v]
            parts += [(p, ROLE_POWER) for p in pad]
            dec = Decomposition(value, tuple(parts))
            dec.verify()
            return dec
        raise NotRepresentable(value, "two squares and two powers")
    family = f"square-power-{'odd' if value.bit_length() % 2 else 'even'}"
    squares, powers, label, visited = _machine_decompose(value, family)
    parts = [(v, ROLE_SQUARE) for v in squares] + [(p, ROLE_POWER) for p in powers]
    dec = Decomposition(value, tuple(parts), label, visited)
    dec.verify()
    return dec


def decompose_generalized(value: int) -> Decomposition:
    """Exactly three generalized binary squares (zeros count)."""
    if value < 0:
        raise InvalidInput("value must be a natural number")
    if value < _SHORT_FLOOR:
        parts = decompose_brute(value, GroundSetKind.GENERALIZED_BINARY_SQUARE, 3)
        if parts is None:
            raise NotRepresentable(value, "three generalized binary squares")
        return _final(value, parts, ROLE_GENERALIZED)
    family = f"generalized-{'odd' if value.bit_length() % 2 else 'even'}"
    squares, powers, label, visited = _machine_decompose(value, family)
    assert not powers and len(squares) == 3
    return _final(value, squares, ROLE_GENERALIZED, label, visited)


def render_part(value: int, role: str) -> str:
    """Text form with the repeated-half structure made visible."""
    if value == 0:
        return "0"
    bits = format(value, "b")
    if role == ROLE_POWER:
        return f"{value} = {bits}"
    width = _half_width(value)
    a = value // ((1 << width) + 1)
    half = format(a, "b").zfill(width)
    return f"{value} = {bits} = ({half})({half})"


def _half_width(value: int) -> int:
    for width in range(1, value.bit_length() + 1):
        block = (1 << width) + 1
        if value % block == 0 and value // block < 1 << width:
            return width
    raise ValueError(f"{value} has no repeated-half form")
