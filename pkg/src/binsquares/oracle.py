"""Exhaustive bitset arithmetic over the additive ground sets.

Reachability tables are big-integer bitmasks: bit N of ``reach[k]`` is set
when N is a sum of at most k ground-set members (exactly k once the ground
set contains 0, as it does for both square kinds).  Building a level is a
shift-or sweep over the ground set, so bounds around 2**17 cost milliseconds.

Everything here is deliberately independent of the automata modules; these
tables are the oracle the machine constructions are validated against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numberforms import (
    GroundSetKind,
    ground_set_upto,
    is_binary_square,
    squares_of_length,
)


def _shift_or_level(prev: int, ground: list[int], mask: int) -> int:
    acc = 0
    for g in ground:
        acc |= prev << g
    return acc & mask


@dataclass(frozen=True)
class SumsetTable:
    """Reachability masks for sums of up to ``max_k`` ground-set members."""

    kind: GroundSetKind
    bound: int
    max_k: int
    reach: tuple[int, ...]  # reach[k] for k = 0 .. max_k

    def contains(self, k: int, value: int) -> bool:
        if not 0 <= value < self.bound:
            raise ValueError(f"value {value} outside [0, {self.bound})")
        return bool(self.reach[k] >> value & 1)

    def count(self, k: int) -> int:
        return bin(self.reach[k]).count("1")

    def missing(self, k: int) -> list[int]:
        """Values in [0, bound) that are not a sum of k members."""
        mask = (1 << self.bound) - 1
        return _bit_positions(~self.reach[k] & mask)


def _bit_positions(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def sumset_table(
    kind: GroundSetKind,
    bound: int,
    max_k: int = 4,
    include_zero: bool = True,
) -> SumsetTable:
    """Build reachability masks.  ``include_zero=False`` drops 0 from the
    ground set, turning level k into sums of exactly k positive members."""
    if bound <= 0 or max_k < 0:
        raise ValueError("bound must be positive and max_k non-negative")
    ground = ground_set_upto(kind, bound)
    if not include_zero:
        ground = [g for g in ground if g]
    mask = (1 << bound) - 1
    levels = [1]  # only the empty sum
    for _ in range(max_k):
        levels.append(_shift_or_level(levels[-1], ground, mask))
    return SumsetTable(kind=kind, bound=bound, max_k=max_k, reach=tuple(levels))


def four_squares_counts(bound: int) -> list[int]:
    """Counts of integers in [0, bound) that are sums of up to k binary
    squares, for k = 1..4."""
    table = sumset_table(GroundSetKind.BINARY_SQUARE, bound, 4)
    return [table.count(k) for k in range(1, 5)]


def exceptions_four_squares(bound: int) -> list[int]:
    """Integers in [0, bound) that are not the sum of four binary squares."""
    table = sumset_table(GroundSetKind.BINARY_SQUARE, bound, 4)
    return table.missing(4)


def exceptions_exact_four_positive(bound: int) -> list[int]:
    """Integers in [0, bound) with no expression as a sum of exactly four
    positive binary squares."""
    table = sumset_table(GroundSetKind.BINARY_SQUARE, bound, 4, include_zero=False)
    return table.missing(4)


def two_squares_density(m: int, table: SumsetTable | None = None) -> Fraction:
    """|{x : 1 <= x <= m, x is a sum of two binary squares}| / m, exactly."""
    if m < 1:
        raise ValueError("m must be positive")
    if table is None or table.bound <= m:
        table = sumset_table(GroundSetKind.BINARY_SQUARE, m + 1, 2)
    window = table.reach[2] >> 1  # drop x = 0
    window &= (1 << m) - 1
    return Fraction(bin(window).count("1"), m)


def lower_density_estimate(bound: int) -> Fraction:
    """Estimator for the lower asymptotic density of the two-square sums.

    The ratio |S2 cap [1, m]| / m oscillates with period 4x in m, so the
    liminf is approximated by the minimum ratio over the final full period
    [bound/4, bound).  Pointwise ratios at round powers sit near the top of
    the oscillation and are not representative.
    """
    if bound < 8:
        raise ValueError("bound too small for a full period")
    table = sumset_table(GroundSetKind.BINARY_SQUARE, bound, 2)
    member = table.reach[2]
    lo = bound // 4
    count = bin(member & ((1 << (lo + 1)) - 1)).count("1")
    if member & 1:
        count -= 1
    best = Fraction(count, lo)
    for m in range(lo + 1, bound):
        count += member >> m & 1
        ratio = Fraction(count, m)
        if ratio < best:
            best = ratio
    return best


def density_floor_holds(lo: int, hi: int, ratio: Fraction) -> bool:
    """Whether the two-square density is >= ratio for every m in [lo, hi)."""
    table = sumset_table(GroundSetKind.BINARY_SQUARE, hi, 2)
    member = table.reach[2]
    count = bin(member & ((1 << (lo + 1)) - 1)).count("1")
    if member & 1:
        count -= 1  # x = 0 is outside the counted window
    p, q = ratio.numerator, ratio.denominator
    for m in range(lo, hi):
        if m > lo:
            count += member >> m & 1
        if q * count < p * m:
            return False
    return True


def sumset_uniqueness(n: int) -> int:
    """Cardinality of {s + t : s a square of length 2n, t of length 2n+2}.

    Distinctness of all pairwise sums makes this 2**(2n-1).
    """
    if not 1 <= n <= 12:
        raise ValueError("n must be in [1, 12]")
    left = squares_of_length(2 * n)
    right = squares_of_length(2 * n + 2)
    return len({s + t for s in left for t in right})


def residue_formula(m: int, g: int, c: int) -> int:
    """c(2**g + 1) mod (2**m + 1), written without reduction.

    With c = t*2**(m-g) + u the value is t(2**(m-g) - 1) + u(2**g + 1);
    valid for m/2 < g < m and 2**(g-1) <= c < 2**g.
    """
    if not (0 < g < m and 2 * g > m):
        raise ValueError("need m/2 < g < m")
    if not (1 << (g - 1)) <= c < (1 << g):
        raise ValueError("need 2**(g-1) <= c < 2**g")
    t, u = divmod(c, 1 << (m - g))
    return t * ((1 << (m - g)) - 1) + u * ((1 << g) + 1)


def congruence_two_solutions(max_m: int) -> list[tuple[int, int]]:
    """(m, g) pairs admitting c with c(2**g + 1) == 2 (mod 2**m + 1) in the
    range of :func:`residue_formula`."""
    found = []
    for m in range(2, max_m + 1):
        for g in range(m // 2 + 1, m):
            for c in range(1 << (g - 1), 1 << g):
                if residue_formula(m, g, c) == 2:
                    found.append((m, g))
                    break
    return found


def power_of_two_short_representations(n: int) -> list[tuple[int, ...]]:
    """All multisets of at most 3 positive binary squares summing to 2**n,
    each sorted descending."""
    target = 1 << n
    positives = [
        v
        for v in ground_set_upto(GroundSetKind.BINARY_SQUARE, target + 1)
        if 0 < v <= target
    ]
    members = set(positives)
    out = []
    if target in members:
        out.append((target,))
    for idx, a in enumerate(positives):
        rest = target - a
        if rest < a:
            break
        if rest in members and rest >= a:
            out.append((rest, a))
        for b in positives[idx:]:
            c = target - a - b
            if c < b:
                break
            if c in members:
                out.append((c, b, a))
    return out


def optimality_check(max_n: int) -> dict[int, list[tuple[int, ...]]]:
    """For odd n <= max_n, the representations of 2**n as sums of at most 3
    positive binary squares.  Empty list = no representation."""
    if max_n > 25:
        raise ValueError("max_n above 25 is not supported")
    return {
        n: power_of_two_short_representations(n) for n in range(1, max_n + 1, 2)
    }


def decompose_brute(
    value: int, kind: GroundSetKind, k: int, include_zero: bool = True
) -> list[int] | None:
    """One length-k summand list over the ground set, or None.

    Searches greedily from the largest member, guided by reachability masks
    so dead branches are never entered; instant for bounds up to ~2**20 and
    workable to 2**24.
    """
    if value < 0 or value >= 1 << 24:
        raise ValueError("value must lie in [0, 2**24)")
    if k == 0:
        return [] if value == 0 else None
    bound = value + 1
    ground = ground_set_upto(kind, bound)
    if not include_zero:
        ground = [g for g in ground if g]
    mask = (1 << bound) - 1
    levels = [1]
    for _ in range(k):
        levels.append(_shift_or_level(levels[-1], ground, mask))
    if not levels[k] >> value & 1:
        return None
    parts = []
    remaining = value
    for level in range(k, 0, -1):
        for g in reversed(ground):
            if g <= remaining and levels[level - 1] >> (remaining - g) & 1:
                parts.append(g)
                remaining -= g
                break
        else:
            raise AssertionError("reachable value lost during backtracking")
    assert remaining == 0
    return parts


def profile_sum_mask(
    length_counts: list[tuple[int, int]], bound: int, generalized: bool = False
) -> int:
    """Bitmask of sums using exactly ``count`` squares of each exact canonical
    length (generalized: any half-block value, padded length).

    ``length_counts`` pairs are (canonical length, count) with even lengths.
    """
    mask = (1 << bound) - 1
    acc = 1
    for two_n, count in length_counts:
        if two_n % 2 or two_n <= 0:
            raise ValueError("summand lengths must be positive and even")
        n = two_n // 2
        if generalized:
            block = [a * ((1 << n) + 1) for a in range(1 << n)]
        else:
            block = squares_of_length(two_n)
        for _ in range(count):
            acc = _shift_or_level(acc, block, mask)
            if not acc:
                break
    return acc


def square_power_mask(bound: int, max_squares: int = 2, max_powers: int = 2) -> int:
    """Bitmask of sums of at most ``max_squares`` binary squares plus at most
    ``max_powers`` powers of two."""
    mask = (1 << bound) - 1
    acc = sumset_table(GroundSetKind.BINARY_SQUARE, bound, max_squares).reach[
        max_squares
    ]
    powers = ground_set_upto(GroundSetKind.POWER_OF_TWO, bound)
    for _ in range(max_powers):
        acc |= _shift_or_level(acc, powers, mask)
    return acc


def verify_is_binary_square_consistency(bound: int) -> bool:
    """Membership agreement between the divisor test and ground-set sweep."""
    members = set(ground_set_upto(GroundSetKind.BINARY_SQUARE, bound))
    return all((v in members) == is_binary_square(v) for v in range(bound))
