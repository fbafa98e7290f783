import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest

from binsquares.numberforms import (
    GroundSetKind,
    ground_set_upto,
    is_binary_square,
    is_generalized_binary_square,
)
from binsquares.oracle import (
    congruence_two_solutions,
    decompose_brute,
    density_floor_holds,
    exceptions_exact_four_positive,
    exceptions_four_squares,
    four_squares_counts,
    lower_density_estimate,
    optimality_check,
    profile_sum_mask,
    residue_formula,
    square_power_mask,
    sumset_table,
    sumset_uniqueness,
    two_squares_density,
    verify_is_binary_square_consistency,
)

DATA = Path(__file__).parent / "data"


def golden_ints(name: str) -> list[int]:
    return [int(line) for line in (DATA / name).read_text().splitlines()]


def test_counts_below_2_17():
    assert four_squares_counts(1 << 17) == [256, 19542, 95422, 131016]


def test_exception_list_below_2_17():
    expected = golden_ints("four_squares_exceptions.txt")
    assert exceptions_four_squares(1 << 17) == expected
    assert len(expected) == 56 and expected[-1] == 686


def test_exceptions_stable_at_larger_bound():
    assert exceptions_four_squares(1 << 11) == golden_ints(
        "four_squares_exceptions.txt"
    )


def test_exact_four_positive_exceptions():
    expected = golden_ints("exact_four_positive_exceptions.txt")
    assert exceptions_exact_four_positive(1 << 13) == expected
    assert len(expected) == 112 and expected[-1] == 1772


def test_table_matches_nested_loops_small():
    bound = 1 << 10
    ground = ground_set_upto(GroundSetKind.BINARY_SQUARE, bound)
    table = sumset_table(GroundSetKind.BINARY_SQUARE, bound, 4)
    for k in (2, 3, 4):
        brute = {
            sum(combo)
            for combo in itertools.combinations_with_replacement(ground, k)
            if sum(combo) < bound
        }
        assert {v for v in range(bound) if table.contains(k, v)} == brute


def test_monotone_levels():
    table = sumset_table(GroundSetKind.BINARY_SQUARE, 1 << 12, 4)
    for k in range(4):
        assert table.reach[k] | table.reach[k + 1] == table.reach[k + 1]


def test_generalized_triples_cover_above_seven():
    table = sumset_table(GroundSetKind.GENERALIZED_BINARY_SQUARE, 1 << 12, 3)
    missing = table.missing(3)
    assert [v for v in missing if v <= 7] == [1, 2, 4, 7]
    assert all(v <= 7 for v in missing)


def test_square_power_mask_covers_all_small():
    mask = square_power_mask(1 << 12)
    assert mask == (1 << (1 << 12)) - 1


def test_density_example_window():
    d = two_squares_density(14)
    assert d == Fraction(4, 14)  # {3, 6, 10, 13}


def test_density_floor():
    assert density_floor_holds(14, 1 << 14, Fraction(1, 40))


def test_lower_density_near_point_14():
    d = lower_density_estimate(1 << 18)
    assert Fraction(12, 100) <= d <= Fraction(16, 100)


def test_uniqueness_counts():
    for n in range(1, 9):
        assert sumset_uniqueness(n) == 1 << (2 * n - 1)


def test_residue_formula_examples():
    assert residue_formula(4, 3, 4) == 2
    assert residue_formula(4, 3, 7) == 63 % 17


def test_residue_formula_matches_direct_mod():
    for m in range(2, 17):
        for g in range(m // 2 + 1, m):
            for c in range(1 << (g - 1), 1 << g):
                direct = (c * ((1 << g) + 1)) % ((1 << m) + 1)
                assert residue_formula(m, g, c) == direct, (m, g, c)


def test_residue_minimum_at_half_range():
    for m in range(2, 15):
        for g in range(m // 2 + 1, m):
            values = [
                residue_formula(m, g, c) for c in range(1 << (g - 1), 1 << g)
            ]
            assert min(values) == values[0]
            assert values[0] == (1 << (2 * g - m - 1)) * ((1 << (m - g)) - 1)


def test_congruence_two_only_solution():
    assert congruence_two_solutions(16) == [(4, 3)]


def test_optimality_of_four():
    reps = optimality_check(25)
    for n, found in reps.items():
        if n == 9:
            assert found, "2**9 should have short representations"
            assert (255, 221, 36) in found and (238, 238, 36) in found
            for combo in found:
                assert sum(combo) == 512
                assert all(is_binary_square(v) and v > 0 for v in combo)
        else:
            assert found == [], f"2**{n} unexpectedly representable"


def test_decompose_brute_round_trip():
    rng = random.Random(2026)
    table = sumset_table(GroundSetKind.BINARY_SQUARE, 1 << 14, 4)
    for _ in range(120):
        v = rng.randrange(1 << 14)
        parts = decompose_brute(v, GroundSetKind.BINARY_SQUARE, 4)
        if table.contains(4, v):
            assert parts is not None and len(parts) == 4
            assert sum(parts) == v
            assert all(is_binary_square(p) for p in parts)
        else:
            assert parts is None


def test_decompose_brute_generalized():
    parts = decompose_brute(686, GroundSetKind.GENERALIZED_BINARY_SQUARE, 3)
    assert parts is not None and sum(parts) == 686
    assert all(is_generalized_binary_square(p) for p in parts)


def test_profile_mask_small():
    # sums of one length-4 square and one length-6 square
    mask = profile_sum_mask([(4, 1), (6, 1)], 128)
    squares4 = {10, 15}
    squares6 = {36, 45, 54, 63}
    expected = {a + b for a in squares4 for b in squares6 if a + b < 128}
    assert {v for v in range(128) if mask >> v & 1} == expected


def test_predicate_ground_set_agreement():
    assert verify_is_binary_square_consistency(1 << 12)


def test_exact_table_counts_strictly_increase():
    table = sumset_table(GroundSetKind.BINARY_SQUARE, 1 << 12, 4)
    counts = [table.count(k) for k in range(1, 5)]
    assert counts == sorted(counts)
    assert counts[0] < counts[3]


def test_invalid_inputs():
    with pytest.raises(ValueError):
        sumset_table(GroundSetKind.BINARY_SQUARE, 0, 4)
    with pytest.raises(ValueError):
        two_squares_density(0)
    with pytest.raises(ValueError):
        residue_formula(4, 2, 2)
    with pytest.raises(ValueError):
        sumset_uniqueness(0)
