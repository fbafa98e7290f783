"""Machine generator against the independent sumset oracle.

Every exactness test enumerates a machine's full accept set at some source
length and compares it with brute-force sums computed by the oracle, so the
two sides share no code path."""

import pytest

from binsquares.automata import includes
from binsquares.folding import syntax_checker
from binsquares.lemma_machines import (
    FAMILY_NAMES,
    Profile,
    Summand,
    accept_set,
    alignment,
    build_profile_machine,
    digit_step,
    even_square_profiles,
    family_members,
    family_union,
    fixed_machine,
    generalized_profiles,
    machine_manifest,
    odd_square_profiles,
    square_power_profiles,
    uniform_machine,
)
from binsquares.oracle import profile_sum_mask


def window(mask: int, n: int) -> set[int]:
    return {v for v in range(1 << (n - 1), 1 << n) if mask >> v & 1}


def union_accepts(parity, summands, carries, n, max_powers=0, fixed=False):
    got = set()
    for m in carries:
        if fixed:
            nfa = fixed_machine(parity, n, summands, m, max_powers)
        else:
            nfa = uniform_machine(parity, summands, m, max_powers)
        got |= accept_set(nfa, parity, n)
    return got


def test_digit_step():
    assert digit_step((0,), 0) == (0, 0)
    assert digit_step((1, 1, 1), 1) == (0, 2)
    assert digit_step((2, 3), 2) == (1, 3)


def test_alignment_mapping():
    assert [alignment("odd", o) for o in (-1, 1, 3, 5)] == [1, 0, -1, -2]
    assert [alignment("even", o) for o in (0, 2, 4, 6)] == [2, 1, 0, -1]
    with pytest.raises(ValueError):
        alignment("odd", 2)
    with pytest.raises(ValueError):
        alignment("even", 3)
    with pytest.raises(ValueError):
        alignment("odd", 7)
    with pytest.raises(ValueError):
        alignment("even", -2)


def test_wider_odd_summand_needs_zero_top():
    with pytest.raises(ValueError):
        uniform_machine("odd", (Summand(-1, 1, "free"),), 0)
    uniform_machine("odd", (Summand(-1, 1, "zero"),), 0)


ODD_SHAPES = [
    ((1, 1), 2),
    ((2, 1), 3),
    ((1, 2), 3),
    ((1, 1, 1), 3),
    ((2, 2), 4),
    ((2, 1, 1), 4),
]
EVEN_SHAPES = [
    ((0, 2, 2, 0), 4),
    ((0, 3, 1, 0), 4),
    ((1, 0, 1, 1), 3),
    ((0, 2, 1, 1), 4),
]


@pytest.mark.parametrize("n", [11, 13, 15])
@pytest.mark.parametrize("counts,total", ODD_SHAPES)
def test_odd_profile_exact(n, counts, total):
    offsets = (1, 3, 5)
    summands = tuple(Summand(offsets[k], c) for k, c in enumerate(counts) if c)
    pairs = [(n - offsets[k], c) for k, c in enumerate(counts) if c]
    expect = window(profile_sum_mask(pairs, 1 << n), n)
    got = union_accepts("odd", summands, range(total), n)
    assert got == expect


@pytest.mark.parametrize("n", [12, 14])
@pytest.mark.parametrize("counts,total", EVEN_SHAPES)
def test_even_profile_exact(n, counts, total):
    offsets = (0, 2, 4, 6)
    summands = tuple(Summand(offsets[k], c) for k, c in enumerate(counts) if c)
    pairs = [(n - offsets[k], c) for k, c in enumerate(counts) if c]
    expect = window(profile_sum_mask(pairs, 1 << n), n)
    got = union_accepts("even", summands, range(total), n)
    assert got == expect


@pytest.mark.parametrize(
    "parity,n,pairs",
    [
        ("odd", 11, [(12, 1), (10, 1), (8, 1)]),
        ("odd", 13, [(14, 1), (12, 1), (10, 1)]),
        ("even", 12, [(12, 1), (10, 1), (8, 1)]),
        ("even", 14, [(14, 1), (12, 1), (10, 1)]),
    ],
)
def test_generalized_exact(parity, n, pairs):
    expect = window(profile_sum_mask(pairs, 1 << (n + 2), generalized=True), n)
    got = set()
    for p in generalized_profiles(parity):
        got |= accept_set(build_profile_machine(p), parity, n)
    assert got == expect
    # three free halves reach every value of these lengths
    assert len(got) == 1 << (n - 1)


def power_pads(n: int) -> set[int]:
    pads = {0}
    pads |= {1 << a for a in range(n)}
    pads |= {(1 << a) + (1 << b) for a in range(n) for b in range(a, n)}
    return pads


@pytest.mark.parametrize("parity,n", [("odd", 11), ("odd", 13), ("even", 12)])
def test_square_power_family_exact(parity, n):
    if parity == "odd":
        combos, offs = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)], (1, 3)
    else:
        combos = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)]
        offs = (0, 2, 4)
    expect_mask = 0
    for combo in combos:
        pairs = [(n - o, c) for o, c in zip(offs, combo) if c]
        base = profile_sum_mask(pairs, 1 << n) if pairs else 1
        for pad in power_pads(n):
            expect_mask |= base << pad
    expect = window(expect_mask, n)
    got = set()
    for p in square_power_profiles(parity):
        got |= accept_set(build_profile_machine(p), parity, n)
    assert got == expect


def test_square_power_single_member_sound():
    # one combo alone must not exceed its own sums: a sharper check than
    # the family union, which covers everything at these lengths
    n = 13
    base = profile_sum_mask([(12, 1)], 1 << n)
    expect_mask = 0
    for pad in power_pads(n):
        expect_mask |= base << pad
    expect = window(expect_mask, n)
    got = union_accepts("odd", (Summand(1, 1),), range(3), n, max_powers=2)
    assert got == expect


@pytest.mark.parametrize(
    "parity,n,summands,m",
    [
        ("odd", 13, (Summand(1, 1), Summand(3, 1), Summand(5, 1)), 1),
        ("odd", 11, (Summand(1, 2), Summand(3, 1)), 2),
        ("even", 12, (Summand(0, 1), Summand(4, 1), Summand(6, 1)), 0),
        ("even", 14, (Summand(2, 2), Summand(4, 2)), 3),
        ("even", 12, (Summand(2, 3), Summand(4, 1)), 1),
    ],
)
def test_uniform_and_fixed_agree(parity, n, summands, m):
    u = accept_set(uniform_machine(parity, summands, m), parity, n)
    f = accept_set(fixed_machine(parity, n, summands, m), parity, n)
    assert u == f


@pytest.mark.parametrize("n,ta,te", [(8, 3, 4), (10, 2, 4), (10, 3, 3)])
def test_fixed_short_lengths_exact(n, ta, te):
    # up-to counts expand into unions over exact counts
    expect_mask = 0
    got = set()
    for ca in range(ta + 1):
        for ce in range(te + 1):
            pairs = [(n - 4, ca), (n - 2, ce)]
            pairs = [p for p in pairs if p[1]]
            if not pairs:
                continue
            expect_mask |= profile_sum_mask(pairs, 1 << n)
            summands = tuple(
                s for s in (Summand(4, ca), Summand(2, ce)) if s.count
            )
            for m in range(ca + ce):
                got |= accept_set(fixed_machine("even", n, summands, m), "even", n)
    assert got == window(expect_mask, n)


def test_fixed_machine_rejects_cramped_layouts():
    with pytest.raises(ValueError):
        fixed_machine("odd", 5, (Summand(5, 1),), 0)  # needs i >= 4
    with pytest.raises(ValueError):
        fixed_machine("even", 6, (Summand(0, 1),), 0)  # needs i >= 2
    fixed_machine("even", 8, (Summand(0, 1),), 0)


def test_family_member_counts():
    assert len(odd_square_profiles()) == 19
    assert len(even_square_profiles()) == 15
    assert len(square_power_profiles("odd")) == 16
    assert len(square_power_profiles("even")) == 19
    assert len(generalized_profiles("odd")) == 3
    assert len(generalized_profiles("even")) == 3


def test_carry_ranges():
    for p in odd_square_profiles() + even_square_profiles():
        assert 0 <= p.carry < p.total_count()
        assert p.max_powers == 0
    for parity in ("odd", "even"):
        for p in square_power_profiles(parity):
            assert 0 <= p.carry < p.total_count() + 2
            assert p.max_powers == 2


def test_carry_beyond_range_is_empty():
    # the low chain's carry stays below the summand count, so the seam
    # check can never succeed at or past it
    nfa = uniform_machine("odd", (Summand(1, 1), Summand(3, 1)), 2)
    assert accept_set(nfa, "odd", 13) == set()
    nfa = uniform_machine("even", (Summand(2, 2), Summand(4, 2)), 4)
    assert accept_set(nfa, "even", 12) == set()


@pytest.mark.parametrize(
    "name,parity,gate",
    [
        ("a-odd", "odd", 13),
        ("a-even", "even", 18),
        ("square-power-odd", "odd", 11),
        ("square-power-even", "even", 12),
        ("generalized-odd", "odd", 11),
        ("generalized-even", "even", 12),
    ],
)
def test_family_covers_all_long_words(name, parity, gate):
    res = includes(family_union(name), syntax_checker(parity, gate))
    assert res.holds, [s.render() for s in res.counterexample]


def test_manifest_shape():
    info = machine_manifest("a-odd")
    assert info["family"] == "a-odd"
    assert info["parity"] == "odd"
    assert len(info["members"]) == 19
    assert info["states"] > 0
    labels = [m["label"] for m in info["members"]]
    assert labels[0] == "A(1,1,0)"
    assert "B(1,1,1,2)" in labels
    with pytest.raises(ValueError):
        machine_manifest("no-such-family")
    assert set(FAMILY_NAMES) == {
        "a-odd",
        "a-even",
        "square-power-odd",
        "square-power-even",
        "generalized-odd",
        "generalized-even",
    }


def test_edge_annotations_route_to_known_sites():
    for name in ("a-odd", "generalized-even", "square-power-odd"):
        for profile, nfa in family_members(name):
            seen = 0
            for src, sym_id, dst in nfa.walk():
                data = nfa.edge_data.get((src, sym_id, dst))
                assert data is not None
                guesses, inj_lo, inj_hi = data
                assert len(guesses) == sum(
                    1 for s in profile.summands if s.count
                )
                assert 0 <= inj_lo + inj_hi <= profile.max_powers
                for records, summand in zip(
                    guesses, (s for s in profile.summands if s.count)
                ):
                    for site, value in records:
                        assert site in ("lo", "hi", "top")
                        assert 0 <= value <= summand.count
                seen += 1
            assert seen == nfa.num_transitions()
