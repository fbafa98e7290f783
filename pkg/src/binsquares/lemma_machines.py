"""Columnwise-addition recognizers for folded words.

A machine reads a folded word and guesses, column by column, the digits of a
fixed multiset of summands together with the carries of the two addition
chains the word interleaves.  It accepts exactly the words whose bits the
guesses reproduce.  Guessing t equal-width squares at once is a single
guess over the digit alphabet {0..t}: column j of the stacked sum counts how
many of the t squares have bit j set, and the exact-width requirement pins
the top digit to t.  Because such a square repeats its low half, every
summand reduces to one digit stream applied twice, once on the low track and
once, shifted, on the high track.

Relative width decides the bookkeeping.  A summand matching the fold width
consumes each guess on both tracks in the same step.  A narrower summand
meets its high-track columns before the matching low column arrives, so
fresh guesses ride a FIFO from the high track down to the low track, while
its first digits wait in a second queue for the closing low columns.  A
wider summand is the mirror image: low-track guesses ride the FIFO up
toward the high track, and its top digits sit in dedicated slots until the
tail singles consume them.  Carries close the loop: the low chain starts at
zero, the high chain starts at a guessed seam carry, and a run is
consistent only when the low chain ends by producing exactly that seam
carry.  Optional powers of two enter as single-column injections counted
against a budget.

Machines come in two builds.  Uniform ones key their rules on tags alone,
so one machine covers every source length at or above the layout minimum
(11 for odd, 12 for even).  Fixed-length ones key on step indices and reach
the short layouts the uniform rules cannot express.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct

from .automata import Nfa, NfaBuilder, Symbol, trim, union
from .folding import SINGLE_TAGS, alphabet_for, pair_tags

TOP_KINDS = ("exact", "free", "zero")


def digit_step(addends: tuple[int, ...], carry_in: int) -> tuple[int, int]:
    """One column of multi-operand binary addition: (bit out, carry out)."""
    total = sum(addends) + carry_in
    return total & 1, total >> 1


@dataclass(frozen=True)
class Summand:
    """A block of `count` equal-width squares, `offset` bits narrower than
    the source word (negative offsets mean wider).  `top` says what the
    stacked top digit must be: the full `count` for exact-width squares,
    anything for free halves, zero when the top column would fall outside
    the word."""

    offset: int
    count: int
    top: str = "exact"

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("summand count must be >= 0")
        if self.top not in TOP_KINDS:
            raise ValueError(f"top must be one of {TOP_KINDS}")


@dataclass(frozen=True)
class Profile:
    """A machine recipe: parity, summand blocks, seam carry, power budget."""

    parity: str
    summands: tuple[Summand, ...]
    carry: int
    max_powers: int = 0
    label: str = ""

    def total_count(self) -> int:
        return sum(s.count for s in self.summands)


def alignment(parity: str, offset: int) -> int:
    """Half-width excess of a summand over the fold's pair span.

    Positive: the summand is wider than the pair block and needs top
    slots.  Negative: it is narrower and its guesses ride the high-to-low
    FIFO."""
    base = 1 if parity == "odd" else 4
    num = base - offset
    if num % 2:
        raise ValueError(f"offset {offset} has the wrong parity for {parity} words")
    align = num // 2
    lo = -2 if parity == "odd" else -1
    hi = 1 if parity == "odd" else 2
    if not lo <= align <= hi:
        raise ValueError(f"offset {offset} not supported for {parity} words")
    return align


_ODD_PHASES = {
    "P0": (("a", "PA"),),
    "PA": (("a", "PA"), ("b", "PB")),
    "PB": (("c", "PC"),),
    "PC": (("d", "PD"),),
    "PD": (("e", "PE"),),
}
_EVEN_PHASES = {
    "P0": (("a", "PA"),),
    "PA": (("b", "PB"),),
    "PB": (("c", "PB"), ("d", "PC")),
    "PC": (("e", "PE"),),
}


class _Generator:
    """Worklist expansion of one machine's reachable state graph."""

    def __init__(
        self,
        parity: str,
        summands: tuple[Summand, ...],
        carry: int,
        max_powers: int,
        source_length: int | None,
    ) -> None:
        if parity not in ("odd", "even"):
            raise ValueError("parity must be 'odd' or 'even'")
        if carry < 0:
            raise ValueError("seam carry must be >= 0")
        self.parity = parity
        self.carry = carry
        self.max_powers = max_powers
        self.active = tuple(s for s in summands if s.count > 0)
        self.aligns = tuple(alignment(parity, s.offset) for s in self.active)
        self.singles = SINGLE_TAGS[parity]
        for s, a in zip(self.active, self.aligns):
            if self.parity == "odd" and a == 1 and s.top != "zero":
                # its top column would sit one past the word
                raise ValueError("a wider odd summand only fits with a zero top")
        if source_length is None:
            self.i = None
        else:
            self.i = self._pair_count(source_length)
            self.tags = pair_tags(parity, self.i)
            for s, a in zip(self.active, self.aligns):
                if a < 0 and self.i < -2 * a:
                    raise ValueError(f"offset {s.offset} needs more pair columns")
                if a > 0 and self.i < a:
                    raise ValueError(f"offset {s.offset} needs more pair columns")
        self.alphabet = alphabet_for(parity)
        self.builder = NfaBuilder(self.alphabet)

    def _pair_count(self, n: int) -> int:
        span = 1 if self.parity == "odd" else 4
        if n % 2 != span % 2:
            raise ValueError(f"length {n} is not {self.parity}")
        i = (n - span) // 2
        if i < 1:
            raise ValueError(f"length {n} leaves no pair columns")
        return i

    # State layout: (pos, slots, c_lo, c_hi, used) where pos is a phase
    # name (uniform) or step index (fixed), slots holds per-summand
    # bookkeeping, and used counts placed power injections.

    def build(self) -> Nfa:
        start_pos: object = "P0" if self.i is None else 0
        slots = tuple(((), ()) if a else () for a in self.aligns)
        start = (start_pos, slots, 0, self.carry, 0)
        self.builder.mark_initial(start)
        seen = {start}
        work = [start]
        while work:
            key = work.pop()
            for new_key in self._expand(key):
                if new_key not in seen:
                    seen.add(new_key)
                    work.append(new_key)
        return self.builder.build()

    def _expand(self, key: tuple) -> list[tuple]:
        pos = key[0]
        if self.i is None:
            phases = _ODD_PHASES if self.parity == "odd" else _EVEN_PHASES
            if pos in phases:
                out: list[tuple] = []
                for tag, nxt in phases[pos]:
                    out.extend(self._pair_edges(key, tag, nxt, None))
                return out
            if pos == "PE":
                return self._single_edges(key, 0)
            if isinstance(pos, tuple) and pos and pos[0] == "S":
                return self._single_edges(key, pos[1] + 1)
            return []
        if not isinstance(pos, int):
            return []
        if pos < self.i:
            return self._pair_edges(key, self.tags[pos], pos + 1, pos)
        if pos < self.i + len(self.singles):
            return self._single_edges(key, pos - self.i)
        return []

    # -- pair steps --------------------------------------------------------

    def _pair_edges(
        self, key: tuple, tag: str, next_pos: object, step: int | None
    ) -> list[tuple]:
        _, slots, c_lo, c_hi, used = key
        per_summand = [
            self._pair_options(s, a, slot, tag, step)
            for s, a, slot in zip(self.active, self.aligns, slots)
        ]
        at_seam = tag == "e"
        out = []
        for combo in iproduct(*per_summand):
            base_lo = sum(c[0] for c in combo)
            base_hi = sum(c[1] for c in combo)
            new_slots = tuple(c[2] for c in combo)
            guesses = tuple(c[3] for c in combo)
            for used2, inj_lo, inj_hi in self._injections(used):
                bit_lo, nc_lo = digit_step((base_lo, inj_lo), c_lo)
                bit_hi, nc_hi = digit_step((base_hi, inj_hi), c_hi)
                if at_seam:
                    if nc_lo != self.carry:
                        continue
                    nc_lo = 0
                new_key = (next_pos, new_slots, nc_lo, nc_hi, used2)
                sym = Symbol(tag, (bit_hi, bit_lo))
                self.builder.add_edge(key, sym, new_key, (guesses, inj_lo, inj_hi))
                out.append(new_key)
        return out

    def _injections(self, used: int):
        if not self.max_powers:
            return ((used, 0, 0),)
        room = self.max_powers - used
        return tuple(
            (used + lo + hi, lo, hi)
            for lo in range(room + 1)
            for hi in range(room + 1 - lo)
        )

    def _single_injections(self, used: int):
        if not self.max_powers:
            return ((used, 0),)
        room = self.max_powers - used
        return tuple((used + j, j) for j in range(room + 1))

    def _top_values(self, s: Summand) -> tuple[int, ...]:
        if s.top == "exact":
            return (s.count,)
        if s.top == "zero":
            return (0,)
        return tuple(range(s.count + 1))

    def _pair_options(
        self, s: Summand, align: int, slot: tuple, tag: str, step: int | None
    ) -> list[tuple[int, int, tuple, tuple]]:
        """All (low add, high add, new slot, guess records) for one summand."""
        if align == 0:
            last = (tag == "e") if step is None else (step == self.i - 1)
            values = self._top_values(s) if last else range(s.count + 1)
            return [(g, g, (), (("lo", g),)) for g in values]
        if align < 0:
            return self._sub_options(s, -align, slot, tag, step)
        return self._super_options(s, align, slot, tag, step)

    def _sub_options(
        self, s: Summand, delta: int, slot: tuple, tag: str, step: int | None
    ) -> list:
        early, pipe = slot
        full = range(s.count + 1)

        # low track: fresh digits until the waiting queue fills, then the
        # FIFO replays them, and the queue itself drains at the end
        lows: list[tuple[int, tuple, tuple, tuple]] = []
        if step is None:
            # drain beats fill: the queue refills below delta as it drains
            if tag in (("e",) if delta == 1 else ("d", "e")):
                lows.append((early[0], early[1:], pipe, ()))
            elif len(early) < delta:
                for g in full:
                    lows.append((g, early + (g,), pipe, (("lo", g),)))
            else:
                value = pipe[0]
                named_top = (
                    (self.parity == "even" and delta == 1 and tag == "d")
                    or (self.parity == "odd" and delta == 2 and tag == "c")
                )
                if named_top and value not in self._top_values(s):
                    # last replayed digit is the top; only site that names it
                    return []
                lows.append((value, early, pipe[1:], ()))
        else:
            h = self.i - delta
            if step < delta:
                values = self._top_values(s) if step == h - 1 else full
                for g in values:
                    lows.append((g, early + (g,), pipe, (("lo", g),)))
            elif step >= self.i - delta:
                lows.append((early[0], early[1:], pipe, ()))
            else:
                lows.append((pipe[0], early, pipe[1:], ()))

        # high track: push fresh digits while its columns last, then silent
        highs: list[tuple[int, int | None, tuple]] = []
        if step is None:
            push_tags = ("a",) if delta == 2 else ("a", "b", "c")
            if tag in push_tags:
                constrain = self.parity == "odd" and delta == 1 and tag == "c"
                values = self._top_values(s) if constrain else full
                for g in values:
                    highs.append((g, g, (("hi", g),)))
            else:
                highs.append((0, None, ()))
        else:
            limit = self.i - 2 * delta - 1
            if step <= limit:
                values = self._top_values(s) if step == limit else full
                for g in values:
                    highs.append((g, g, (("hi", g),)))
            else:
                highs.append((0, None, ()))

        out = []
        for lo, early2, pipe2, lg in lows:
            for hi, pushed, hg in highs:
                npipe = pipe2 if pushed is None else pipe2 + (pushed,)
                out.append((lo, hi, (early2, npipe), lg + hg))
        return out

    def _super_options(
        self, s: Summand, eps: int, slot: tuple, tag: str, step: int | None
    ) -> list:
        pipe, tops = slot
        out = []
        for g in range(s.count + 1):
            pushed = pipe + (g,)
            lg = (("lo", g),)
            if step is None:
                if self.parity == "odd":
                    # width n+1: the top is pinned to zero, so the first
                    # high column is mute and later ones replay the FIFO
                    if not pipe:
                        out.append((g, 0, (pushed, tops), lg))
                    else:
                        out.append((g, pipe[0], (pushed[1:], tops), lg))
                elif tag == "a":
                    last = eps == 1
                    values = self._top_values(s) if last else range(s.count + 1)
                    for v in values:
                        out.append((g, v, (pushed, (v,)), lg + (("top", v),)))
                elif tag == "b" and eps == 2:
                    for v in self._top_values(s):
                        out.append((g, v, (pushed, tops + (v,)), lg + (("top", v),)))
                else:
                    out.append((g, pipe[0], (pushed[1:], tops), lg))
            else:
                if step < eps:
                    last = step == eps - 1
                    values = self._top_values(s) if last else range(s.count + 1)
                    for v in values:
                        out.append((g, v, (pushed, tops + (v,)), lg + (("top", v),)))
                else:
                    out.append((g, pipe[0], (pushed[1:], tops), lg))
        return out

    # -- tail singles ------------------------------------------------------

    def _single_edges(self, key: tuple, tau: int) -> list[tuple]:
        """One tail column: the high-track carry chains through, and the
        last column must produce a bare 1."""
        pos, slots, _, c_hi, used = key
        final = tau == len(self.singles) - 1
        tag = self.singles[tau]
        adds = []
        new_slots = []
        for a, slot in zip(self.aligns, slots):
            value, slot2 = self._single_value(a, slot, tau)
            adds.append(value)
            new_slots.append(slot2)
        no_guesses = tuple(() for _ in self.active)
        out = []
        for used2, inj in self._single_injections(used):
            bit, carry = digit_step((*adds, inj), c_hi)
            data = (no_guesses, inj, 0)
            if final:
                if bit != 1 or carry:
                    continue
                self.builder.add_edge(key, Symbol(tag, (1,)), ("ACC",), data)
                self.builder.mark_final(("ACC",))
                out.append(("ACC",))
            else:
                next_pos = ("S", tau) if self.i is None else pos + 1
                nk = (next_pos, tuple(new_slots), 0, carry, used2)
                self.builder.add_edge(key, Symbol(tag, (bit,)), nk, data)
                out.append(nk)
        return out

    def _single_value(self, align: int, slot: tuple, tau: int) -> tuple[int, tuple]:
        """A wider summand's last columns land on the tail: FIFO remainder
        first, then the stored top digits, then nothing."""
        if align <= 0:
            return 0, slot
        pipe, tops = slot
        if tau < align:
            return pipe[0], (pipe[1:], tops)
        if tau < 2 * align:
            return tops[tau - align], slot
        return 0, slot


def uniform_machine(
    parity: str,
    summands: tuple[Summand, ...],
    carry: int,
    max_powers: int = 0,
) -> Nfa:
    """Tag-keyed recognizer valid for every source length of the parity at
    or above the layout minimum (11 odd, 12 even)."""
    return _Generator(parity, summands, carry, max_powers, None).build()


def fixed_machine(
    parity: str,
    source_length: int,
    summands: tuple[Summand, ...],
    carry: int,
    max_powers: int = 0,
) -> Nfa:
    """Step-keyed recognizer for one source length, usable below the
    uniform layout minimum."""
    return _Generator(parity, summands, carry, max_powers, source_length).build()


def build_profile_machine(profile: Profile) -> Nfa:
    return uniform_machine(
        profile.parity, profile.summands, profile.carry, profile.max_powers
    )


# -- shipped machine families ---------------------------------------------


def odd_square_profiles() -> list[Profile]:
    """Exact-count square mixes for odd lengths n: widths n-1 and n-3
    (A shapes), plus one width n-5 straggler (B shapes)."""
    shapes = [
        ("A", (1, 1)),
        ("A", (2, 1)),
        ("A", (1, 2)),
        ("B", (1, 1, 1)),
        ("A", (2, 2)),
        ("B", (2, 1, 1)),
    ]
    offsets = (1, 3, 5)
    out = []
    for kind, counts in shapes:
        summands = tuple(
            Summand(offsets[k], c) for k, c in enumerate(counts) if c > 0
        )
        for m in range(sum(counts)):
            args = ",".join(str(c) for c in counts)
            out.append(Profile("odd", summands, m, 0, f"{kind}({args},{m})"))
    return out


def even_square_profiles() -> list[Profile]:
    """Exact-count square mixes for even lengths n: widths n down to n-6
    in steps of two, at most one full-width."""
    shapes = [
        (0, 2, 2, 0),
        (0, 3, 1, 0),
        (1, 0, 1, 1),
        (0, 2, 1, 1),
    ]
    offsets = (0, 2, 4, 6)
    out = []
    for counts in shapes:
        summands = tuple(
            Summand(offsets[k], c) for k, c in enumerate(counts) if c > 0
        )
        for m in range(sum(counts)):
            args = ",".join(str(c) for c in counts)
            out.append(Profile("even", summands, m, 0, f"A({args},{m})"))
    return out


def square_power_profiles(parity: str) -> list[Profile]:
    """Small square mixes with room for up to two powers of two."""
    if parity == "odd":
        shapes = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)]
        offsets = (1, 3)
    else:
        shapes = [
            (0, 0, 0),
            (1, 0, 0),
            (0, 1, 0),
            (0, 0, 1),
            (1, 0, 1),
            (0, 1, 1),
        ]
        offsets = (0, 2, 4)
    out = []
    for counts in shapes:
        summands = tuple(
            Summand(offsets[k], c) for k, c in enumerate(counts) if c > 0
        )
        for m in range(sum(counts) + 2):
            args = ",".join(str(c) for c in counts)
            out.append(Profile(parity, summands, m, 2, f"SP({args},{m})"))
    return out


def generalized_profiles(parity: str) -> list[Profile]:
    """One free-half summand at each of three adjacent widths."""
    if parity == "odd":
        summands = (
            Summand(-1, 1, "zero"),
            Summand(1, 1, "free"),
            Summand(3, 1, "free"),
        )
    else:
        summands = (
            Summand(0, 1, "free"),
            Summand(2, 1, "free"),
            Summand(4, 1, "free"),
        )
    return [Profile(parity, summands, m, 0, f"G({m})") for m in range(3)]


FAMILY_NAMES = (
    "a-odd",
    "a-even",
    "square-power-odd",
    "square-power-even",
    "generalized-odd",
    "generalized-even",
)


def family_profiles(name: str) -> tuple[Profile, ...]:
    """Profile list for a named family, in fixed order."""
    table = {
        "a-odd": odd_square_profiles,
        "a-even": even_square_profiles,
        "square-power-odd": lambda: square_power_profiles("odd"),
        "square-power-even": lambda: square_power_profiles("even"),
        "generalized-odd": lambda: generalized_profiles("odd"),
        "generalized-even": lambda: generalized_profiles("even"),
    }
    if name not in table:
        raise ValueError(f"unknown machine family {name!r}")
    return tuple(table[name]())


@lru_cache(maxsize=None)
def family_members(name: str) -> tuple[tuple[Profile, Nfa], ...]:
    """Build (profile, machine) pairs for a named family, in fixed order."""
    return tuple(
        (p, trim(build_profile_machine(p))) for p in family_profiles(name)
    )


@lru_cache(maxsize=None)
def family_union(name: str) -> Nfa:
    return trim(union([nfa for _, nfa in family_members(name)]))


def build_A_odd() -> Nfa:
    return family_union("a-odd")


def build_A_even() -> Nfa:
    return family_union("a-even")


def build_square_power_machines(parity: str) -> Nfa:
    return family_union(f"square-power-{parity}")


def build_generalized_machines(parity: str) -> Nfa:
    return family_union(f"generalized-{parity}")


def machine_manifest(name: str) -> dict:
    members = family_members(name)
    combined = family_union(name)
    return {
        "family": name,
        "parity": members[0][0].parity,
        "members": [
            {
                "label": p.label,
                "carry": p.carry,
                "states": nfa.num_states,
                "transitions": nfa.num_transitions(),
            }
            for p, nfa in members
        ],
        "states": combined.num_states,
        "transitions": combined.num_transitions(),
    }


# -- enumeration helpers ---------------------------------------------------


def accept_set(nfa: Nfa, parity: str, source_length: int) -> set[int]:
    """All values of the given bit length whose folded word the machine
    accepts.  Walks the word tree once, sharing work across prefixes."""
    span = 1 if parity == "odd" else 4
    i = (source_length - span) // 2
    if i < 1 or 2 * i + span != source_length:
        raise ValueError(f"bad {parity} source length {source_length}")
    tags = pair_tags(parity, i)
    singles = SINGLE_TAGS[parity]
    alphabet = nfa.alphabet
    found: set[int] = set()

    def sym_id(tag: str, bits: tuple[int, ...]) -> int | None:
        sym = Symbol(tag, bits)
        return alphabet.id_of(sym) if sym in alphabet else None

    def singles_walk(states: frozenset, base: int) -> None:
        frontier = [(states, 0)]
        for tau, tag in enumerate(singles):
            final = tau == len(singles) - 1
            nxt = []
            for st, acc in frontier:
                for bits in (((1,),) if final else ((0,), (1,))):
                    sid = sym_id(tag, bits)
                    if sid is None:
                        continue
                    st2 = nfa.successors(st, sid)
                    if st2:
                        nxt.append((st2, acc | bits[0] << tau))
            frontier = nxt
        for st, acc in frontier:
            if st & nfa.final:
                found.add(base | acc << 2 * i)

    def pairs_walk(k: int, states: frozenset, lo: int, hi: int) -> None:
        if k == i:
            singles_walk(states, lo | hi << i)
            return
        for hb in (0, 1):
            for lb in (0, 1):
                sid = sym_id(tags[k], (hb, lb))
                if sid is None:
                    continue
                st2 = nfa.successors(states, sid)
                if st2:
                    pairs_walk(k + 1, st2, lo | lb << k, hi | hb << k)

    pairs_walk(0, nfa.initial, 0, 0)
    return found
