"""A small NFA engine over interned symbol alphabets.

Machines are immutable once built: states are dense ints, symbols are interned
to dense ids through an :class:`Alphabet`, and the transition table is a
per-state dict from symbol id to a tuple of successors.  There are no epsilon
moves.  Multiple initial states are allowed.

Language inclusion runs a lazy subset construction of the container
interleaved with the contained machine (antichain-pruned), returning the
shortest counterexample under a fixed symbol order when inclusion fails, so
results are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


@dataclass(frozen=True, order=True)
class Symbol:
    """One letter of a folded word: a tag plus one or two bits.

    Two bits make a fold pair (high half bit first), one bit a tail single.
    """

    tag: str
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) not in (1, 2) or any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"malformed symbol payload: {self.bits!r}")

    @property
    def is_pair(self) -> bool:
        return len(self.bits) == 2

    def render(self) -> str:
        if self.is_pair:
            return f"[{self.bits[0]},{self.bits[1]}]{self.tag}"
        return f"{self.bits[0]}{self.tag}"


class Alphabet:
    """Interned, ordered symbol set shared by the machines that speak it."""

    def __init__(self, symbols: Iterable[Symbol]):
        self.symbols: tuple[Symbol, ...] = tuple(sorted(set(symbols)))
        if not self.symbols:
            raise ValueError("alphabet cannot be empty")
        self._ids: dict[Symbol, int] = {s: i for i, s in enumerate(self.symbols)}

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: Symbol) -> bool:
        return symbol in self._ids

    def id_of(self, symbol: Symbol) -> int:
        try:
            return self._ids[symbol]
        except KeyError:
            raise KeyError(f"symbol {symbol.render()} not in alphabet") from None

    def encode(self, word: Iterable[Symbol]) -> tuple[int, ...]:
        return tuple(self.id_of(s) for s in word)

    def decode(self, ids: Iterable[int]) -> tuple[Symbol, ...]:
        return tuple(self.symbols[i] for i in ids)


@dataclass
class Nfa:
    """Nondeterministic finite automaton with interned symbols.

    ``edge_data`` optionally annotates edges (src, symbol id, dst) with the
    guesses that produced them; path decoders use it to rebuild summands.
    """

    alphabet: Alphabet
    num_states: int
    initial: frozenset[int]
    final: frozenset[int]
    transitions: list[dict[int, tuple[int, ...]]]
    edge_data: dict[tuple[int, int, int], tuple] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.transitions) != self.num_states:
            raise ValueError("transition table size mismatch")
        for q in self.initial | self.final:
            if not 0 <= q < self.num_states:
                raise ValueError(f"state {q} out of range")

    def num_transitions(self) -> int:
        return sum(
            len(dsts) for row in self.transitions for dsts in row.values()
        )

    def successors(self, states: frozenset[int], sym_id: int) -> frozenset[int]:
        out: set[int] = set()
        for q in states:
            out.update(self.transitions[q].get(sym_id, ()))
        return frozenset(out)

    def accepts(self, word: Iterable[Symbol]) -> bool:
        frontier = self.initial
        for symbol in word:
            if not frontier:
                return False
            frontier = self.successors(frontier, self.alphabet.id_of(symbol))
        return bool(frontier & self.final)

    def walk(self) -> Iterator[tuple[int, int, int]]:
        for src, row in enumerate(self.transitions):
            for sym_id, dsts in row.items():
                for dst in dsts:
                    yield src, sym_id, dst


class NfaBuilder:
    """Accumulates states and edges, then freezes into an :class:`Nfa`.

    States are interned by an arbitrary hashable key, so generators can work
    with structured descriptions and never see raw ids.
    """

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._ids: dict[object, int] = {}
        self._edges: dict[int, dict[int, set[int]]] = {}
        self._initial: set[int] = set()
        self._final: set[int] = set()
        self._edge_data: dict[tuple[int, int, int], tuple] = {}

    def state(self, key: object) -> int:
        if key not in self._ids:
            self._ids[key] = len(self._ids)
            self._edges[self._ids[key]] = {}
        return self._ids[key]

    def known(self, key: object) -> bool:
        return key in self._ids

    def mark_initial(self, key: object) -> None:
        self._initial.add(self.state(key))

    def mark_final(self, key: object) -> None:
        self._final.add(self.state(key))

    def add_edge(
        self, src: object, symbol: Symbol, dst: object, data: tuple | None = None
    ) -> None:
        s, d = self.state(src), self.state(dst)
        sym_id = self.alphabet.id_of(symbol)
        self._edges[s].setdefault(sym_id, set()).add(d)
        if data is not None:
            key = (s, sym_id, d)
            stored = self._edge_data.setdefault(key, data)
            if stored != data:
                # an edge decodes to one guess vector or path replay is junk
                raise ValueError(
                    f"conflicting annotations on edge {key}: {stored} vs {data}"
                )

    def build(self) -> Nfa:
        n = len(self._ids)
        table: list[dict[int, tuple[int, ...]]] = [
            {sym: tuple(sorted(dsts)) for sym, dsts in self._edges[q].items()}
            for q in range(n)
        ]
        return Nfa(
            alphabet=self.alphabet,
            num_states=n,
            initial=frozenset(self._initial),
            final=frozenset(self._final),
            transitions=table,
            edge_data=dict(self._edge_data),
        )


def _renumber(nfa: Nfa, keep: list[int]) -> Nfa:
    remap = {old: new for new, old in enumerate(keep)}
    table: list[dict[int, tuple[int, ...]]] = []
    for old in keep:
        row = {}
        for sym_id, dsts in nfa.transitions[old].items():
            kept = tuple(sorted(remap[d] for d in dsts if d in remap))
            if kept:
                row[sym_id] = kept
        table.append(row)
    edge_data = {
        (remap[s], sym, remap[d]): v
        for (s, sym, d), v in nfa.edge_data.items()
        if s in remap and d in remap
    }
    return Nfa(
        alphabet=nfa.alphabet,
        num_states=len(keep),
        initial=frozenset(remap[q] for q in nfa.initial if q in remap),
        final=frozenset(remap[q] for q in nfa.final if q in remap),
        transitions=table,
        edge_data=edge_data,
    )


def trim(nfa: Nfa) -> Nfa:
    """Restrict to states both reachable and co-reachable, renumbered densely."""
    forward: set[int] = set(nfa.initial)
    queue = deque(forward)
    while queue:
        q = queue.popleft()
        for dsts in nfa.transitions[q].values():
            for d in dsts:
                if d not in forward:
                    forward.add(d)
                    queue.append(d)
    reverse: dict[int, set[int]] = {q: set() for q in range(nfa.num_states)}
    for src, _, dst in nfa.walk():
        reverse[dst].add(src)
    backward: set[int] = set(nfa.final)
    queue = deque(backward)
    while queue:
        q = queue.popleft()
        for p in reverse[q]:
            if p not in backward:
                backward.add(p)
                queue.append(p)
    keep = sorted(forward & backward)
    return _renumber(nfa, keep)


def union(machines: list[Nfa]) -> Nfa:
    """Disjoint union; all machines must share one alphabet object."""
    if not machines:
        raise ValueError("union of no machines")
    alphabet = machines[0].alphabet
    for m in machines[1:]:
        if m.alphabet is not alphabet and m.alphabet.symbols != alphabet.symbols:
            raise ValueError("union requires a common alphabet")
    table: list[dict[int, tuple[int, ...]]] = []
    initial: set[int] = set()
    final: set[int] = set()
    edge_data: dict[tuple[int, int, int], tuple] = {}
    offset = 0
    for m in machines:
        for row in m.transitions:
            table.append(
                {sym: tuple(d + offset for d in dsts) for sym, dsts in row.items()}
            )
        initial.update(q + offset for q in m.initial)
        final.update(q + offset for q in m.final)
        for (s, sym, d), v in m.edge_data.items():
            edge_data[(s + offset, sym, d + offset)] = v
        offset += m.num_states
    return Nfa(
        alphabet=alphabet,
        num_states=offset,
        initial=frozenset(initial),
        final=frozenset(final),
        transitions=table,
        edge_data=edge_data,
    )


def intersect(a: Nfa, b: Nfa) -> Nfa:
    """Reachable product construction."""
    if a.alphabet.symbols != b.alphabet.symbols:
        raise ValueError("intersection requires a common alphabet")
    builder = NfaBuilder(a.alphabet)
    queue: deque[tuple[int, int]] = deque()
    for qa in sorted(a.initial):
        for qb in sorted(b.initial):
            key = (qa, qb)
            if not builder.known(key):
                builder.mark_initial(key)
                queue.append(key)
    seen = set(queue)
    while queue:
        qa, qb = queue.popleft()
        if qa in a.final and qb in b.final:
            builder.mark_final((qa, qb))
        row_a, row_b = a.transitions[qa], b.transitions[qb]
        for sym_id in row_a.keys() & row_b.keys():
            symbol = a.alphabet.symbols[sym_id]
            for da in row_a[sym_id]:
                for db in row_b[sym_id]:
                    key = (da, db)
                    builder.add_edge((qa, qb), symbol, key)
                    if key not in seen:
                        seen.add(key)
                        queue.append(key)
    return builder.build()


def is_empty(nfa: Nfa) -> tuple[Symbol, ...] | None:
    """Shortest accepted word (ties broken by symbol order), or None if empty."""
    if not nfa.initial:
        return None
    start = frozenset(nfa.initial)
    if start & nfa.final:
        return ()
    parents: dict[frozenset[int], tuple[frozenset[int], int]] = {start: None}
    queue = deque([start])
    while queue:
        states = queue.popleft()
        for sym_id in range(len(nfa.alphabet)):
            nxt = nfa.successors(states, sym_id)
            if not nxt or nxt in parents:
                continue
            parents[nxt] = (states, sym_id)
            if nxt & nfa.final:
                word: list[int] = []
                cur = nxt
                while parents[cur] is not None:
                    cur, sym = parents[cur]
                    word.append(sym)
                return nfa.alphabet.decode(reversed(word))
            queue.append(nxt)
    return None


@dataclass(frozen=True)
class InclusionResult:
    holds: bool
    counterexample: tuple[Symbol, ...] | None
    explored: int


def includes(container: Nfa, contained: Nfa, antichain: bool = True) -> InclusionResult:
    """Decide L(contained) <= L(container).

    Explores pairs (state of contained, subset of container) breadth-first; a
    pair whose contained state is final while the subset misses every final
    container state witnesses a counterexample, reconstructed via parents.
    Antichain pruning skips pairs whose subset contains an already-visited
    subset for the same contained state.
    """
    if container.alphabet.symbols != contained.alphabet.symbols:
        raise ValueError("inclusion requires a common alphabet")
    subset_ids: dict[frozenset[int], int] = {}
    subsets: list[frozenset[int]] = []
    subset_final: list[bool] = []
    step_cache: dict[tuple[int, int], int] = {}

    def intern_subset(states: frozenset[int]) -> int:
        sid = subset_ids.get(states)
        if sid is None:
            sid = len(subsets)
            subset_ids[states] = sid
            subsets.append(states)
            subset_final.append(bool(states & container.final))
        return sid

    def subset_step(sid: int, sym_id: int) -> int:
        key = (sid, sym_id)
        nxt = step_cache.get(key)
        if nxt is None:
            nxt = intern_subset(container.successors(subsets[sid], sym_id))
            step_cache[key] = nxt
        return nxt

    start_sid = intern_subset(frozenset(container.initial))
    visited: dict[tuple[int, int], tuple | None] = {}
    chains: dict[int, list[frozenset[int]]] = {}
    queue: deque[tuple[int, int]] = deque()

    def witness(node: tuple[int, int]) -> tuple[Symbol, ...]:
        word: list[int] = []
        while visited[node] is not None:
            node, sym = visited[node]
            word.append(sym)
        return container.alphabet.decode(reversed(word))

    for qb in sorted(contained.initial):
        node = (qb, start_sid)
        if node in visited:
            continue
        visited[node] = None
        if qb in contained.final and not subset_final[start_sid]:
            return InclusionResult(False, witness(node), len(visited))
        chains.setdefault(qb, []).append(subsets[start_sid])
        queue.append(node)

    while queue:
        qb, sid = queue.popleft()
        for sym_id, dsts in sorted(contained.transitions[qb].items()):
            nsid = subset_step(sid, sym_id)
            nsubset = subsets[nsid]
            for db in dsts:
                node = (db, nsid)
                if node in visited:
                    continue
                if antichain and any(
                    kept <= nsubset for kept in chains.get(db, ())
                ):
                    continue
                visited[node] = ((qb, sid), sym_id)
                if db in contained.final and not subset_final[nsid]:
                    return InclusionResult(False, witness(node), len(visited))
                chains.setdefault(db, []).append(nsubset)
                queue.append(node)
    return InclusionResult(True, None, len(visited))


def to_dot(nfa: Nfa, name: str = "machine") -> str:
    """Graphviz rendering; initial states get arrows from point nodes."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  node [shape=circle];']
    for q in sorted(nfa.final):
        lines.append(f'  q{q} [shape=doublecircle];')
    for i, q in enumerate(sorted(nfa.initial)):
        lines.append(f'  start{i} [shape=point];')
        lines.append(f"  start{i} -> q{q};")
    grouped: dict[tuple[int, int], list[str]] = {}
    for src, sym_id, dst in nfa.walk():
        grouped.setdefault((src, dst), []).append(
            nfa.alphabet.symbols[sym_id].render()
        )
    for (src, dst), labels in sorted(grouped.items()):
        text = ", ".join(sorted(labels))
        lines.append(f'  q{src} -> q{dst} [label="{text}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_automata_script(nfa: Nfa, name: str = "machine") -> str:
    """NestedWordAutomaton text block (internal transitions only)."""

    def sym_name(symbol: Symbol) -> str:
        if symbol.is_pair:
            return f'"[{symbol.bits[0]},{symbol.bits[1]}]{symbol.tag}"'
        return f'"{symbol.bits[0]}{symbol.tag}"'

    used = sorted({sym_id for _, sym_id, _ in nfa.walk()})
    letters = ", ".join(sym_name(nfa.alphabet.symbols[i]) for i in used)
    states = " ".join(f'"q{q}"' for q in range(nfa.num_states))
    initial = " ".join(f'"q{q}"' for q in sorted(nfa.initial))
    final = " ".join(f'"q{q}"' for q in sorted(nfa.final))
    edges = "\n".join(
        f'    ("q{src}" {sym_name(nfa.alphabet.symbols[sym_id])} "q{dst}")'
        for src, sym_id, dst in sorted(nfa.walk())
    )
    return (
        f"NestedWordAutomaton {name} = (\n"
        "  callAlphabet = { },\n"
        f"  internalAlphabet = {{ {letters} }},\n"
        "  returnAlphabet = { },\n"
        f"  states = {{ {states} }},\n"
        f"  initialStates = {{ {initial} }},\n"
        f"  finalStates = {{ {final} }},\n"
        "  callTransitions = { },\n"
        f"  internalTransitions = {{\n{edges}\n  }},\n"
        "  returnTransitions = { }\n"
        ");\n"
    )
