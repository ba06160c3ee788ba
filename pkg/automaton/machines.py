"""
Finite Automata over Determination-String Symbols

Machines read symbols (index, neighbourhood) from an explicit alphabet fixed
by a rungless pathograph: every index 1..K paired with every subset of its
vertices. Nondeterministic machines label their moves with symbol patterns
(index, required vertices, forbidden vertices) so that "any symbol of index
k" and "any symbol containing a but not b" are single moves; determinization
expands patterns against the alphabet with bitmask tests.

Deterministic machines are partial: a missing transition rejects.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import (
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from core.limits_loader import get_limit
from core.utils import AlphabetMismatchError, FormatParseError, LimitExceededError
from realization.strings import DeterminationString, Symbol, parse_symbol

logger = logging.getLogger(__name__)

State = Hashable


@dataclass(frozen=True)
class Alphabet:
    """All K * 2^N symbols over the given vertex order."""

    vertices: Tuple[str, ...]
    K: int

    @classmethod
    def of(cls, h) -> "Alphabet":
        return cls(tuple(h.vertices), h.K)

    @cached_property
    def bits(self) -> Dict[str, int]:
        return {v: 1 << i for i, v in enumerate(self.vertices)}

    @property
    def width(self) -> int:
        return 1 << len(self.vertices)

    def __len__(self) -> int:
        return self.K * self.width

    def mask(self, vertices: Iterable[str]) -> int:
        bits = self.bits
        out = 0
        for v in vertices:
            if v not in bits:
                raise AlphabetMismatchError(f"vertex '{v}' is not in the alphabet over {self.vertices}")
            out |= bits[v]
        return out

    def symbol_at(self, position: int) -> Symbol:
        index, mask = divmod(position, self.width)
        return Symbol(index + 1, frozenset(v for v in self.vertices if mask & self.bits[v]))

    def position(self, symbol: Symbol) -> int:
        if not 1 <= symbol.index <= self.K:
            raise AlphabetMismatchError(f"symbol {symbol.render()} has index outside 1..{self.K}")
        return (symbol.index - 1) * self.width + self.mask(symbol.neighborhood)

    @cached_property
    def symbols(self) -> Tuple[Symbol, ...]:
        return tuple(self.symbol_at(p) for p in range(len(self)))

    def render(self, symbol: Symbol) -> str:
        return symbol.render(self.vertices)


class SymbolPattern(NamedTuple):
    """Matches every symbol of `index` containing `required` and avoiding `forbidden`."""

    index: int
    required: FrozenSet[str] = frozenset()
    forbidden: FrozenSet[str] = frozenset()

    @classmethod
    def any(cls, index: int) -> "SymbolPattern":
        return cls(index, frozenset(), frozenset())

    @classmethod
    def exact(cls, symbol: Symbol, vertices: Iterable[str]) -> "SymbolPattern":
        return cls(symbol.index, symbol.neighborhood, frozenset(vertices) - symbol.neighborhood)

    def matches(self, symbol: Symbol) -> bool:
        return (
            symbol.index == self.index
            and self.required <= symbol.neighborhood
            and not self.forbidden & symbol.neighborhood
        )

    def __str__(self) -> str:
        if not self.required and not self.forbidden:
            return f"{self.index}:*"
        req = ",".join(sorted(self.required))
        forb = ",".join(sorted(self.forbidden))
        return f"{self.index}:[+{req} -{forb}]"


class Nfa:
    """
    Nondeterministic machine with pattern-labelled moves and epsilon moves.

    `absorbing` marks states from which every continuation belongs to the
    language the machine is built for; determinize may merge subsets that
    reach one of them into a single universal state.
    """

    def __init__(self, alphabet: Alphabet, start: State, name: str = "nfa"):
        self.alphabet = alphabet
        self.name = name
        self.start = start
        self.states: Dict[State, None] = {}
        self.accepting: Set[State] = set()
        self.absorbing: Set[State] = set()
        self.moves: Dict[State, List[Tuple[SymbolPattern, State]]] = {}
        self.epsilon: Dict[State, List[State]] = {}
        self.add_state(start)

    def add_state(self, state: State, accepting: bool = False, absorbing: bool = False) -> State:
        self.states.setdefault(state, None)
        if accepting:
            self.accepting.add(state)
        if absorbing:
            self.absorbing.add(state)
        return state

    def add_move(self, src: State, pattern: SymbolPattern, dst: State) -> None:
        if not 1 <= pattern.index <= self.alphabet.K:
            raise AlphabetMismatchError(f"move {pattern} has index outside 1..{self.alphabet.K}")
        self.alphabet.mask(pattern.required | pattern.forbidden)
        self.add_state(src)
        self.add_state(dst)
        self.moves.setdefault(src, []).append((pattern, dst))

    def add_symbol_move(self, src: State, symbol: Symbol, dst: State) -> None:
        self.add_move(src, SymbolPattern.exact(symbol, self.alphabet.vertices), dst)

    def add_epsilon(self, src: State, dst: State) -> None:
        self.add_state(src)
        self.add_state(dst)
        self.epsilon.setdefault(src, []).append(dst)

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def num_transitions(self) -> int:
        return sum(len(m) for m in self.moves.values()) + sum(len(e) for e in self.epsilon.values())

    def closure(self, states: Iterable[State]) -> FrozenSet[State]:
        seen = set(states)
        stack = list(seen)
        while stack:
            s = stack.pop()
            for t in self.epsilon.get(s, ()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def step(self, states: Iterable[State], symbol: Symbol) -> FrozenSet[State]:
        targets = [t for s in states for pattern, t in self.moves.get(s, ()) if pattern.matches(symbol)]
        return self.closure(targets)

    def accepts(self, word: Iterable[Symbol]) -> bool:
        """Direct subset simulation, independent of determinize."""
        current = self.closure([self.start])
        for symbol in word:
            self.alphabet.position(symbol)
            current = self.step(current, symbol)
            if not current:
                return False
        return bool(current & self.accepting)


@dataclass(frozen=True, eq=False)
class Dfa:
    """Deterministic machine; states are 0..n-1, table rows map symbol positions to states."""

    alphabet: Alphabet
    start: int
    accepting: FrozenSet[int]
    table: Tuple[Dict[int, int], ...] = field(repr=False)

    @property
    def num_states(self) -> int:
        return len(self.table)

    @property
    def num_transitions(self) -> int:
        return sum(len(row) for row in self.table)

    def step(self, state: Optional[int], symbol: Symbol) -> Optional[int]:
        position = self.alphabet.position(symbol)
        if state is None:
            return None
        return self.table[state].get(position)

    def is_complete(self) -> bool:
        return all(len(row) == len(self.alphabet) for row in self.table)

    def accepts(self, word: Iterable[Symbol]) -> bool:
        return run(self, word).accepted


class RunResult(NamedTuple):
    accepted: bool
    transitions: int

    def __bool__(self) -> bool:
        return self.accepted


@dataclass(frozen=True)
class Emptiness:
    """Emptiness verdict; a nonempty language comes with a shortest accepted string."""

    empty: bool
    witness: Optional[DeterminationString] = None

    def __bool__(self) -> bool:
        return self.empty


def _check_same_alphabet(machines: Sequence) -> Alphabet:
    first = machines[0].alphabet
    for m in machines[1:]:
        if m.alphabet != first:
            raise AlphabetMismatchError(f"alphabets differ: {first} vs {m.alphabet}")
    return first


def nfa_union(machines: Sequence[Nfa], name: str = "union") -> Nfa:
    """
    Union of machines over one alphabet.

    States of the i-th machine are renamed (i, state); a fresh start state
    has epsilon moves to every start. Accepting and absorbing marks carry over.
    """
    if not machines:
        raise ValueError("nfa_union needs at least one machine")
    alphabet = _check_same_alphabet(machines)
    out = Nfa(alphabet, (name,), name=name)
    for i, m in enumerate(machines):
        for s in m.states:
            out.add_state((i, s), accepting=s in m.accepting, absorbing=s in m.absorbing)
        for s, moves in m.moves.items():
            for pattern, t in moves:
                out.moves.setdefault((i, s), []).append((pattern, (i, t)))
        for s, targets in m.epsilon.items():
            for t in targets:
                out.add_epsilon((i, s), (i, t))
        out.add_epsilon(out.start, (i, m.start))
    logger.debug(f"Union built with {out.num_states} states and {out.num_transitions} transitions")
    return out


_UNIVERSAL = "universal"


def determinize(nfa: Nfa, absorbing: Optional[Iterable[State]] = None) -> Dfa:
    """
    Subset construction with lazy expansion of pattern moves.

    Args:
        nfa: The machine
        absorbing: States whose presence makes a subset accept every
            continuation; such subsets become one universal state

    Raises:
        LimitExceededError: If more than determinize.max_states subsets are reached
    """
    alphabet = nfa.alphabet
    guard = get_limit("determinize.max_states")
    ids = {s: i for i, s in enumerate(nfa.states)}

    masks: Dict[SymbolPattern, Tuple[int, int]] = {}
    moves: List[Dict[int, List[Tuple[int, int, int]]]] = [{} for _ in ids]
    for s, pairs in nfa.moves.items():
        for pattern, t in pairs:
            if pattern not in masks:
                masks[pattern] = (alphabet.mask(pattern.required), alphabet.mask(pattern.forbidden))
            req, forb = masks[pattern]
            moves[ids[s]].setdefault(pattern.index, []).append((req, forb, ids[t]))
    eps: List[List[int]] = [[] for _ in ids]
    for s, targets in nfa.epsilon.items():
        eps[ids[s]] = [ids[t] for t in targets]
    accepting = frozenset(ids[s] for s in nfa.accepting)
    sink = frozenset(ids[s] for s in absorbing) if absorbing is not None else frozenset()

    closures: Dict[FrozenSet[int], FrozenSet[int]] = {}

    def closure(seed: FrozenSet[int]) -> FrozenSet[int]:
        cached = closures.get(seed)
        if cached is not None:
            return cached
        seen = set(seed)
        stack = list(seed)
        while stack:
            for t in eps[stack.pop()]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        result = frozenset(seen)
        closures[seed] = result
        return result

    def canonical(subset: FrozenSet[int]):
        return _UNIVERSAL if subset & sink else subset

    order: List = [canonical(closure(frozenset({ids[nfa.start]})))]
    index = {order[0]: 0}
    table: List[Dict[int, int]] = []
    width = alphabet.width
    i = 0
    while i < len(order):
        subset = order[i]
        row: Dict[int, int] = {}
        if subset is _UNIVERSAL:
            row = {p: i for p in range(len(alphabet))}
        else:
            for k in range(1, alphabet.K + 1):
                candidates = [m for s in subset for m in moves[s].get(k, ())]
                if not candidates:
                    continue
                base = (k - 1) * width
                for mask in range(width):
                    targets = frozenset(t for req, forb, t in candidates if mask & req == req and not mask & forb)
                    if not targets:
                        continue
                    nxt = canonical(closure(targets))
                    j = index.get(nxt)
                    if j is None:
                        j = len(order)
                        if j >= guard:
                            raise LimitExceededError(f"determinization exceeded {guard} states (determinize.max_states)")
                        order.append(nxt)
                        index[nxt] = j
                    row[base + mask] = j
        table.append(row)
        i += 1

    accept = frozenset(j for j, sub in enumerate(order) if sub is _UNIVERSAL or sub & accepting)
    dfa = Dfa(alphabet, 0, accept, tuple(table))
    logger.debug(f"Dfa built with {dfa.num_states} states and {dfa.num_transitions} transitions")
    return dfa


def complete(dfa: Dfa) -> Dfa:
    """Add a rejecting dead state for missing transitions (no-op on complete machines)."""
    if dfa.is_complete():
        return dfa
    dead = dfa.num_states
    size = len(dfa.alphabet)
    rows = [{p: row.get(p, dead) for p in range(size)} for row in dfa.table]
    rows.append({p: dead for p in range(size)})
    return Dfa(dfa.alphabet, dfa.start, dfa.accepting, tuple(rows))


def complement(dfa: Dfa) -> Dfa:
    full = complete(dfa)
    accepting = frozenset(range(full.num_states)) - full.accepting
    return Dfa(full.alphabet, full.start, accepting, full.table)


def reachable_states(dfa: Dfa) -> List[int]:
    """Reachable states in breadth-first order over symbol positions."""
    seen = {dfa.start}
    order = [dfa.start]
    queue = deque([dfa.start])
    while queue:
        s = queue.popleft()
        for p in sorted(dfa.table[s]):
            t = dfa.table[s][p]
            if t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)
    return order


def minimize(dfa: Dfa) -> Dfa:
    """
    Minimal complete machine by partition refinement, states renumbered in
    breadth-first order from the start state.
    """
    full = complete(dfa)
    states = reachable_states(full)
    size = len(full.alphabet)
    block = {s: int(s in full.accepting) for s in states}
    count = len(set(block.values()))
    while True:
        signatures = {s: (block[s],) + tuple(block[full.table[s][p]] for p in range(size)) for s in states}
        ranks = {sig: r for r, sig in enumerate(sorted(set(signatures.values())))}
        refined = {s: ranks[signatures[s]] for s in states}
        if len(ranks) == count:
            block = refined
            break
        block, count = refined, len(ranks)

    numbering: Dict[int, int] = {block[full.start]: 0}
    queue = deque([full.start])
    representative = {block[full.start]: full.start}
    while queue:
        s = queue.popleft()
        for p in range(size):
            b = block[full.table[s][p]]
            if b not in numbering:
                numbering[b] = len(numbering)
                representative[b] = full.table[s][p]
                queue.append(full.table[s][p])
    rows: List[Dict[int, int]] = [dict() for _ in numbering]
    for b, n in numbering.items():
        s = representative[b]
        rows[n] = {p: numbering[block[full.table[s][p]]] for p in range(size)}
    accepting = frozenset(numbering[block[s]] for s in states if s in full.accepting)
    result = Dfa(full.alphabet, 0, accepting, tuple(rows))
    logger.debug(f"Minimized dfa built with {result.num_states} states and {result.num_transitions} transitions")
    return result


def _word(alphabet: Alphabet, positions: Sequence[int]) -> DeterminationString:
    return DeterminationString(tuple(alphabet.symbol_at(p) for p in positions))


def find_difference(a: Dfa, b: Dfa) -> Optional[DeterminationString]:
    """
    A shortest string accepted by exactly one of the machines, or None if
    their languages are equal.

    Raises:
        AlphabetMismatchError: If the machines use different alphabets
    """
    alphabet = _check_same_alphabet([a, b])
    fa, fb = complete(a), complete(b)
    start = (fa.start, fb.start)
    parent: Dict[Tuple[int, int], Optional[Tuple[Tuple[int, int], int]]] = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        x, y = pair
        if (x in fa.accepting) != (y in fb.accepting):
            positions: List[int] = []
            node = pair
            while parent[node] is not None:
                node, p = parent[node]
                positions.append(p)
            return _word(alphabet, positions[::-1])
        for p in range(len(alphabet)):
            nxt = (fa.table[x][p], fb.table[y][p])
            if nxt not in parent:
                parent[nxt] = (pair, p)
                queue.append(nxt)
    return None


def equivalent(a: Dfa, b: Dfa) -> bool:
    return find_difference(a, b) is None


def is_empty(dfa: Dfa) -> Emptiness:
    """Emptiness by reachability; the witness is a shortest accepted string (breadth-first)."""
    parent: Dict[int, Optional[Tuple[int, int]]] = {dfa.start: None}
    queue = deque([dfa.start])
    while queue:
        s = queue.popleft()
        if s in dfa.accepting:
            positions: List[int] = []
            node = s
            while parent[node] is not None:
                node, p = parent[node]
                positions.append(p)
            return Emptiness(False, _word(dfa.alphabet, positions[::-1]))
        for p in sorted(dfa.table[s]):
            t = dfa.table[s][p]
            if t not in parent:
                parent[t] = (s, p)
                queue.append(t)
    return Emptiness(True)


def run(dfa: Dfa, word: Iterable[Symbol]) -> RunResult:
    """
    One left-to-right pass, one transition per symbol.

    Raises:
        AlphabetMismatchError: For a symbol outside the alphabet
    """
    state: Optional[int] = dfa.start
    transitions = 0
    for symbol in word:
        state = dfa.step(state, symbol)
        transitions += 1
    return RunResult(state is not None and state in dfa.accepting, transitions)


def live_states(dfa: Dfa) -> Set[int]:
    reverse: Dict[int, Set[int]] = {}
    for s, row in enumerate(dfa.table):
        for t in row.values():
            reverse.setdefault(t, set()).add(s)
    live = set(dfa.accepting)
    stack = list(live)
    while stack:
        for s in reverse.get(stack.pop(), ()):
            if s not in live:
                live.add(s)
                stack.append(s)
    return live


def accepted_strings(dfa: Dfa, max_length: int, limit: Optional[int] = None) -> Iterator[DeterminationString]:
    """Accepted strings of length <= max_length, shortest first, then by symbol order."""
    live = live_states(dfa)
    if dfa.start not in live:
        return
    layer: List[Tuple[Tuple[int, ...], int]] = [((), dfa.start)]
    produced = 0
    for length in range(max_length + 1):
        for positions, s in layer:
            if s in dfa.accepting:
                yield _word(dfa.alphabet, positions)
                produced += 1
                if limit is not None and produced >= limit:
                    return
        if length == max_length:
            break
        layer = [
            (positions + (p,), t)
            for positions, s in layer
            for p, t in sorted(dfa.table[s].items())
            if t in live
        ]


def format_dfa(dfa: Dfa) -> str:
    """Text export: alphabet, start, accept and one trans line per transition."""
    alphabet = dfa.alphabet
    lines = ["alphabet: " + " ".join(alphabet.render(s) for s in alphabet.symbols)]
    lines.append(f"start: S{dfa.start}")
    lines.append("accept: " + " ".join(f"S{s}" for s in sorted(dfa.accepting)))
    for s, row in enumerate(dfa.table):
        for p in sorted(row):
            lines.append(f"trans: S{s} {alphabet.render(alphabet.symbol_at(p))} S{row[p]}")
    return "\n".join(lines) + "\n"


def parse_dfa(text: str) -> Dfa:
    """
    Read the text export back.

    The vertex order is the order of first appearance in the alphabet line,
    which is the order format_dfa writes.

    Raises:
        FormatParseError: On malformed lines or an incomplete alphabet
    """
    listed: List[Symbol] = []
    start_name: Optional[str] = None
    accept_names: List[str] = []
    transitions: List[Tuple[int, str, Symbol, str]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive, _, rest = line.partition(":")
        tokens = rest.split()
        try:
            if directive == "alphabet":
                listed = [parse_symbol(tok, i) for i, tok in enumerate(tokens)]
            elif directive == "start":
                if len(tokens) != 1:
                    raise FormatParseError("'start' needs exactly one state", number)
                start_name = tokens[0]
            elif directive == "accept":
                accept_names = tokens
            elif directive == "trans":
                if len(tokens) != 3:
                    raise FormatParseError("'trans' needs source, symbol and target", number)
                transitions.append((number, tokens[0], parse_symbol(tokens[1]), tokens[2]))
            else:
                raise FormatParseError(f"unknown directive '{directive}'", number)
        except FormatParseError as e:
            if e.line_number is None:
                raise FormatParseError(str(e), number)
            raise
    if start_name is None:
        raise FormatParseError("missing 'start' line")

    vertices: List[str] = []
    for s in listed:
        for v in sorted(s.neighborhood):
            if v not in vertices:
                vertices.append(v)
    for s in listed:
        # singletons fix the declared order when present
        if len(s.neighborhood) == 1:
            (v,) = s.neighborhood
            vertices.remove(v)
            vertices.append(v)
    alphabet = Alphabet(tuple(vertices), max((s.index for s in listed), default=0))
    if set(listed) != set(alphabet.symbols):
        raise FormatParseError("alphabet line must list every symbol over its vertices and indices")

    names: Dict[str, int] = {start_name: 0}
    for _, src, _, dst in transitions:
        for n in (src, dst):
            names.setdefault(n, len(names))
    for n in accept_names:
        names.setdefault(n, len(names))
    rows: List[Dict[int, int]] = [dict() for _ in names]
    for number, src, symbol, dst in transitions:
        p = alphabet.position(symbol)
        if p in rows[names[src]] and rows[names[src]][p] != names[dst]:
            raise FormatParseError(f"state {src} has two transitions on {alphabet.render(symbol)}", number)
        rows[names[src]][p] = names[dst]
    return Dfa(alphabet, 0, frozenset(names[n] for n in accept_names), tuple(rows))


def to_dot(dfa: Dfa, name: str = "dfa") -> str:
    """Graph-description export; parallel transitions share one edge label."""
    alphabet = dfa.alphabet
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  __start [shape=point];", f"  __start -> S{dfa.start};"]
    for s in range(dfa.num_states):
        shape = "doublecircle" if s in dfa.accepting else "circle"
        lines.append(f"  S{s} [shape={shape}];")
    for s, row in enumerate(dfa.table):
        grouped: Dict[int, List[int]] = {}
        for p, t in sorted(row.items()):
            grouped.setdefault(t, []).append(p)
        for t, positions in grouped.items():
            labels = []
            for k in range(1, alphabet.K + 1):
                block = [p for p in positions if (p // alphabet.width) == k - 1]
                if len(block) == alphabet.width:
                    labels.append(f"{k}:*")
                else:
                    labels.extend(alphabet.render(alphabet.symbol_at(p)) for p in block)
            label = "\\n".join(labels)
            lines.append(f'  S{s} -> S{t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
