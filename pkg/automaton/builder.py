"""
Decision Machines

For a rungless h and a finite family F, the decision machine accepts a
string exactly when it is the determination string of an F-free
realization of h. It is the complement of the union of:

- the ill-formed machine, accepting strings that are no determination
  string of h at all;
- one search machine per search data D of every partial inclusion of every
  member of F into H, accepting strings of realizations that contain the
  member in the way D describes.
"""

import itertools
import logging
from typing import Dict, FrozenSet, Hashable, Iterable, List, Sequence, Set, Tuple

from core.utils import PreconditionError
from automaton.machines import Alphabet, Dfa, Nfa, SymbolPattern, complement, determinize, nfa_union
from automaton.partial import PartialInclusion, enumerate_partial_inclusions, strip_urpaths
from automaton.search_data import SearchData, SoughtObject, enumerate_search_data
from pathograph.model import Pathograph
from realization.strings import Symbol

logger = logging.getLogger(__name__)

__all__ = [
    "alphabet",
    "strip_urpaths",
    "build_md",
    "build_mphi",
    "build_illformed",
    "build_decision_dfa",
    "search_machines",
]


def _require_rungless(h: Pathograph) -> None:
    if not h.is_rungless:
        raise PreconditionError("decision machines are defined for rungless pathographs only")


def alphabet(h: Pathograph) -> List[Symbol]:
    """All K * 2^N symbols of h in canonical order (index first, then vertex bitmask)."""
    _require_rungless(h)
    return list(Alphabet.of(h).symbols)


def _subsets(items: FrozenSet[str]) -> List[FrozenSet[str]]:
    ordered = sorted(items)
    return [frozenset(c) for r in range(len(ordered) + 1) for c in itertools.combinations(ordered, r)]


def _add_object(nfa: Nfa, k: int, y: SoughtObject, sources: Sequence[Hashable]) -> None:
    right = ("right", y.name)
    if not y.is_connector:
        pattern = SymbolPattern(k, y.required, y.forbidden)
        for s in sources:
            nfa.add_move(s, pattern, right)
        return

    a, b = y.h_anchors()
    req, forb = y.required, y.forbidden
    subsets = _subsets(req)
    for s in sources:
        nfa.add_move(s, SymbolPattern(k, req | a | b, forb), right)
        for x in subsets:
            nfa.add_move(s, SymbolPattern(k, a | x, forb | b | (req - x)), ("acc", y.name, x))
    for x in subsets:
        state = ("acc", y.name, x)
        for z in subsets:
            nfa.add_move(state, SymbolPattern(k, z, forb | a | b | (req - z)), ("acc", y.name, x | z))
        nfa.add_move(state, SymbolPattern(k, (req - x) | b, forb | a), right)


def build_md(data: SearchData, h: Pathograph) -> Nfa:
    """
    Machine accepting strings whose realizations contain the sought objects
    of `data` in the described order.

    States: ('start', k) per index, ('acc', connector, seen) while reading a
    connector, ('right', y) just after object y, ('after', y) once at least
    one more symbol followed y, and ('accept',).
    """
    _require_rungless(h)
    K = h.K
    sigma = Alphabet.of(h)
    if K == 0:
        nfa = Nfa(sigma, ("start", 0), name="md")
        if not data.objects:
            nfa.add_state(nfa.start, accepting=True, absorbing=True)
        return nfa

    def start(k: int) -> Tuple:
        return ("start", k)

    def after_index(k: int) -> Tuple:
        return start(k + 1) if k < K else ("accept",)

    nfa = Nfa(sigma, start(1), name="md")
    for k in range(1, K + 1):
        nfa.add_move(start(k), SymbolPattern.any(k), start(k))
    nfa.add_state(("accept",), accepting=True, absorbing=True)
    nfa.add_move(("accept",), SymbolPattern.any(K), ("accept",))

    for k, order in enumerate(data.orders, start=1):
        if not order:
            nfa.add_epsilon(start(k), after_index(k))
            continue
        for i, name in enumerate(order):
            if i == 0:
                sources = [start(k)]
            else:
                prev = order[i - 1]
                gap = data.gap_between(prev, name)
                sources = {
                    "touch": [("right", prev)],
                    "gap": [("after", prev)],
                    "free": [("right", prev), ("after", prev)],
                }[gap]
            _add_object(nfa, k, data.object(name), sources)

            last = i == len(order) - 1
            if last or data.gap_between(name, order[i + 1]) in ("gap", "free"):
                nfa.add_move(("right", name), SymbolPattern.any(k), ("after", name))
                nfa.add_move(("after", name), SymbolPattern.any(k), ("after", name))
            if last:
                nfa.add_epsilon(("right", name), after_index(k))
                nfa.add_epsilon(("after", name), after_index(k))
    return nfa


def build_mphi(phi: PartialInclusion, f: Pathograph, h: Pathograph) -> Nfa:
    """Union of the search machines of every search data of phi."""
    _require_rungless(h)
    machines = [build_md(data, h) for data in enumerate_search_data(phi, f, h)]
    if not machines:
        return Nfa(Alphabet.of(h), ("empty",), name="mphi")
    return nfa_union(machines, name="mphi")


def build_illformed(h: Pathograph) -> Nfa:
    """
    Deterministic machine accepting every string that is not a determination
    string of h: index discipline, endpoint discipline and spoke discipline.
    """
    _require_rungless(h)
    sigma = Alphabet.of(h)
    K = h.K
    spokes = {i: frozenset(h.spokes_of(u.name)) for i, u in enumerate(h.urpaths, start=1)}
    ends = {i: u.ends for i, u in enumerate(h.urpaths, start=1)}
    others = {i: frozenset(h.vertices) - spokes[i] - set(ends[i]) for i in spokes}
    sink = ("sink",)

    def enter(k: int, nb: FrozenSet[str]) -> Hashable:
        a, b = ends[k]
        if a not in nb or nb & others[k]:
            return sink
        return (k, b in nb, nb & spokes[k])

    def step(state: Hashable, symbol: Symbol) -> Hashable:
        k, nb = symbol
        if state == sink:
            return sink
        if state == ("start",):
            return enter(1, nb) if k == 1 else sink
        i, had_b, seen = state
        if k < i:
            return sink
        if k == i:
            a, b = ends[i]
            if had_b or a in nb or nb & others[i]:
                return sink
            return (i, b in nb, seen | (nb & spokes[i]))
        if not had_b or seen != spokes[i] or k != i + 1:
            return sink
        return enter(k, nb)

    def accepting(state: Hashable) -> bool:
        if state == sink:
            return True
        if state == ("start",):
            return K >= 1
        i, had_b, seen = state
        return i < K or not had_b or seen != spokes[i]

    nfa = Nfa(sigma, ("start",), name="illformed")
    queue = [("start",)]
    seen_states: Set[Hashable] = {("start",)}
    while queue:
        state = queue.pop()
        nfa.add_state(state, accepting=accepting(state), absorbing=state == sink)
        if state == sink:
            for k in range(1, K + 1):
                nfa.add_move(sink, SymbolPattern.any(k), sink)
            continue
        for symbol in sigma.symbols:
            target = step(state, symbol)
            nfa.add_symbol_move(state, symbol, target)
            if target not in seen_states:
                seen_states.add(target)
                queue.append(target)
    logger.debug(f"Illformed built with {nfa.num_states} states and {nfa.num_transitions} transitions")
    return nfa


def _md_signature(data: SearchData) -> Tuple:
    """Structure of a search data with object names replaced by their positions."""
    position: Dict[str, int] = {}
    for order in data.orders:
        for name in order:
            position[name] = len(position)

    def anchor(a):
        if a is None:
            return None
        return ("x", position[a[1]]) if a[0] == "x" else a

    objects = tuple(
        (y.kind, anchor(y.anchors[0]), anchor(y.anchors[1]), tuple(sorted(y.required)), tuple(sorted(y.forbidden)))
        for order in data.orders
        for y in (data.object(n) for n in order)
    )
    shape = tuple(len(order) for order in data.orders)
    gaps = tuple(kind for _, _, kind in data.gaps)
    return (shape, objects, gaps)


def search_machines(h: Pathograph, family: Iterable[Pathograph]) -> List[Nfa]:
    """One search machine per structurally distinct search data over all members and partial inclusions."""
    _require_rungless(h)
    H = strip_urpaths(h)
    signatures: Set[Tuple] = set()
    machines: List[Nfa] = []
    total = 0
    for f in family:
        for phi in enumerate_partial_inclusions(f, H):
            for data in enumerate_search_data(phi, f, h):
                total += 1
                sig = _md_signature(data)
                if sig in signatures:
                    continue
                signatures.add(sig)
                machines.append(build_md(data, h))
    logger.debug(f"{len(machines)} distinct search machines from {total} search data")
    return machines


def build_decision_dfa(h: Pathograph, family: Iterable[Pathograph]) -> Dfa:
    """
    Deterministic machine accepting exactly the determination strings of the
    F-free realizations of h.

    Raises:
        PreconditionError: If h has rungs
    """
    _require_rungless(h)
    family = list(family)
    machines = [build_illformed(h)] + search_machines(h, family)
    union = nfa_union(machines, name="forbidden")
    dfa = complement(determinize(union, absorbing=union.absorbing))
    logger.info(f"Decision dfa built with {dfa.num_states} states and {dfa.num_transitions} transitions")
    return dfa
