"""
Closed Families

When F is closed under adding edges, spokes and rungs, a pathograph with
rungs can be decided by replacing one rung at a time: every minimal
realization realizes the rung by a single edge between one internal vertex
of each urpath, so the pathograph splits into finitely many pathographs with
one rung fewer, and has an F-free realization iff one of them does. Rungless
pathographs go to the decision machine.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

from automaton.builder import build_decision_dfa
from automaton.machines import is_empty
from core.utils import PreconditionError, UnknownElementError
from containment.closures import add_elements, addable_elements
from pathograph.inclusion import contains
from pathograph.isomorphism import CanonicalKey, canonical_key, key_set
from pathograph.model import Pathograph, Urpath, pair, pair_items
from realization.strings import DeterminationString

logger = logging.getLogger(__name__)

Element = Tuple[str, Tuple[str, str]]


@dataclass(frozen=True)
class ClosednessReport:
    closed: bool
    counterexample: Optional[Tuple[Pathograph, Element]] = None

    def __bool__(self) -> bool:
        return self.closed


def is_closed(family: Iterable[Pathograph]) -> ClosednessReport:
    """
    Check that adding any single edge, spoke or rung to a member yields a member
    up to isomorphism; closure under one addition implies closure under many.
    """
    members = list(family)
    keys = key_set(members)
    for p in members:
        for element in addable_elements(p):
            q = add_elements(p, [element])
            if canonical_key(q) not in keys:
                logger.debug(f"Family not closed: adding {element[0]} {element[1]} to ({p.describe()})")
                return ClosednessReport(False, (p, element))
    return ClosednessReport(True)


def _fresh(name: str, taken: Set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


class _Split(NamedTuple):
    """One way to cut urpath u at the internal vertex c that carries the rung edge."""

    u: str
    c: str
    urpaths: Tuple[Urpath, ...]
    edges: Tuple[Tuple[str, str], ...]
    halves: Tuple[str, ...]


def _splits(h: Pathograph, u: str, taken: Set[str]) -> List[_Split]:
    a, b = h.endpoints(u)
    c = _fresh(f"{u}_c", taken)
    half_a = _fresh(f"{u}_a", taken)
    half_b = _fresh(f"{u}_b", taken)
    out = []
    for a_long, b_long in itertools.product((False, True), repeat=2):
        urpaths, edges, halves = [], [], []
        if a_long:
            urpaths.append(Urpath(half_a, a, c))
            halves.append(half_a)
        else:
            edges.append((a, c))
        if b_long:
            urpaths.append(Urpath(half_b, c, b))
            halves.append(half_b)
        else:
            edges.append((c, b))
        out.append(_Split(u, c, tuple(urpaths), tuple(edges), tuple(halves)))
    return out


def _ordered_rung(h: Pathograph, rung: Tuple[str, str]) -> Tuple[str, str]:
    x, y = rung
    return (x, y) if h.index_of(x) <= h.index_of(y) else (y, x)


def eliminate_rung(h: Pathograph, rung: Tuple[str, str]) -> List[Pathograph]:
    """
    The pathographs obtained by realizing `rung` with a single edge c1-c2.

    Each of the two urpaths is cut at its new vertex c into edge-or-urpath
    halves (4 ways). Every spoke (v, u) on a cut urpath becomes the edge v-c
    or a spoke to one of the urpath halves; every other rung (u, w) becomes
    the spoke (c, w) or a rung from w to one of the halves.

    Raises:
        UnknownElementError: If the rung is not in h
    """
    if pair(*rung) not in h.rungs:
        raise UnknownElementError(f"rung {rung[0]}-{rung[1]} not in pathograph")
    u1, u2 = _ordered_rung(h, rung)
    cut = {u1, u2}
    taken = set(h.vertices) | set(h.urpath_names)
    splits = {u: _splits(h, u, taken) for u in (u1, u2)}

    kept_spokes = [s for s in h.spokes if s[1] not in cut]
    kept_rungs = [pair_items(r) for r in h.rungs if not r & cut]
    moved_spokes = sorted(s for s in h.spokes if s[1] in cut)
    moved_rungs = []
    for r in h.sorted_rungs():
        if set(r) == cut:
            continue
        for u in (u1, u2):
            if u in r:
                moved_rungs.append((u, r[0] if r[1] == u else r[1]))

    found: Dict[Pathograph, None] = {}
    for s1, s2 in itertools.product(splits[u1], splits[u2]):
        by_urpath = {u1: s1, u2: s2}
        options: List[List[Element]] = []
        for v, u in moved_spokes:
            split = by_urpath[u]
            options.append([("edge", (v, split.c))] + [("spoke", (v, half)) for half in split.halves])
        for u, w in moved_rungs:
            split = by_urpath[u]
            options.append([("spoke", (split.c, w))] + [("rung", (w, half)) for half in split.halves])

        urpaths: List[Urpath] = []
        for up in h.urpaths:
            urpaths.extend(by_urpath[up.name].urpaths if up.name in cut else (up,))
        base = Pathograph(
            vertices=h.vertices + (s1.c, s2.c),
            urpaths=tuple(urpaths),
            edges=h.edges | {pair(x, y) for x, y in s1.edges + s2.edges} | {pair(s1.c, s2.c)},
            spokes=frozenset(kept_spokes),
            rungs=frozenset(pair(x, y) for x, y in kept_rungs),
        )
        for chosen in itertools.product(*options):
            member = add_elements(base, chosen)
            if member.validate():
                continue
            found.setdefault(member, None)
    result = list(found)
    logger.debug(f"Eliminating rung {u1}-{u2} of ({h.describe()}) gives {len(result)} pathographs")
    return result


def first_rung(h: Pathograph) -> Tuple[str, str]:
    """The lexicographically first rung as a sorted id pair."""
    return min(pair_items(r) for r in h.rungs)


class CacheInfo(NamedTuple):
    hits: int
    misses: int
    size: int


@dataclass(frozen=True)
class ClosedDecision:
    """Answer for one pathograph; a yes carries the rungless member and a witness string."""

    answer: bool
    member: Optional[Pathograph] = None
    witness: Optional[DeterminationString] = None

    def __bool__(self) -> bool:
        return self.answer


class ClosedDecider:
    """
    Rung elimination with a memo keyed by canonical key.

    Args:
        family: The forbidden family, closed under adding edges, spokes and rungs
        check_closed: Verify closedness first and raise PreconditionError if not
    """

    def __init__(self, family: Sequence[Pathograph], check_closed: bool = True):
        self.family = list(family)
        if check_closed:
            report = is_closed(self.family)
            if not report.closed:
                p, (kind, item) = report.counterexample
                raise PreconditionError(
                    "forbidden family is not closed under adding edges, spokes and rungs",
                    counterexample=f"adding {kind} {item[0]}-{item[1]} to ({p.describe()})",
                )
        self._memo: Dict[CanonicalKey, ClosedDecision] = {}
        self._hits = 0
        self._misses = 0

    def cache_info(self) -> CacheInfo:
        return CacheInfo(self._hits, self._misses, len(self._memo))

    def _contains_member(self, h: Pathograph) -> bool:
        graph = h.without_urpaths()
        return any(contains(graph, f) for f in self.family)

    def decide(self, h: Pathograph, depth: int = 0) -> ClosedDecision:
        key = canonical_key(h)
        if key in self._memo:
            self._hits += 1
            return self._memo[key]
        self._misses += 1

        if self._contains_member(h):
            logger.debug(f"{'  ' * depth}Closed branch ({h.describe()}): urpath-free part already contains a member")
            result = ClosedDecision(False)
        elif h.is_rungless:
            verdict = is_empty(build_decision_dfa(h, self.family))
            result = ClosedDecision(not verdict.empty, h if not verdict.empty else None, verdict.witness)
            logger.debug(f"{'  ' * depth}Closed branch ({h.describe()}): rungless, {'yes' if result else 'no'}")
        else:
            members = eliminate_rung(h, first_rung(h))
            logger.debug(f"{'  ' * depth}Closed branch ({h.describe()}): {len(h.rungs)} rungs, {len(members)} members")
            result = ClosedDecision(False)
            for member in members:
                branch = self.decide(member, depth + 1)
                if branch:
                    result = branch
                    break
        self._memo[key] = result
        return result


def decide_closed(h: Pathograph, family: Sequence[Pathograph]) -> ClosedDecision:
    """
    Decide whether h has an F-free realization for a closed family F.

    Raises:
        PreconditionError: If F is not closed, with the single-addition counterexample
    """
    decision = ClosedDecider(family).decide(h)
    logger.info(f"Decision for ({h.describe()}) via closed: {'yes' if decision else 'no'}")
    return decision
