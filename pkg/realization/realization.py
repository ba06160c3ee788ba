"""
Realizations

A realization replaces every urpath u(a, b) by an induced path a, x_1..x_m, b
with m >= 1 internal vertices named `u#k`. A spoke (v, u) is realized by at
least one edge from v to the internals of u and a missing spoke by none;
rungs work the same way between two internal paths.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Literal, Optional, Sequence, Tuple

from core.limits_loader import get_limit
from core.utils import LimitExceededError, NotARealizationError
from pathograph.inclusion import contains
from pathograph.model import Pathograph, pair

logger = logging.getLogger(__name__)


def internal_name(u: str, k: int) -> str:
    """Name of the k-th (1-based) internal vertex of urpath u."""
    return f"{u}#{k}"


@dataclass(frozen=True)
class Realization:
    """A graph realizing `source`, with the internal path of every urpath."""

    graph: Pathograph
    source: Pathograph
    internal_paths: Dict[str, Tuple[str, ...]] = field(hash=False)

    def lengths(self) -> Tuple[int, ...]:
        return tuple(len(self.internal_paths[u]) for u in self.source.urpath_names)

    def realizing_edges(self) -> List[Tuple[str, str]]:
        """Edges realizing spokes or rungs; path and source edges are excluded."""
        owner = {x: u for u, xs in self.internal_paths.items() for x in xs}
        out = []
        for a, b in self.graph.sorted_edges():
            ua, ub = owner.get(a), owner.get(b)
            if ua is not None and ub is not None:
                if ua != ub:
                    out.append((a, b))
            elif ua is not None or ub is not None:
                v, u = (b, ua) if ua is not None else (a, ub)
                if v not in self.source.endpoints(u):
                    out.append((a, b))
        return out


def realization_violations(g: Pathograph, h: Pathograph, internal_paths: Dict[str, Sequence[str]]) -> List[str]:
    """
    List the realization invariants that fail.

    Raises:
        NotARealizationError: If g lacks some vertex label of h
    """
    missing = [v for v in h.vertices if v not in g.vertices]
    if missing:
        raise NotARealizationError([f"graph lacks vertices of the pathograph: {missing}"])

    out: List[str] = []
    if set(internal_paths) != set(h.urpath_names):
        return [f"paths given for {sorted(internal_paths)} but urpaths are {sorted(h.urpath_names)}"]

    hv = set(h.vertices)
    owner: Dict[str, str] = {}
    for u in h.urpath_names:
        xs = list(internal_paths[u])
        if not xs:
            out.append(f"urpath {u} has no internal vertex")
        for x in xs:
            if x in hv:
                out.append(f"internal vertex {x} of {u} is a pathograph vertex")
            elif x in owner:
                out.append(f"internal vertex {x} used by both {owner[x]} and {u}")
            elif x not in g.vertices:
                out.append(f"internal vertex {x} of {u} missing from graph")
            else:
                owner[x] = u
    extra = [x for x in g.vertices if x not in hv and x not in owner]
    if extra:
        out.append(f"graph vertices outside the pathograph and its paths: {extra}")
    if out:
        return out

    for i, a in enumerate(h.vertices):
        for b in h.vertices[i + 1 :]:
            if h.has_edge(a, b) != g.has_edge(a, b):
                out.append(f"edge {a}-{b} differs from the pathograph")

    for u in h.urpaths:
        seq = [u.left, *internal_paths[u.name], u.right]
        for j, x in enumerate(seq):
            for k in range(j + 1, len(seq)):
                if g.has_edge(x, seq[k]) != (k == j + 1):
                    kind = "missing path edge" if k == j + 1 else "chord"
                    out.append(f"{kind} {x}-{seq[k]} on path of {u.name}")

    for u in h.urpaths:
        xs = internal_paths[u.name]
        for v in h.vertices:
            if v in u.ends:
                continue
            seen = any(g.has_edge(v, x) for x in xs)
            if seen and not h.has_spoke(v, u.name):
                out.append(f"{v} sees the path of {u.name} without a spoke")
            if not seen and h.has_spoke(v, u.name):
                out.append(f"spoke ({v}, {u.name}) unrealized")

    names = h.urpath_names
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            seen = any(g.has_edge(x, y) for x in internal_paths[a] for y in internal_paths[b])
            if seen != h.has_rung(a, b):
                out.append(f"rung {a}-{b} {'unrealized' if not seen else 'realized without a rung'}")
    return out


def is_realization(g: Pathograph, h: Pathograph, internal_paths: Dict[str, Sequence[str]]) -> bool:
    return not realization_violations(g, h, internal_paths)


def make_realization(g: Pathograph, h: Pathograph, internal_paths: Dict[str, Sequence[str]]) -> Realization:
    """Build a Realization after checking it, raising NotARealizationError otherwise."""
    problems = realization_violations(g, h, internal_paths)
    if problems:
        raise NotARealizationError(problems)
    return Realization(g, h, {u: tuple(xs) for u, xs in internal_paths.items()})


def _nonempty_subsets(items: Sequence) -> List[Tuple]:
    """Nonempty subsets in binary order (bit k selects items[k])."""
    return [
        tuple(items[k] for k in range(len(items)) if mask >> k & 1)
        for mask in range(1, 1 << len(items))
    ]


def length_tuples(k: int, max_internal: int) -> List[Tuple[int, ...]]:
    """Internal-length tuples, by total length then lexicographically."""
    tuples = list(itertools.product(range(1, max_internal + 1), repeat=k))
    return sorted(tuples, key=lambda t: (sum(t), t))


def realization_skeleton(h: Pathograph, lengths: Sequence[int]) -> Tuple[Pathograph, Dict[str, Tuple[str, ...]]]:
    """The graph of h with each urpath replaced by a bare induced path of the given length."""
    paths = {u.name: tuple(internal_name(u.name, k) for k in range(1, m + 1)) for u, m in zip(h.urpaths, lengths)}
    edges = set(h.edges)
    for u in h.urpaths:
        seq = [u.left, *paths[u.name], u.right]
        edges |= {pair(a, b) for a, b in zip(seq, seq[1:])}
    vertices = h.vertices + tuple(x for u in h.urpath_names for x in paths[u])
    return Pathograph(vertices=vertices, edges=frozenset(edges)), paths


def enumerate_realizations(h: Pathograph, max_internal: int) -> Iterator[Realization]:
    """
    Yield every realization of h with at most max_internal internal vertices per urpath.

    Lengths come by total then lexicographically; for each length tuple the
    spoke- and rung-realizing edge sets run through their nonempty subsets in
    binary order.

    Args:
        h: The pathograph
        max_internal: Bound on each m_i (>= 1)
    """
    if max_internal < 1:
        raise ValueError("max_internal must be at least 1")
    guard = get_limit("realizations.max_count")
    produced = 0
    for lengths in length_tuples(h.K, max_internal):
        base, paths = realization_skeleton(h, lengths)
        choices: List[List[Tuple]] = []
        for v, u in h.sorted_spokes():
            choices.append([tuple(pair(v, x) for x in subset) for subset in _nonempty_subsets(paths[u])])
        for a, b in h.sorted_rungs():
            cross = [(x, y) for x in paths[a] for y in paths[b]]
            choices.append([tuple(pair(x, y) for x, y in subset) for subset in _nonempty_subsets(cross)])
        for combo in itertools.product(*choices):
            produced += 1
            if produced > guard:
                raise LimitExceededError(f"more than {guard} realizations requested (realizations.max_count)")
            edges = set(base.edges)
            for group in combo:
                edges.update(group)
            graph = Pathograph(vertices=base.vertices, edges=frozenset(edges))
            yield Realization(graph, h, paths)
    logger.debug(f"Enumerated {produced} realizations up to {max_internal} internal vertices")


def count_realizations(h: Pathograph, max_internal: int) -> int:
    return sum(1 for _ in enumerate_realizations(h, max_internal))


def is_f_free(g: Pathograph, family: Iterable[Pathograph]) -> bool:
    """True iff the graph g contains no member of the family."""
    return not any(contains(g, f) for f in family)


def first_contained(g: Pathograph, family: Iterable[Pathograph]) -> Optional[Pathograph]:
    """The first member of the family contained in g, or None."""
    for f in family:
        if contains(g, f):
            return f
    return None


def is_minimal(r: Realization) -> bool:
    """True iff deleting any single spoke- or rung-realizing edge breaks the realization."""
    for a, b in r.realizing_edges():
        smaller = Pathograph(vertices=r.graph.vertices, edges=r.graph.edges - {pair(a, b)})
        if is_realization(smaller, r.source, r.internal_paths):
            return False
    return True


@dataclass(frozen=True)
class BoundedDecision:
    """Outcome of the bounded oracle: a witness, or unknown within the bound."""

    answer: Literal["yes", "unknown"]
    bound: int
    realization: Optional[Realization] = None
    examined: int = 0


def decide_bounded(h: Pathograph, family: Sequence[Pathograph], max_internal: int) -> BoundedDecision:
    """
    Semi-decide the realization problem by brute force.

    Args:
        h: The pathograph
        family: The forbidden pathographs
        max_internal: Bound on internal path lengths

    Returns:
        'yes' with the first F-free realization in enumeration order, or 'unknown'
    """
    examined = 0
    for r in enumerate_realizations(h, max_internal):
        examined += 1
        if is_f_free(r.graph, family):
            logger.info(f"Bounded oracle found an F-free realization after {examined} candidates")
            return BoundedDecision("yes", max_internal, r, examined)
    logger.warning(f"Bounded oracle exhausted {examined} realizations at bound {max_internal}: unknown")
    return BoundedDecision("unknown", max_internal, None, examined)
