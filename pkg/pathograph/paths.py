"""
Paths in Pathographs

A path is an alternating sequence vertex, connector, vertex, ... where each
connector is an edge or an urpath of the host. The subpathograph on its
vertices and urpaths (all edges among its vertices, no other urpaths) must
itself be a path: no chords, no spokes, no rungs.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from pathograph.model import Pathograph, pair

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PathSub:
    """
    An oriented path of a host pathograph.

    Attributes:
        vertices: Vertices in path order
        connectors: One entry per consecutive vertex pair: None for an edge,
            otherwise the urpath id
    """

    vertices: Tuple[str, ...]
    connectors: Tuple[Optional[str], ...] = ()

    def __post_init__(self):
        if len(self.connectors) != max(0, len(self.vertices) - 1):
            raise ValueError("a path needs exactly one connector between consecutive vertices")

    @property
    def key(self) -> Tuple[FrozenSet[str], FrozenSet[str]]:
        return (frozenset(self.vertices), self.urpaths)

    def __eq__(self, other) -> bool:
        return isinstance(other, PathSub) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def urpaths(self) -> FrozenSet[str]:
        return frozenset(c for c in self.connectors if c is not None)

    @property
    def first(self) -> str:
        return self.vertices[0]

    @property
    def last(self) -> str:
        return self.vertices[-1]

    @property
    def internal_vertices(self) -> Tuple[str, ...]:
        return self.vertices[1:-1]

    @property
    def length(self) -> int:
        """Number of connectors."""
        return len(self.connectors)

    def is_proper_image(self) -> bool:
        """Contains at least one urpath or at least three vertices."""
        return bool(self.urpaths) or len(self.vertices) >= 3

    def reversed(self) -> "PathSub":
        return PathSub(tuple(reversed(self.vertices)), tuple(reversed(self.connectors)))

    def oriented_from(self, start: str) -> "PathSub":
        if self.first == start:
            return self
        if self.last == start:
            return self.reversed()
        raise ValueError(f"'{start}' is not an end of the path")

    def elements(self) -> List[str]:
        """Alternating vertices and connector labels ('-' for an edge)."""
        out = [self.vertices[0]]
        for c, v in zip(self.connectors, self.vertices[1:]):
            out.append(c if c is not None else "-")
            out.append(v)
        return out

    def __repr__(self) -> str:
        return f"PathSub({' '.join(self.elements())})"


def touches(host: Pathograph, vertex: str, vertices: Set[str], urpaths: Set[str]) -> bool:
    """True iff vertex has an edge into `vertices` or a spoke to one of `urpaths`."""
    if any(host.has_edge(vertex, x) for x in vertices):
        return True
    return any(host.has_spoke(vertex, u) for u in urpaths)


def path_violations(host: Pathograph, path: PathSub) -> List[str]:
    """Invariant violations of a candidate path in host; empty when valid."""
    out = []
    vs = path.vertices
    if len(set(vs)) != len(vs):
        out.append("repeated vertex")
    for a, c, b in zip(vs, path.connectors, vs[1:]):
        if c is None:
            if not host.has_edge(a, b):
                out.append(f"no edge {a}-{b}")
        elif set(host.endpoints(c)) != {a, b}:
            out.append(f"urpath {c} does not join {a} and {b}")
    if len(path.urpaths) != len([c for c in path.connectors if c is not None]):
        out.append("repeated urpath")
    for i, a in enumerate(vs):
        for j in range(i + 2, len(vs)):
            if host.has_edge(a, vs[j]):
                out.append(f"chord {a}-{vs[j]}")
    for v in vs:
        for u in path.urpaths:
            if host.has_spoke(v, u):
                out.append(f"spoke ({v}, {u}) inside path")
    us = sorted(path.urpaths)
    for i, a in enumerate(us):
        for b in us[i + 1 :]:
            if host.has_rung(a, b):
                out.append(f"rung {a}-{b} inside path")
    return out


def _extensions(host: Pathograph, last: str) -> Iterator[Tuple[Optional[str], str]]:
    for w in sorted(host.neighbors(last), key=host.vertices.index):
        yield None, w
    for u in host.urpaths:
        if last == u.left:
            yield u.name, u.right
        elif last == u.right:
            yield u.name, u.left


@lru_cache(maxsize=256)
def enumerate_paths(p: Pathograph) -> FrozenSet[PathSub]:
    """
    Every path of p up to element-set identity, single vertices included.

    For a Graph this is the set of induced paths.
    """
    found: Dict[Tuple[FrozenSet[str], FrozenSet[str]], PathSub] = {}

    def grow(vs: List[str], cs: List[Optional[str]], used_u: Set[str]) -> None:
        path = PathSub(tuple(vs), tuple(cs))
        found.setdefault(path.key, path)
        on_path = set(vs)
        for c, w in _extensions(p, vs[-1]):
            if w in on_path or (c is not None and c in used_u):
                continue
            # no chord from w back to earlier vertices
            if any(p.has_edge(w, x) for x in vs[:-1]):
                continue
            new_u = used_u | ({c} if c is not None else set())
            if any(p.has_spoke(w, u) for u in new_u):
                continue
            if c is not None:
                if any(p.has_spoke(x, c) for x in vs):
                    continue
                if any(p.has_rung(c, u) for u in used_u):
                    continue
            vs.append(w)
            cs.append(c)
            grow(vs, cs, new_u)
            vs.pop()
            cs.pop()

    for v in p.vertices:
        grow([v], [], set())
    logger.debug(f"Enumerated {len(found)} paths in pathograph ({p.describe()})")
    return frozenset(found.values())


@lru_cache(maxsize=256)
def paths_between(p: Pathograph) -> Dict[FrozenSet[str], Tuple[PathSub, ...]]:
    """
    Paths of p indexed by their unordered endpoint pair, shortest first.

    Only paths with at least two vertices are indexed.
    """
    index: Dict[FrozenSet[str], List[PathSub]] = {}
    for path in enumerate_paths(p):
        if len(path.vertices) < 2:
            continue
        index.setdefault(pair(path.first, path.last), []).append(path)
    return {
        k: tuple(sorted(v, key=lambda q: (q.length, sorted(q.vertices), sorted(q.urpaths))))
        for k, v in index.items()
    }
