"""
Partial Inclusions into the Urpath-Free Part

Any inclusion of a pathograph F into a realization G of a rungless h leaves a
trace on H (h with its urpaths deleted): vertex images that land in H, and
for every urpath the pieces of its image path that run through H. A partial
inclusion records exactly that trace. Vertices with no image in H map to
None; the pieces ("fragments") of an urpath image are induced paths of H,
pairwise disjoint and nonadjacent. An urpath whose whole image lies in H is
"completed".
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from pathograph.model import Pathograph
from pathograph.paths import PathSub, enumerate_paths

logger = logging.getLogger(__name__)

Owner = Tuple[str, str]


def strip_urpaths(h: Pathograph) -> Pathograph:
    """The graph H formed by deleting all urpaths of h."""
    return h.without_urpaths()


@dataclass(frozen=True, eq=False)
class PartialInclusion:
    source: Pathograph
    target: Pathograph
    vertex_map: Dict[str, Optional[str]] = field(hash=False)
    fragment_map: Dict[str, Optional[FrozenSet[PathSub]]] = field(hash=False)

    @property
    def key(self) -> Tuple:
        vm = tuple(sorted(self.vertex_map.items(), key=lambda kv: kv[0]))
        fm = tuple(
            (u, None if frags is None else frozenset(p.key for p in frags))
            for u, frags in sorted(self.fragment_map.items())
        )
        return (vm, fm)

    def __eq__(self, other) -> bool:
        return isinstance(other, PartialInclusion) and self.source == other.source and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def endpoint_images(self, u: str) -> Tuple[Optional[str], Optional[str]]:
        a, b = self.source.endpoints(u)
        return self.vertex_map[a], self.vertex_map[b]

    def is_completed(self, u: str) -> bool:
        frags = self.fragment_map[u]
        ia, ib = self.endpoint_images(u)
        if frags is None or len(frags) != 1 or ia is None or ib is None:
            return False
        (only,) = frags
        return {only.first, only.last} == {ia, ib}

    def completed_path(self, u: str) -> PathSub:
        (only,) = self.fragment_map[u]
        return only.oriented_from(self.endpoint_images(u)[0])

    def fragment_at(self, u: str, vertex: str) -> Optional[PathSub]:
        """The fragment of u having `vertex` as an end, oriented to start there."""
        for frag in self.fragment_map[u] or ():
            if vertex in (frag.first, frag.last):
                return frag.oriented_from(vertex)
        return None

    def h_interior(self, u: str) -> Set[str]:
        """Fragment vertices of u other than its endpoint images."""
        ends = {x for x in self.endpoint_images(u) if x is not None}
        return {x for frag in self.fragment_map[u] or () for x in frag.vertices} - ends

    @property
    def defined_vertices(self) -> List[str]:
        return [v for v in self.source.vertices if self.vertex_map[v] is not None]

    @property
    def undefined_vertices(self) -> List[str]:
        return [v for v in self.source.vertices if self.vertex_map[v] is None]

    def owners(self) -> Dict[str, Owner]:
        """Image vertices of H: ('v', w) for the image of w, ('u', u) for fragment interiors."""
        out: Dict[str, Owner] = {}
        for w, x in self.vertex_map.items():
            if x is not None:
                out[x] = ("v", w)
        for u in self.source.urpath_names:
            for x in self.h_interior(u):
                out[x] = ("u", u)
        return out

    def describe(self) -> str:
        vm = " ".join(f"{v}->{x if x is not None else '?'}" for v, x in self.vertex_map.items())
        parts = []
        for u, frags in self.fragment_map.items():
            if frags is None:
                parts.append(f"{u}:?")
            else:
                body = ",".join("-".join(p.vertices) for p in sorted(frags, key=lambda p: p.vertices))
                parts.append(f"{u}:{{{body}}}")
        return f"{vm} | {' '.join(parts)}"


def _vertex_maps(f: Pathograph, H: Pathograph) -> Iterator[Dict[str, Optional[str]]]:
    order = list(f.vertices)
    current: Dict[str, Optional[str]] = {}
    used: Set[str] = set()

    def extend(i: int) -> Iterator[Dict[str, Optional[str]]]:
        if i == len(order):
            yield dict(current)
            return
        v = order[i]
        current[v] = None
        yield from extend(i + 1)
        for x in H.vertices:
            if x in used:
                continue
            if any(
                y is not None and f.has_edge(v, w) != H.has_edge(x, y)
                for w, y in current.items()
                if w != v
            ):
                continue
            current[v] = x
            used.add(x)
            yield from extend(i + 1)
            used.discard(x)
        del current[v]

    yield from extend(0)


def _nonadjacent(H: Pathograph, p: PathSub, q: PathSub) -> bool:
    return not set(p.vertices) & set(q.vertices) and not any(
        H.has_edge(x, y) for x in p.vertices for y in q.vertices
    )


class _FragmentSearch:
    """Backtracking over urpaths in index order, one fragment set per urpath."""

    def __init__(self, f: Pathograph, H: Pathograph, vertex_map: Dict[str, Optional[str]]):
        self.f = f
        self.H = H
        self.vm = vertex_map
        self.images = {x for x in vertex_map.values() if x is not None}
        self.paths = sorted(enumerate_paths(H), key=lambda p: (len(p.vertices), [H.vertices.index(x) for x in p.vertices]))

    def pool(self, ends: Set[str], taken: Set[str]) -> List[PathSub]:
        out = []
        for p in self.paths:
            inner = set(p.internal_vertices)
            if inner & self.images:
                continue
            if not {p.first, p.last} & self.images <= ends:
                continue
            if (set(p.vertices) - self.images) & taken:
                continue
            out.append(p)
        return out

    def options(self, u: str, taken: Set[str]) -> Iterator[Optional[FrozenSet[PathSub]]]:
        a, b = self.f.endpoints(u)
        ia, ib = self.vm[a], self.vm[b]
        if ia is None and ib is None:
            yield None
        ends = {x for x in (ia, ib) if x is not None}
        pool = self.pool(ends, taken)
        chosen: List[PathSub] = []

        def grow(start: int) -> Iterator[FrozenSet[PathSub]]:
            if chosen and self._acceptable(chosen, ia, ib):
                yield frozenset(chosen)
            for i in range(start, len(pool)):
                p = pool[i]
                if all(_nonadjacent(self.H, p, q) for q in chosen):
                    chosen.append(p)
                    yield from grow(i + 1)
                    chosen.pop()

        yield from grow(0)

    def _acceptable(self, chosen: List[PathSub], ia: Optional[str], ib: Optional[str]) -> bool:
        ends = {x for p in chosen for x in (p.first, p.last)}
        for x in (ia, ib):
            if x is not None and x not in ends:
                return False
        if ia is not None and ib is not None:
            for p in chosen:
                if ia in p.vertices and ib in p.vertices:
                    return len(chosen) == 1 and len(p.vertices) >= 3
        return True

    def _completed_ok(self, u: str, frags: Optional[FrozenSet[PathSub]], done: Dict[str, Optional[FrozenSet[PathSub]]]) -> bool:
        if frags is None or len(frags) != 1:
            return True
        (path,) = frags
        a, b = self.f.endpoints(u)
        ia, ib = self.vm[a], self.vm[b]
        if ia is None or ib is None or {path.first, path.last} != {ia, ib}:
            return True
        interior = set(path.internal_vertices)
        for w in self.f.vertices:
            x = self.vm[w]
            if x is None or w in (a, b):
                continue
            if self.f.has_spoke(w, u) != any(self.H.has_edge(x, y) for y in interior):
                return False
        for other, ofrags in done.items():
            if ofrags is None or len(ofrags) != 1:
                continue
            (opath,) = ofrags
            oa, ob = self.f.endpoints(other)
            if {opath.first, opath.last} != {self.vm[oa], self.vm[ob]}:
                continue
            ointerior = set(opath.internal_vertices)
            if self.f.has_rung(u, other) != any(self.H.has_edge(x, y) for x in interior for y in ointerior):
                return False
        return True

    def run(self) -> Iterator[Dict[str, Optional[FrozenSet[PathSub]]]]:
        names = list(self.f.urpath_names)
        done: Dict[str, Optional[FrozenSet[PathSub]]] = {}

        def extend(i: int, taken: Set[str]) -> Iterator[Dict[str, Optional[FrozenSet[PathSub]]]]:
            if i == len(names):
                yield dict(done)
                return
            u = names[i]
            for frags in self.options(u, taken):
                if not self._completed_ok(u, frags, done):
                    continue
                fresh = {x for p in frags or () for x in p.vertices} - self.images
                done[u] = frags
                yield from extend(i + 1, taken | fresh)
                del done[u]

        yield from extend(0, set())


def enumerate_partial_inclusions(f: Pathograph, H: Pathograph) -> List[PartialInclusion]:
    """
    Every partial inclusion of f into the graph H, up to fragment-set identity.

    Vertices are tried in declaration order, each either undefined or an
    unused vertex of H with edges preserved exactly among defined vertices.
    Completed urpaths must also preserve spokes to defined vertices and
    rungs to other completed urpaths; everything else involving vertices
    outside H is left to the search data.
    """
    found: Dict[Tuple, PartialInclusion] = {}
    for vm in _vertex_maps(f, H):
        for fm in _FragmentSearch(f, H, vm).run():
            phi = PartialInclusion(f, H, vm, fm)
            found.setdefault(phi.key, phi)
    logger.debug(f"{len(found)} partial inclusions of ({f.describe()}) into a {H.N}-vertex graph")
    return list(found.values())
