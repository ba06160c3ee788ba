"""
Pathograph Inclusions

An inclusion maps vertices injectively to vertices and urpaths to internally
disjoint paths of the target, preserving adjacency both ways. A vertex is
adjacent to a path image when it sees the interior of the path (internal
vertices or urpaths on it); two path images are adjacent when their interiors
see each other. The check between an urpath and its own endpoints is carried
by the path being induced.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from core.utils import InternalError, PreconditionError
from pathograph.model import Pathograph
from pathograph.paths import PathSub, paths_between, path_violations

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Inclusion:
    """A witness that `source` is contained in `target`."""

    source: Pathograph
    target: Pathograph
    vertex_map: Dict[str, str] = field(hash=False)
    urpath_map: Dict[str, PathSub] = field(hash=False)

    def image_of(self, u: str) -> PathSub:
        """The urpath image oriented from the image of its left endpoint."""
        left, _ = self.source.endpoints(u)
        return self.urpath_map[u].oriented_from(self.vertex_map[left])


def identity_inclusion(p: Pathograph) -> Inclusion:
    """The inclusion of p into itself mapping each urpath to its own one-urpath path."""
    return Inclusion(
        source=p,
        target=p,
        vertex_map={v: v for v in p.vertices},
        urpath_map={u.name: PathSub((u.left, u.right), (u.name,)) for u in p.urpaths},
    )


def interior(path: PathSub) -> Tuple[Set[str], Set[str]]:
    """Interior of a path: its internal vertices and its urpaths."""
    return set(path.internal_vertices), set(path.urpaths)


def vertex_sees(target: Pathograph, x: str, path: PathSub) -> bool:
    iv, iu = interior(path)
    return any(target.has_edge(x, y) for y in iv) or any(target.has_spoke(x, u) for u in iu)


def paths_see(target: Pathograph, p: PathSub, q: PathSub) -> bool:
    pv, pu = interior(p)
    qv, qu = interior(q)
    if any(target.has_edge(a, b) for a in pv for b in qv):
        return True
    if any(target.has_spoke(a, u) for a in pv for u in qu):
        return True
    if any(target.has_spoke(b, u) for b in qv for u in pu):
        return True
    return any(target.has_rung(a, b) for a in pu for b in qu)


def inclusion_violations(phi: Inclusion) -> List[str]:
    """
    Independently check every Inclusion invariant.

    Returns:
        List of violations; empty when phi is a valid inclusion
    """
    f, g = phi.source, phi.target
    out: List[str] = []
    vm, um = phi.vertex_map, phi.urpath_map

    if set(vm) != set(f.vertices):
        out.append("vertex map domain differs from source vertices")
        return out
    if set(um) != set(f.urpath_names):
        out.append("urpath map domain differs from source urpaths")
        return out
    if len(set(vm.values())) != len(vm):
        out.append("vertex map not injective")
    if not set(vm.values()) <= set(g.vertices):
        out.append("vertex map leaves target")

    used_vertices = set(vm.values())
    seen_interior_v: Set[str] = set()
    seen_interior_u: Set[str] = set()
    for u in f.urpaths:
        path = um[u.name]
        problems = path_violations(g, path)
        if problems:
            out.append(f"image of {u.name} is not a path: {problems}")
            continue
        if {path.first, path.last} != {vm[u.left], vm[u.right]}:
            out.append(f"image of {u.name} has wrong endpoints")
        if not path.is_proper_image():
            out.append(f"image of {u.name} has no urpath and fewer than three vertices")
        iv, iu = interior(path)
        if iv & used_vertices:
            out.append(f"image of {u.name} passes through a vertex image")
        if iv & seen_interior_v or iu & seen_interior_u:
            out.append(f"image of {u.name} overlaps another urpath image")
        seen_interior_v |= iv
        seen_interior_u |= iu

    if out:
        return out

    for i, a in enumerate(f.vertices):
        for b in f.vertices[i + 1 :]:
            if f.has_edge(a, b) != g.has_edge(vm[a], vm[b]):
                out.append(f"edge {a}-{b} not preserved")
    for u in f.urpaths:
        for w in f.vertices:
            if w in u.ends:
                continue
            if f.has_spoke(w, u.name) != vertex_sees(g, vm[w], um[u.name]):
                out.append(f"spoke ({w}, {u.name}) not preserved")
    names = f.urpath_names
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            if f.has_rung(a, b) != paths_see(g, um[a], um[b]):
                out.append(f"rung {a}-{b} not preserved")
    return out


def _vertex_order(f: Pathograph) -> List[str]:
    """Vertices by decreasing constraint degree, ties in declaration order."""

    def degree(v: str) -> int:
        return len(f.neighbors(v)) + len(f.spoke_urpaths(v)) + len(f.urpaths_at(v))

    return sorted(f.vertices, key=lambda v: (-degree(v), f.vertices.index(v)))


class InclusionSearch:
    """Backtracking search for an inclusion f -> g."""

    def __init__(self, f: Pathograph, g: Pathograph):
        self.f = f
        self.g = g
        self.order = _vertex_order(f)
        self.index = paths_between(g) if f.urpaths else {}
        self.nodes = 0

    def run(self) -> Optional[Inclusion]:
        vm: Dict[str, str] = {}
        result = self._assign_vertex(0, vm)
        logger.debug(f"Inclusion search visited {self.nodes} nodes ({'found' if result else 'none'})")
        return result

    def _assign_vertex(self, i: int, vm: Dict[str, str]) -> Optional[Inclusion]:
        if i == len(self.order):
            return self._assign_urpath(0, vm, {}, set(), set())
        v = self.order[i]
        used = set(vm.values())
        for x in self.g.vertices:
            if x in used:
                continue
            self.nodes += 1
            if any(self.f.has_edge(v, w) != self.g.has_edge(x, y) for w, y in vm.items()):
                continue
            vm[v] = x
            found = self._assign_vertex(i + 1, vm)
            if found is not None:
                return found
            del vm[v]
        return None

    def _candidates(self, u: str, vm: Dict[str, str]) -> Tuple[PathSub, ...]:
        left, right = self.f.endpoints(u)
        return self.index.get(frozenset((vm[left], vm[right])), ())

    def _assign_urpath(
        self,
        j: int,
        vm: Dict[str, str],
        um: Dict[str, PathSub],
        used_v: Set[str],
        used_u: Set[str],
    ) -> Optional[Inclusion]:
        f, g = self.f, self.g
        if j == f.K:
            return Inclusion(f, g, dict(vm), dict(um))
        u = f.urpaths[j]
        images = set(vm.values())
        for path in self._candidates(u.name, vm):
            self.nodes += 1
            if not path.is_proper_image():
                continue
            iv, iu = interior(path)
            if iv & images or iv & used_v or iu & used_u:
                continue
            if any(
                f.has_spoke(w, u.name) != vertex_sees(g, vm[w], path)
                for w in f.vertices
                if w not in u.ends
            ):
                continue
            if any(f.has_rung(u.name, other) != paths_see(g, path, q) for other, q in um.items()):
                continue
            um[u.name] = path.oriented_from(vm[u.left])
            found = self._assign_urpath(j + 1, vm, um, used_v | iv, used_u | iu)
            if found is not None:
                return found
            del um[u.name]
        return None


def find_inclusion(f: Pathograph, g: Pathograph) -> Optional[Inclusion]:
    """
    Search for an inclusion of f into g.

    Vertices are assigned in decreasing constraint degree; urpath images are
    tried shortest first. The search is deterministic given input ordering.

    Args:
        f: Source pathograph
        g: Target pathograph

    Returns:
        An Inclusion witness or None
    """
    if f.N > g.N:
        return None
    return InclusionSearch(f, g).run()


def contains(g: Pathograph, f: Pathograph) -> bool:
    """
    True iff some induced subgraph of the graph g realizes f.

    Raises:
        PreconditionError: If g has urpaths, spokes or rungs
    """
    if not g.is_graph:
        raise PreconditionError("contains() expects an urpath-free graph as host")
    return find_inclusion(f, g) is not None


def _map_connector(psi: Inclusion, a: str, c: Optional[str], b: str) -> PathSub:
    """Image under psi of the step a -c- b, oriented from psi(a)."""
    if c is None:
        return PathSub((psi.vertex_map[a], psi.vertex_map[b]), (None,))
    return psi.urpath_map[c].oriented_from(psi.vertex_map[a])


def compose(phi: Inclusion, psi: Inclusion) -> Inclusion:
    """
    Compose inclusions A -> B and B -> C into A -> C.

    Raises:
        PreconditionError: If the codomain of phi is not the domain of psi
        InternalError: If the composition is not an inclusion
    """
    if phi.target != psi.source:
        raise PreconditionError("codomain of the first inclusion must be the domain of the second")

    vm = {v: psi.vertex_map[x] for v, x in phi.vertex_map.items()}
    um: Dict[str, PathSub] = {}
    for u, path in phi.urpath_map.items():
        vertices = [psi.vertex_map[path.first]]
        connectors: List[Optional[str]] = []
        for a, c, b in zip(path.vertices, path.connectors, path.vertices[1:]):
            step = _map_connector(psi, a, c, b)
            vertices.extend(step.vertices[1:])
            connectors.extend(step.connectors)
        um[u] = PathSub(tuple(vertices), tuple(connectors))

    xi = Inclusion(phi.source, psi.target, vm, um)
    problems = inclusion_violations(xi)
    if problems:
        raise InternalError(f"composition is not an inclusion: {problems}")
    return xi
