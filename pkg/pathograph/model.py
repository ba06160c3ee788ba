"""
Pathograph Data Model

A pathograph is a graph-like object with vertices, urpaths (placeholders for
induced paths), edges, spokes (vertex-urpath adjacencies), rungs
(urpath-urpath adjacencies) and an oriented endpoint pair per urpath. The
urpath list is ordered; its order defines the urpath index 1..K used by
determination strings.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Set, Tuple

import networkx as nx

from core.utils import UnknownElementError, ValidationError

logger = logging.getLogger(__name__)

Pair = FrozenSet[str]


def pair(a: str, b: str) -> Pair:
    """Unordered pair used for edges and rungs."""
    return frozenset((a, b))


def pair_items(p: Pair) -> Tuple[str, str]:
    """Sorted members of an unordered pair (a loop yields the same id twice)."""
    items = sorted(p)
    if len(items) == 1:
        return items[0], items[0]
    return items[0], items[1]


class Urpath(NamedTuple):
    name: str
    left: str
    right: str

    @property
    def ends(self) -> Tuple[str, str]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Pathograph:
    """The 6-tuple (V, U, E, S, R, pi) with ordered vertices and urpaths."""

    vertices: Tuple[str, ...]
    urpaths: Tuple[Urpath, ...] = ()
    edges: FrozenSet[Pair] = frozenset()
    spokes: FrozenSet[Tuple[str, str]] = frozenset()
    rungs: FrozenSet[Pair] = frozenset()

    @classmethod
    def build(
        cls,
        vertices: Iterable[str],
        edges: Iterable[Tuple[str, str]] = (),
        urpaths: Iterable[Tuple[str, str, str]] = (),
        spokes: Iterable[Tuple[str, str]] = (),
        rungs: Iterable[Tuple[str, str]] = (),
    ) -> "Pathograph":
        """
        Build a pathograph from plain iterables.

        Args:
            vertices: Vertex ids in declaration order
            edges: (a, b) vertex pairs
            urpaths: (name, left, right) triples; listing order is the urpath index
            spokes: (vertex, urpath) pairs
            rungs: (urpath, urpath) pairs

        Returns:
            The pathograph; call validate() or ensure_valid() to check invariants
        """
        return cls(
            vertices=tuple(dict.fromkeys(vertices)),
            urpaths=tuple(Urpath(*u) for u in urpaths),
            edges=frozenset(pair(a, b) for a, b in edges),
            spokes=frozenset((v, u) for v, u in spokes),
            rungs=frozenset(pair(a, b) for a, b in rungs),
        )

    @classmethod
    def graph(cls, vertices: Iterable[str], edges: Iterable[Tuple[str, str]] = ()) -> "Pathograph":
        """Build an urpath-free pathograph, i.e. a plain graph."""
        return cls.build(vertices, edges)

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Pathograph":
        """Build a Graph pathograph from a networkx graph with string-convertible nodes."""
        return cls.graph([str(v) for v in g.nodes], [(str(a), str(b)) for a, b in g.edges])

    # sizes and lookups

    @property
    def K(self) -> int:
        return len(self.urpaths)

    @property
    def N(self) -> int:
        return len(self.vertices)

    @property
    def is_graph(self) -> bool:
        return not self.urpaths and not self.spokes and not self.rungs

    @property
    def is_rungless(self) -> bool:
        return not self.rungs

    @property
    def urpath_names(self) -> Tuple[str, ...]:
        return tuple(u.name for u in self.urpaths)

    def urpath(self, name: str) -> Urpath:
        for u in self.urpaths:
            if u.name == name:
                return u
        raise UnknownElementError(f"Unknown urpath '{name}'")

    def index_of(self, name: str) -> int:
        """1-based urpath index."""
        for i, u in enumerate(self.urpaths, start=1):
            if u.name == name:
                return i
        raise UnknownElementError(f"Unknown urpath '{name}'")

    def endpoints(self, name: str) -> Tuple[str, str]:
        return self.urpath(name).ends

    def has_edge(self, a: str, b: str) -> bool:
        return pair(a, b) in self.edges

    def has_spoke(self, v: str, u: str) -> bool:
        return (v, u) in self.spokes

    def has_rung(self, u: str, w: str) -> bool:
        return pair(u, w) in self.rungs

    def neighbors(self, v: str) -> Set[str]:
        """Vertices joined to v by an edge."""
        out = set()
        for e in self.edges:
            if v in e and len(e) == 2:
                out |= e - {v}
        return out

    def spokes_of(self, u: str) -> Set[str]:
        """Vertices with a spoke to urpath u."""
        return {v for v, w in self.spokes if w == u}

    def spoke_urpaths(self, v: str) -> Set[str]:
        """Urpaths that vertex v has a spoke to."""
        return {u for w, u in self.spokes if w == v}

    def rungs_of(self, u: str) -> Set[str]:
        out = set()
        for r in self.rungs:
            if u in r and len(r) == 2:
                out |= r - {u}
        return out

    def urpaths_at(self, v: str) -> List[str]:
        """Urpaths having v as an endpoint, in index order."""
        return [u.name for u in self.urpaths if v in u.ends]

    def sorted_edges(self) -> List[Tuple[str, str]]:
        order = {v: i for i, v in enumerate(self.vertices)}
        items = [pair_items(e) for e in self.edges]
        items = [tuple(sorted(e, key=lambda x: order.get(x, len(order)))) for e in items]
        return sorted(items, key=lambda e: (order.get(e[0], len(order)), order.get(e[1], len(order)), e))

    def sorted_spokes(self) -> List[Tuple[str, str]]:
        vorder = {v: i for i, v in enumerate(self.vertices)}
        uorder = {u: i for i, u in enumerate(self.urpath_names)}
        return sorted(self.spokes, key=lambda s: (uorder.get(s[1], len(uorder)), vorder.get(s[0], len(vorder)), s))

    def sorted_rungs(self) -> List[Tuple[str, str]]:
        uorder = {u: i for i, u in enumerate(self.urpath_names)}
        items = [tuple(sorted(pair_items(r), key=lambda x: uorder.get(x, len(uorder)))) for r in self.rungs]
        return sorted(items, key=lambda r: (uorder.get(r[0], len(uorder)), uorder.get(r[1], len(uorder)), r))

    # validation

    def validate(self) -> List[str]:
        """Return the list of invariant violations (empty when valid)."""
        return validate(self)

    def ensure_valid(self) -> "Pathograph":
        violations = validate(self)
        if violations:
            raise ValidationError(violations)
        return self

    # derived pathographs

    def subpathograph(self, del_vertices: Iterable[str] = (), del_urpaths: Iterable[str] = ()) -> "Pathograph":
        return subpathograph(self, set(del_vertices), set(del_urpaths))

    def induced(self, keep_vertices: Iterable[str], keep_urpaths: Iterable[str]) -> "Pathograph":
        """The subpathograph keeping exactly the given vertices and urpaths."""
        kv, ku = set(keep_vertices), set(keep_urpaths)
        return subpathograph(
            self,
            {v for v in self.vertices if v not in kv},
            {u for u in self.urpath_names if u not in ku},
        )

    def without_urpaths(self) -> "Pathograph":
        """The graph H formed by deleting all urpaths (and with them spokes and rungs)."""
        return Pathograph(vertices=self.vertices, edges=self.edges)

    def relabel(self, vertex_map: Optional[Dict[str, str]] = None, urpath_map: Optional[Dict[str, str]] = None) -> "Pathograph":
        vm = vertex_map or {}
        um = urpath_map or {}
        fv = lambda v: vm.get(v, v)
        fu = lambda u: um.get(u, u)
        return Pathograph(
            vertices=tuple(fv(v) for v in self.vertices),
            urpaths=tuple(Urpath(fu(u.name), fv(u.left), fv(u.right)) for u in self.urpaths),
            edges=frozenset(frozenset(fv(x) for x in e) for e in self.edges),
            spokes=frozenset((fv(v), fu(u)) for v, u in self.spokes),
            rungs=frozenset(frozenset(fu(x) for x in r) for r in self.rungs),
        )

    def with_elements(
        self,
        vertices: Iterable[str] = (),
        edges: Iterable[Tuple[str, str]] = (),
        urpaths: Iterable[Tuple[str, str, str]] = (),
        spokes: Iterable[Tuple[str, str]] = (),
        rungs: Iterable[Tuple[str, str]] = (),
    ) -> "Pathograph":
        """A copy with extra elements appended (urpaths go to the end of the index order)."""
        return Pathograph(
            vertices=tuple(dict.fromkeys(self.vertices + tuple(vertices))),
            urpaths=self.urpaths + tuple(Urpath(*u) for u in urpaths),
            edges=self.edges | {pair(a, b) for a, b in edges},
            spokes=self.spokes | {(v, u) for v, u in spokes},
            rungs=self.rungs | {pair(a, b) for a, b in rungs},
        )

    def incidence_graph(self) -> nx.Graph:
        """
        Incidence structure as a networkx graph.

        Nodes are ('v', id) with kind 'vertex' and ('u', id) with kind 'urpath';
        edges carry a 'kind' of 'edge', 'spoke', 'rung' or 'end'.
        """
        g = nx.Graph()
        for v in self.vertices:
            g.add_node(("v", v), kind="vertex")
        for u in self.urpaths:
            g.add_node(("u", u.name), kind="urpath")
            g.add_edge(("u", u.name), ("v", u.left), kind="end")
            g.add_edge(("u", u.name), ("v", u.right), kind="end")
        for e in self.edges:
            a, b = pair_items(e)
            g.add_edge(("v", a), ("v", b), kind="edge")
        for v, u in self.spokes:
            g.add_edge(("v", v), ("u", u), kind="spoke")
        for r in self.rungs:
            a, b = pair_items(r)
            g.add_edge(("u", a), ("u", b), kind="rung")
        return g

    def to_networkx(self) -> nx.Graph:
        """The vertex graph (urpaths ignored) as a networkx graph."""
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(pair_items(e) for e in self.edges)
        return g

    def describe(self) -> str:
        return f"N={self.N} K={self.K} |E|={len(self.edges)} |S|={len(self.spokes)} |R|={len(self.rungs)}"


def validate(p: Pathograph) -> List[str]:
    """
    Check every pathograph invariant.

    Args:
        p: The pathograph to check

    Returns:
        List of human-readable violations naming the offending element; empty when valid
    """
    violations: List[str] = []
    vset = set(p.vertices)
    names = [u.name for u in p.urpaths]
    uset = set(names)

    if len(names) != len(uset):
        violations.append("duplicate urpath id")
    clash = vset & uset
    if clash:
        violations.append(f"ids used as both vertex and urpath: {sorted(clash)}")

    for u in p.urpaths:
        for end in u.ends:
            if end not in vset:
                violations.append(f"unknown vertex '{end}' as endpoint of urpath '{u.name}'")
        if u.left == u.right:
            violations.append(f"urpath endpoints equal: '{u.name}' ({u.left}, {u.right})")
        elif pair(u.left, u.right) in p.edges:
            violations.append(f"urpath endpoints adjacent: '{u.name}' ({u.left}, {u.right})")

    for e in p.edges:
        a, b = pair_items(e)
        if a == b:
            violations.append(f"loop edge at '{a}'")
        for x in (a, b):
            if x not in vset:
                violations.append(f"unknown vertex '{x}' in edge {a}-{b}")

    for v, u in sorted(p.spokes):
        if v not in vset:
            violations.append(f"unknown vertex '{v}' in spoke ({v}, {u})")
        if u not in uset:
            violations.append(f"unknown urpath '{u}' in spoke ({v}, {u})")
        elif v in p.urpath(u).ends:
            violations.append(f"endpoint spoke: ({v}, {u})")

    for r in p.rungs:
        a, b = pair_items(r)
        if a == b:
            violations.append(f"self rung on '{a}'")
        for x in (a, b):
            if x not in uset:
                violations.append(f"unknown urpath '{x}' in rung {a}-{b}")

    if violations:
        logger.debug(f"Validation found {len(violations)} violations: {violations}")
    return violations


def subpathograph(p: Pathograph, del_vertices: Set[str], del_urpaths: Set[str]) -> Pathograph:
    """
    Delete vertices and urpaths.

    Deleting a vertex removes its incident edges, spokes and every urpath it is
    an endpoint of; deleting an urpath removes its spokes and rungs but keeps
    its endpoints.

    Raises:
        UnknownElementError: If an id does not exist in p
    """
    unknown_v = set(del_vertices) - set(p.vertices)
    unknown_u = set(del_urpaths) - set(p.urpath_names)
    if unknown_v or unknown_u:
        raise UnknownElementError(f"Unknown ids for deletion: {sorted(unknown_v | unknown_u)}")

    gone_u = set(del_urpaths) | {u.name for u in p.urpaths if set(u.ends) & set(del_vertices)}
    return Pathograph(
        vertices=tuple(v for v in p.vertices if v not in del_vertices),
        urpaths=tuple(u for u in p.urpaths if u.name not in gone_u),
        edges=frozenset(e for e in p.edges if not e & del_vertices),
        spokes=frozenset((v, u) for v, u in p.spokes if v not in del_vertices and u not in gone_u),
        rungs=frozenset(r for r in p.rungs if not r & gone_u),
    )


def is_connected(p: Pathograph) -> bool:
    """True iff p cannot be split into two nonempty parts with nothing across; empty is disconnected."""
    if not p.vertices and not p.urpaths:
        return False
    return nx.is_connected(p.incidence_graph())
