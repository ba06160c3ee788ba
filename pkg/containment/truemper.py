"""
Truemper Configurations

The four Truemper configurations (theta, pyramid, prism, wheel) as finite
sets of pathographs, plus detectors that look for each configuration
directly by its classical definition on small graphs.
"""

import itertools
import logging
from typing import Callable, Dict, FrozenSet, List, Literal, Optional, Sequence

import networkx as nx

from pathograph.model import Pathograph

logger = logging.getLogger(__name__)

TruemperKind = Literal["theta", "pyramid", "prism", "wheel"]
TRUEMPER_KINDS = ("theta", "pyramid", "prism", "wheel")

_TRIANGLES = [("v1", "v2"), ("v1", "v3"), ("v2", "v3"), ("v4", "v5"), ("v4", "v6"), ("v5", "v6")]
_PRISM_VERTICES = ["v1", "v2", "v3", "v4", "v5", "v6"]
# rungs of the prism in drawing order: 3-4, 2-5, 1-6
_PRISM_LINKS = [("v3", "v4"), ("v2", "v5"), ("v1", "v6")]


def _prism(urpath_links: int) -> Pathograph:
    """Prism with the last `urpath_links` of the three links replaced by urpaths."""
    edges = list(_TRIANGLES)
    urpaths = []
    for i, (a, b) in enumerate(_PRISM_LINKS):
        # Pr_2 turns 2-5 into an urpath, Pr_3 adds 3-4, Pr_4 adds 1-6
        if (urpath_links >= 1 and i == 1) or (urpath_links >= 2 and i == 0) or (urpath_links >= 3 and i == 2):
            urpaths.append((f"u{len(urpaths) + 1}", a, b))
        else:
            edges.append((a, b))
    return Pathograph.build(_PRISM_VERTICES, edges, urpaths)


def theta_set() -> List[Pathograph]:
    return [Pathograph.build(["v1", "v2"], urpaths=[("u1", "v1", "v2"), ("u2", "v1", "v2"), ("u3", "v1", "v2")])]


def pyramid_set() -> List[Pathograph]:
    triangle = [("v1", "v2"), ("v1", "v3"), ("v2", "v3")]
    vertices = ["v1", "v2", "v3", "v4"]
    py1 = Pathograph.build(vertices, triangle + [("v3", "v4")], [("u1", "v1", "v4"), ("u2", "v2", "v4")])
    py2 = Pathograph.build(vertices, triangle, [("u1", "v1", "v4"), ("u2", "v2", "v4"), ("u3", "v3", "v4")])
    return [py1, py2]


def prism_set() -> List[Pathograph]:
    return [_prism(k) for k in range(4)]


def wheel_set() -> List[Pathograph]:
    vertices = ["v1", "v2", "v3"]
    edges = [("v1", "v2"), ("v2", "v3")]
    urpaths = [("u1", "v1", "v3"), ("u2", "v1", "v3")]
    w1 = Pathograph.build(vertices, edges, urpaths, spokes=[("v2", "u2")])
    w2 = Pathograph.build(vertices, edges, urpaths, spokes=[("v2", "u2"), ("v2", "u1")])
    return [w1, w2]


_SETS: Dict[str, Callable[[], List[Pathograph]]] = {
    "theta": theta_set,
    "pyramid": pyramid_set,
    "prism": prism_set,
    "wheel": wheel_set,
}


def truemper(which: TruemperKind) -> List[Pathograph]:
    """
    The pathograph set encoding one Truemper configuration.

    Args:
        which: theta, pyramid, prism or wheel

    Returns:
        Theta (1 member), pyramid (2), prism (4) or wheel (2)
    """
    if which not in _SETS:
        raise ValueError(f"Unknown Truemper configuration '{which}', expected one of {TRUEMPER_KINDS}")
    return _SETS[which]()


def truemper_union(kinds: Sequence[TruemperKind]) -> List[Pathograph]:
    out: List[Pathograph] = []
    for kind in kinds:
        out.extend(truemper(kind))
    return out


# definition-based detection on plain graphs


def _is_path_forest(g: nx.Graph, ends: Sequence, pairs_needed: int) -> Optional[List[set]]:
    """Components of an acyclic graph whose degree-1 vertices are exactly `ends`, one pair per component."""
    if g.number_of_nodes() == 0 or not nx.is_forest(g):
        return None
    comps = [set(c) for c in nx.connected_components(g)]
    if len(comps) != pairs_needed:
        return None
    for v in g.nodes:
        want = 1 if v in ends else 2
        if g.degree(v) != want:
            return None
    return comps


def _is_theta(g: nx.Graph) -> bool:
    degree3 = [v for v in g.nodes if g.degree(v) == 3]
    if len(degree3) != 2 or any(g.degree(v) != 2 for v in g.nodes if v not in degree3):
        return False
    a, b = degree3
    if g.has_edge(a, b) or not nx.is_connected(g):
        return False
    rest = g.subgraph(set(g.nodes) - {a, b})
    comps = list(nx.connected_components(rest))
    return len(comps) == 3 and all(
        any(g.has_edge(a, x) for x in c) and any(g.has_edge(b, x) for x in c) for c in comps
    )


def _triangles(g: nx.Graph) -> List[FrozenSet]:
    return [frozenset(t) for t in itertools.combinations(sorted(g.nodes, key=str), 3) if all(g.has_edge(x, y) for x, y in itertools.combinations(t, 2))]


def _is_pyramid(g: nx.Graph) -> bool:
    for tri in _triangles(g):
        for apex in g.nodes:
            if apex in tri or g.degree(apex) != 3:
                continue
            spider = g.copy()
            spider.remove_edges_from(itertools.combinations(tri, 2))
            if not nx.is_tree(spider) or spider.degree(apex) != 3:
                continue
            if any(spider.degree(v) != (1 if v in tri else 2) for v in spider.nodes if v != apex):
                continue
            if sum(1 for b in tri if g.has_edge(apex, b)) <= 1:
                return True
    return False


def _is_prism(g: nx.Graph) -> bool:
    tris = _triangles(g)
    for t1, t2 in itertools.combinations(tris, 2):
        if t1 & t2:
            continue
        links = g.copy()
        links.remove_edges_from(itertools.combinations(t1, 2))
        links.remove_edges_from(itertools.combinations(t2, 2))
        comps = _is_path_forest(links, list(t1 | t2), 3)
        if comps is None:
            continue
        if all(len(c & t1) == 1 and len(c & t2) == 1 for c in comps):
            return True
    return False


def _is_wheel(g: nx.Graph) -> bool:
    for hub in g.nodes:
        rim = g.subgraph(set(g.nodes) - {hub})
        if rim.number_of_nodes() < 4 or not nx.is_connected(rim):
            continue
        if any(d != 2 for _, d in rim.degree()):
            continue
        if g.degree(hub) >= 3:
            return True
    return False


_DETECTORS: Dict[str, Callable[[nx.Graph], bool]] = {
    "theta": _is_theta,
    "pyramid": _is_pyramid,
    "prism": _is_prism,
    "wheel": _is_wheel,
}

_MIN_ORDER = {"theta": 5, "pyramid": 5, "prism": 6, "wheel": 5}


def find_configuration(g: Pathograph, which: TruemperKind) -> Optional[FrozenSet[str]]:
    """
    Vertex set of an induced Truemper configuration in graph g, or None.

    Checks every vertex subset against the classical definition, so it is
    meant for small graphs only.
    """
    nxg = g.to_networkx()
    test = _DETECTORS[which]
    nodes = list(g.vertices)
    for size in range(_MIN_ORDER[which], len(nodes) + 1):
        for subset in itertools.combinations(nodes, size):
            if test(nxg.subgraph(subset)):
                return frozenset(subset)
    return None


def find_theta(g: Pathograph) -> Optional[FrozenSet[str]]:
    return find_configuration(g, "theta")


def find_pyramid(g: Pathograph) -> Optional[FrozenSet[str]]:
    return find_configuration(g, "pyramid")


def find_prism(g: Pathograph) -> Optional[FrozenSet[str]]:
    return find_configuration(g, "prism")


def find_wheel(g: Pathograph) -> Optional[FrozenSet[str]]:
    return find_configuration(g, "wheel")
