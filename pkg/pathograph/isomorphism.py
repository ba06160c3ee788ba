"""
Pathograph Isomorphism

Isomorphism is decided on the incidence graph (vertices and urpaths as
nodes; edge, spoke, rung and endpoint relations as typed links) with
networkx's GraphMatcher. Canonical keys come from colour refinement with
individualization over the same structure, which is plenty for the
desk-scale sets handled here.
"""

import logging
from functools import lru_cache
from typing import Dict, Hashable, Iterable, List, Tuple

from networkx.algorithms import isomorphism as iso

from pathograph.model import Pathograph

logger = logging.getLogger(__name__)

_REL_CODE = {"edge": 0, "spoke": 1, "rung": 2, "end": 3}
_KIND_CODE = {"vertex": 0, "urpath": 1}

CanonicalKey = Tuple[Tuple[int, ...], Tuple[Tuple[int, int, int], ...]]


def _signature(p: Pathograph) -> Tuple[int, int, int, int, int]:
    return (p.N, p.K, len(p.edges), len(p.spokes), len(p.rungs))


def is_isomorphic(p: Pathograph, q: Pathograph) -> bool:
    """
    True iff p and q are isomorphic.

    Vertices map to vertices and urpaths to urpaths, preserving edges,
    spokes, rungs and endpoint incidence (urpath orientation and index order
    are ignored).
    """
    if _signature(p) != _signature(q):
        return False
    matcher = iso.GraphMatcher(
        p.incidence_graph(),
        q.incidence_graph(),
        node_match=iso.categorical_node_match("kind", None),
        edge_match=iso.categorical_edge_match("kind", None),
    )
    return matcher.is_isomorphic()


def _refine(nodes: List[Hashable], adj: Dict[Hashable, List[Tuple[Hashable, int]]], colors: Dict[Hashable, int]) -> Dict[Hashable, int]:
    """Colour refinement to a stable partition; colours are renumbered by signature order."""
    count = len(set(colors.values()))
    while True:
        signatures = {
            n: (colors[n], tuple(sorted((rel, colors[m]) for m, rel in adj[n]))) for n in nodes
        }
        ranking = {sig: i for i, sig in enumerate(sorted(set(signatures.values())))}
        colors = {n: ranking[signatures[n]] for n in nodes}
        new_count = len(ranking)
        if new_count == count:
            return colors
        count = new_count


@lru_cache(maxsize=65536)
def canonical_key(p: Pathograph) -> CanonicalKey:
    """
    Opaque comparable value, equal for two pathographs iff they are isomorphic.

    Individualization-refinement: refine colours, then branch on every member
    of the first non-singleton cell and keep the smallest resulting code.
    """
    g = p.incidence_graph()
    nodes = list(g.nodes)
    kinds = {n: _KIND_CODE[g.nodes[n]["kind"]] for n in nodes}
    adj = {n: [(m, _REL_CODE[g.edges[n, m]["kind"]]) for m in g.neighbors(n)] for n in nodes}
    best: List[CanonicalKey] = []

    def code(colors: Dict[Hashable, int]) -> CanonicalKey:
        order = sorted(nodes, key=lambda n: colors[n])
        pos = {n: i for i, n in enumerate(order)}
        links = sorted(
            (min(pos[a], pos[b]), max(pos[a], pos[b]), _REL_CODE[d["kind"]]) for a, b, d in g.edges(data=True)
        )
        return (tuple(kinds[n] for n in order), tuple(links))

    def search(colors: Dict[Hashable, int]) -> None:
        colors = _refine(nodes, adj, colors)
        cells: Dict[int, List[Hashable]] = {}
        for n in nodes:
            cells.setdefault(colors[n], []).append(n)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            candidate = code(colors)
            if not best or candidate < best[0]:
                best[:] = [candidate]
            return
        for n in cells[target]:
            search({m: 2 * colors[m] + (0 if m == n else 1) for m in nodes})

    search(dict(kinds))
    return best[0] if best else ((), ())


def dedupe(pathographs: Iterable[Pathograph]) -> List[Pathograph]:
    """Keep the first member of each isomorphism class, sorted by canonical key."""
    seen: Dict[CanonicalKey, Pathograph] = {}
    for p in pathographs:
        seen.setdefault(canonical_key(p), p)
    return [seen[k] for k in sorted(seen)]


def key_set(pathographs: Iterable[Pathograph]) -> frozenset:
    """The set of canonical keys, for comparing families up to isomorphism."""
    return frozenset(canonical_key(p) for p in pathographs)
