"""
Containment Relation Encodings

Each of the six classical containment relations (subgraph, induced subgraph,
minor, induced minor, topological minor, induced topological minor) of a
graph H is expressed as a finite set of pathographs: a graph G contains H in
that relation iff G contains some member of the set.

`max_order` trims a family to the members whose smallest realization has at
most that many vertices (vertices plus urpaths); the trimmed family is exact
for host graphs of that order.
"""

import itertools
import logging
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Literal, Optional, Sequence, Tuple

from core.limits_loader import get_limit
from core.utils import LimitExceededError
from pathograph.isomorphism import canonical_key, dedupe
from pathograph.model import Pathograph, Urpath, is_connected, pair

logger = logging.getLogger(__name__)

Relation = Literal[
    "subgraph",
    "induced_subgraph",
    "minor",
    "induced_minor",
    "topological_minor",
    "induced_topological_minor",
]
RELATIONS: Tuple[str, ...] = (
    "subgraph",
    "induced_subgraph",
    "minor",
    "induced_minor",
    "topological_minor",
    "induced_topological_minor",
)


def realization_order(p: Pathograph) -> int:
    """Vertex count of the smallest realization."""
    return p.N + p.K


def _within(p: Pathograph, max_order: Optional[int]) -> bool:
    return max_order is None or realization_order(p) <= max_order


def addable_elements(p: Pathograph) -> List[Tuple[str, Tuple[str, str]]]:
    """Missing edges, spokes and rungs that may be added while keeping p valid."""
    out: List[Tuple[str, Tuple[str, str]]] = []
    ends = {pair(u.left, u.right) for u in p.urpaths}
    for a, b in itertools.combinations(p.vertices, 2):
        if not p.has_edge(a, b) and pair(a, b) not in ends:
            out.append(("edge", (a, b)))
    for u in p.urpaths:
        for v in p.vertices:
            if v not in u.ends and not p.has_spoke(v, u.name):
                out.append(("spoke", (v, u.name)))
    for a, b in itertools.combinations(p.urpath_names, 2):
        if not p.has_rung(a, b):
            out.append(("rung", (a, b)))
    return out


def add_elements(p: Pathograph, elements: Iterable[Tuple[str, Tuple[str, str]]]) -> Pathograph:
    edges, spokes, rungs = [], [], []
    for kind, item in elements:
        {"edge": edges, "spoke": spokes, "rung": rungs}[kind].append(item)
    return p.with_elements(edges=edges, spokes=spokes, rungs=rungs)


def cl_sim(family: Iterable[Pathograph]) -> List[Pathograph]:
    """
    Close a family under adding edges, spokes and rungs (including adding nothing).

    Spokes from an urpath's own endpoints are never added.
    """
    out: Dict = {}
    for p in family:
        options = addable_elements(p)
        for r in range(len(options) + 1):
            for chosen in itertools.combinations(options, r):
                q = add_elements(p, chosen)
                out.setdefault(canonical_key(q), q)
    logger.debug(f"cl_sim produced {len(out)} members")
    return [out[k] for k in sorted(out)]


def _fresh_names(p: Pathograph, count: int) -> List[str]:
    """`count` urpath ids e1, e2, ... skipping any id already used in p."""
    taken = set(p.vertices) | set(p.urpath_names)
    out: List[str] = []
    i = 0
    while len(out) < count:
        i += 1
        if f"e{i}" not in taken:
            out.append(f"e{i}")
    return out


def cl_u(family: Iterable[Pathograph]) -> List[Pathograph]:
    """Replace any subset of edges by urpaths on the same endpoints."""
    out: List[Pathograph] = []
    for p in family:
        edges = p.sorted_edges()
        for r in range(len(edges) + 1):
            for chosen in itertools.combinations(edges, r):
                names = _fresh_names(p, len(chosen))
                urpaths = [Urpath(name, a, b) for name, (a, b) in zip(names, chosen)]
                out.append(
                    Pathograph(
                        vertices=p.vertices,
                        urpaths=p.urpaths + tuple(urpaths),
                        edges=p.edges - {pair(a, b) for a, b in chosen},
                        spokes=p.spokes,
                        rungs=p.rungs,
                    )
                )
    result = dedupe(out)
    logger.debug(f"cl_u produced {len(result)} members")
    return result


def _every_urpath_is_a_cut(p: Pathograph) -> bool:
    return all(not is_connected(p.subpathograph(del_urpaths=[u])) for u in p.urpath_names)


def conn(k: int, plain: bool = False) -> List[Pathograph]:
    """
    Connected pathographs on 1..k vertices where removing any urpath disconnects.

    Args:
        k: Vertex bound (>= 1)
        plain: Restrict to members without spokes or rungs (an under-approximation)

    Raises:
        LimitExceededError: If k exceeds conn.max_vertices or the candidate guard trips
    """
    if k < 1:
        raise ValueError("conn(k) needs k >= 1")
    if k > get_limit("conn.max_vertices"):
        raise LimitExceededError(f"conn({k}) exceeds conn.max_vertices")
    if plain:
        logger.warning("conn(plain=True) omits members with spokes or rungs")

    guard = get_limit("conn.max_candidates")
    examined = 0
    found: Dict = {}
    for n in range(1, k + 1):
        vertices = [f"c{i}" for i in range(1, n + 1)]
        pairs = list(itertools.combinations(vertices, 2))
        # each pair: absent, edge or urpath; parallel urpaths can never all be cuts
        for kinds in itertools.product((0, 1, 2), repeat=len(pairs)):
            edges = [pr for pr, t in zip(pairs, kinds) if t == 1]
            urpaths = [(f"w{i + 1}", a, b) for i, (a, b) in enumerate(pr for pr, t in zip(pairs, kinds) if t == 2)]
            base = Pathograph.build(vertices, edges, urpaths)
            # spokes and rungs may still connect the base, but never turn a non-cut urpath into a cut
            if not _every_urpath_is_a_cut(base):
                continue
            extras = [] if plain else [x for x in addable_elements(base) if x[0] != "edge"]
            for r in range(len(extras) + 1):
                for chosen in itertools.combinations(extras, r):
                    examined += 1
                    if examined > guard:
                        raise LimitExceededError(f"conn({k}) exceeded {guard} candidates")
                    p = add_elements(base, chosen)
                    if is_connected(p) and _every_urpath_is_a_cut(p):
                        found.setdefault(canonical_key(p), p)
    logger.debug(f"conn({k}) has {len(found)} members after {examined} candidates")
    return [found[key] for key in sorted(found)]


def _prefixed(p: Pathograph, prefix: str) -> Pathograph:
    return p.relabel({v: f"{prefix}{v}" for v in p.vertices}, {u: f"{prefix}{u}" for u in p.urpath_names})


def _cross_elements(a: Pathograph, b: Pathograph) -> List[Tuple[str, Tuple[str, str]]]:
    out: List[Tuple[str, Tuple[str, str]]] = []
    out.extend(("edge", (x, y)) for x in a.vertices for y in b.vertices)
    out.extend(("spoke", (x, u)) for x in a.vertices for u in b.urpath_names)
    out.extend(("spoke", (y, u)) for y in b.vertices for u in a.urpath_names)
    out.extend(("rung", (u, w)) for u in a.urpath_names for w in b.urpath_names)
    return out


def _nonempty_subsets(items: Sequence) -> Iterator[Tuple]:
    for r in range(1, len(items) + 1):
        yield from itertools.combinations(items, r)


def _bounded_product(pools: Sequence[Sequence[Pathograph]], max_order: Optional[int]) -> Iterator[Tuple[Pathograph, ...]]:
    """itertools.product over the pools, skipping prefixes whose realization order exceeds the cap."""
    if max_order is None:
        yield from itertools.product(*pools)
        return

    def extend(i: int, prefix: Tuple[Pathograph, ...], order: int) -> Iterator[Tuple[Pathograph, ...]]:
        if i == len(pools):
            yield prefix
            return
        for m in pools[i]:
            size = order + realization_order(m)
            if size <= max_order:
                yield from extend(i + 1, prefix + (m,), size)

    yield from extend(0, (), 0)


@lru_cache(maxsize=16)
def _conn_members(k: int) -> Tuple[Pathograph, ...]:
    return tuple(conn(k))


def cl_m(h: Pathograph, max_order: Optional[int] = None) -> List[Pathograph]:
    """
    Pathographs partitioned into one conn(max(1, deg v)) component per vertex v of H,
    with at least one cross edge, spoke or rung exactly between components of
    adjacent vertices.

    Args:
        h: A graph
        max_order: Optional realization-order cap on members

    Raises:
        LimitExceededError: If more than cl_m.max_members members would be built
    """
    guard = get_limit("cl_m.max_members")
    hv = list(h.vertices)
    pools = []
    for v in hv:
        members = _conn_members(max(1, len(h.neighbors(v))))
        pools.append([_prefixed(m, f"{v}.") for m in members])

    found: Dict = {}
    built = 0
    for combo in _bounded_product(pools, max_order):
        base = combo[0]
        for part in combo[1:]:
            base = base.with_elements(
                vertices=part.vertices,
                edges=[tuple(sorted(e)) for e in part.edges],
                urpaths=part.urpaths,
                spokes=part.spokes,
                rungs=[tuple(sorted(r)) for r in part.rungs],
            )
        choice_lists = []
        for i, j in itertools.combinations(range(len(hv)), 2):
            if h.has_edge(hv[i], hv[j]):
                choice_lists.append(list(_nonempty_subsets(_cross_elements(combo[i], combo[j]))))
        for chosen in itertools.product(*choice_lists):
            built += 1
            if built > guard:
                raise LimitExceededError(f"cl_m exceeded {guard} members (cl_m.max_members)")
            p = add_elements(base, [x for group in chosen for x in group])
            found.setdefault(canonical_key(p), p)
    logger.debug(f"cl_m built {built} candidates, {len(found)} up to isomorphism")
    return [found[k] for k in sorted(found)]


def encode(h: Pathograph, rel: Relation, max_order: Optional[int] = None) -> List[Pathograph]:
    """
    Pathograph family expressing containment of the graph H in the given relation.

    Args:
        h: A graph
        rel: One of RELATIONS
        max_order: Optional realization-order cap on members

    Returns:
        Sorted, deduplicated family
    """
    if rel == "subgraph":
        family = cl_sim([h])
    elif rel == "induced_subgraph":
        family = [h]
    elif rel == "minor":
        family = cl_sim(cl_m(h, max_order))
    elif rel == "induced_minor":
        family = cl_m(h, max_order)
    elif rel == "topological_minor":
        family = cl_sim([p for p in cl_u([h]) if _within(p, max_order)])
    elif rel == "induced_topological_minor":
        family = cl_u([h])
    else:
        raise ValueError(f"Unknown relation '{rel}', expected one of {RELATIONS}")
    result = [p for p in dedupe(family) if _within(p, max_order)]
    logger.info(f"Encoded {rel} of a {h.N}-vertex graph as {len(result)} pathographs")
    return result


def encode_all(h: Pathograph, max_order: Optional[int] = None) -> Dict[str, List[Pathograph]]:
    return {rel: encode(h, rel, max_order) for rel in RELATIONS}
