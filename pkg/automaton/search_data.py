"""
Search Data

Given a partial inclusion phi of F into H, the rest of an inclusion into a
realization G must live on the internal paths of G. Search data describes
one "essentially different" way that rest can look:

- a sought vertex x for every vertex of F without an image in H;
- a connector p for every gap of a non-completed urpath image, a subpath of
  G - H joining two consecutive blocks (fragment ends or sought vertices);
- for each of these objects, the H vertices it must see and must not see;
- the urpath index each object lies on, the order along that index, and for
  consecutive objects whether they touch, are separated, or either.

Anchors of a connector are ('h', vertex) when its end sees that H vertex and
('x', name) when its end is next to the named sought vertex.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Literal, NamedTuple, Optional, Set, Tuple, Union

from automaton.partial import PartialInclusion
from pathograph.model import Pathograph
from pathograph.paths import PathSub

logger = logging.getLogger(__name__)

Anchor = Tuple[str, str]
GapKind = Literal["touch", "gap", "free"]
ObjectType = Literal["0", "1a", "1b", "2"]

# relation values: "req", "forb", "anchor", "free" towards H; "adj", "non", "free" between objects;
# ("obl", key) while an at-least-one obligation is still open
Relation = Union[str, Tuple[str, Tuple]]


class SoughtObject(NamedTuple):
    kind: Literal["vertex", "connector"]
    name: str
    owner: str
    anchors: Tuple[Optional[Anchor], Optional[Anchor]] = (None, None)
    required: FrozenSet[str] = frozenset()
    forbidden: FrozenSet[str] = frozenset()

    @property
    def is_connector(self) -> bool:
        return self.kind == "connector"

    def h_anchors(self) -> Tuple[FrozenSet[str], FrozenSet[str]]:
        """H vertices seen by the first and by the last vertex of a connector."""
        first, second = self.anchors
        a = frozenset({first[1]}) if first and first[0] == "h" else frozenset()
        b = frozenset({second[1]}) if second and second[0] == "h" else frozenset()
        return a, b


@dataclass(frozen=True)
class SearchData:
    objects: Tuple[SoughtObject, ...]
    orders: Tuple[Tuple[str, ...], ...]
    gaps: Tuple[Tuple[str, str, GapKind], ...]
    inclusion: Optional[PartialInclusion] = field(default=None, compare=False, hash=False, repr=False)

    @property
    def K(self) -> int:
        return len(self.orders)

    def object(self, name: str) -> SoughtObject:
        for y in self.objects:
            if y.name == name:
                return y
        raise KeyError(name)

    @property
    def connectors(self) -> List[SoughtObject]:
        return [y for y in self.objects if y.is_connector]

    @property
    def sought_vertices(self) -> List[SoughtObject]:
        return [y for y in self.objects if not y.is_connector]

    @property
    def placement(self) -> Dict[str, int]:
        return {name: k for k, order in enumerate(self.orders, start=1) for name in order}

    def gap_between(self, before: str, after: str) -> GapKind:
        for x, y, kind in self.gaps:
            if (x, y) == (before, after):
                return kind
        raise KeyError((before, after))

    def object_type(self, name: str) -> ObjectType:
        """'0' touches no sought neighbour, '1a' only the previous, '1b' only the next, '2' both."""
        before = any(y == name and kind == "touch" for _, y, kind in self.gaps)
        after = any(x == name and kind == "touch" for x, _, kind in self.gaps)
        if before and after:
            return "2"
        if before:
            return "1a"
        if after:
            return "1b"
        return "0"

    @property
    def adjacency(self) -> FrozenSet[FrozenSet[str]]:
        """Known adjacencies over V(H) and the sought objects."""
        pairs: Set[FrozenSet[str]] = set()
        if self.inclusion is not None:
            pairs |= set(self.inclusion.target.edges)
        for y in self.objects:
            pairs |= {frozenset((y.name, h)) for h in y.required}
            for anchor in y.anchors:
                if anchor is not None:
                    pairs.add(frozenset((y.name, anchor[1])))
        pairs |= {frozenset((x, y)) for x, y, kind in self.gaps if kind == "touch"}
        return frozenset(pairs)

    def signature(self) -> Tuple:
        return (tuple(sorted(self.objects)), self.orders, self.gaps)

    def describe(self) -> str:
        parts = []
        for k, order in enumerate(self.orders, start=1):
            parts.append(f"{k}:[{' '.join(order)}]")
        return " ".join(parts)


Block = Tuple[str, Union[str, PathSub]]
Gap = Tuple[str, Tuple]


def _gap_options(left: Block, right: Block) -> List[Gap]:
    if left[0] == "frag" and right[0] == "frag":
        return [("conn", (("h", left[1].last), ("h", right[1].first)))]
    if left[0] == "x" and right[0] == "frag":
        return [("conn", (("x", left[1]), ("h", right[1].first))), ("attach", (left[1], right[1].first))]
    if left[0] == "frag" and right[0] == "x":
        return [("conn", (("h", left[1].last), ("x", right[1]))), ("attach", (right[1], left[1].last))]
    return [("conn", (("x", left[1]), ("x", right[1])))]


def _urpath_arrangements(phi: PartialInclusion, u: str, xname: Dict[str, str]) -> List[Tuple[List[Tuple[Anchor, Anchor]], List[Tuple[str, str]]]]:
    """
    (connectors, direct attachments) for every way to order and orient the
    fragments of a non-completed urpath between its two end blocks.
    """
    a, b = phi.source.endpoints(u)
    ia, ib = phi.endpoint_images(u)
    frags = phi.fragment_map[u]
    layouts: List[List[Block]] = []
    if frags is None:
        layouts.append([("x", xname[a]), ("x", xname[b])])
    else:
        first_frag = phi.fragment_at(u, ia) if ia is not None else None
        last_frag = phi.fragment_at(u, ib).reversed() if ib is not None else None
        first: Block = ("frag", first_frag) if first_frag is not None else ("x", xname[a])
        last: Block = ("frag", last_frag) if last_frag is not None else ("x", xname[b])
        rest = sorted(
            (p for p in frags if p != first_frag and p != last_frag),
            key=lambda p: sorted(p.vertices),
        )
        for perm in itertools.permutations(rest):
            choices = [(p,) if len(p.vertices) == 1 else (p, p.reversed()) for p in perm]
            for oriented in itertools.product(*choices):
                layouts.append([first, *(("frag", p) for p in oriented), last])

    out = []
    for blocks in layouts:
        size = sum(len(blk[1].vertices) if blk[0] == "frag" else 1 for blk in blocks)
        options = [_gap_options(x, y) for x, y in zip(blocks, blocks[1:])]
        for gaps in itertools.product(*options):
            connectors = [g[1] for g in gaps if g[0] == "conn"]
            attachments = [g[1] for g in gaps if g[0] == "attach"]
            if size + len(connectors) < 3:
                continue
            out.append((connectors, attachments))
    return out


def _rung_key(u: str, w: str) -> Tuple[str, str, str]:
    x, y = sorted((u, w))
    return ("rung", x, y)


class _Relations:
    """Relations of every sought object to image vertices and to other objects for one arrangement."""

    def __init__(self, phi: PartialInclusion, xname: Dict[str, str], conns: Dict[str, Tuple[str, Tuple[Anchor, Anchor]]], attachments: Set[Tuple[str, str]]):
        f = phi.source
        self.phi = phi
        self.owners = phi.owners()
        self.h_rel: Dict[Tuple[str, str], Relation] = {}
        self.s_rel: Dict[FrozenSet[str], Relation] = {}
        self.kind: Dict[str, str] = {}
        self.owner_of: Dict[str, str] = {}
        self.anchors = {c: ends for c, (_, ends) in conns.items()}

        for v, y in xname.items():
            self.kind[y] = "vertex"
            self.owner_of[y] = v
            for h, (kind, who) in self.owners.items():
                if kind == "v":
                    rel: Relation = "req" if f.has_edge(v, who) else "forb"
                elif v in f.endpoints(who):
                    rel = "req" if (y, h) in attachments else "forb"
                elif f.has_spoke(v, who):
                    rel = ("obl", ("spoke", v, who))
                else:
                    rel = "forb"
                self.h_rel[(y, h)] = rel

        for c, (u, ends) in conns.items():
            self.kind[c] = "connector"
            self.owner_of[c] = u
            for h, (kind, who) in self.owners.items():
                if kind == "v":
                    if who in f.endpoints(u):
                        rel = "anchor" if ("h", h) in ends else "forb"
                    elif f.has_spoke(who, u):
                        rel = ("obl", ("spoke", who, u))
                    else:
                        rel = "forb"
                elif who == u:
                    rel = "anchor" if ("h", h) in ends else "forb"
                elif f.has_rung(u, who):
                    rel = ("obl", _rung_key(u, who))
                else:
                    rel = "forb"
                self.h_rel[(c, h)] = rel

        names = list(self.kind)
        for y, z in itertools.combinations(names, 2):
            self.s_rel[frozenset((y, z))] = self._object_relation(y, z)

    def _object_relation(self, y: str, z: str) -> Relation:
        f = self.phi.source
        ky, kz = self.kind[y], self.kind[z]
        if ky == "vertex" and kz == "vertex":
            return "adj" if f.has_edge(self.owner_of[y], self.owner_of[z]) else "non"
        if ky == "connector" and kz == "connector":
            uy, uz = self.owner_of[y], self.owner_of[z]
            if uy != uz and f.has_rung(uy, uz):
                return ("obl", _rung_key(uy, uz))
            return "non"
        x, c = (y, z) if ky == "vertex" else (z, y)
        v, u = self.owner_of[x], self.owner_of[c]
        if v in f.endpoints(u):
            return "adj" if ("x", x) in self.anchors[c] else "non"
        if f.has_spoke(v, u):
            return ("obl", ("spoke", v, u))
        return "non"

    def open_obligations(self) -> Optional[List[List[Tuple[str, Tuple]]]]:
        """
        Candidate lists of the obligations not met inside H; obligations met
        inside H free their candidates. None if some obligation has no candidate.
        """
        phi, f = self.phi, self.phi.source
        H = phi.target
        candidates: Dict[Tuple, List[Tuple[str, Tuple]]] = {}
        for key, rel in self.h_rel.items():
            if isinstance(rel, tuple):
                candidates.setdefault(rel[1], []).append(("h", key))
        for key, rel in self.s_rel.items():
            if isinstance(rel, tuple):
                candidates.setdefault(rel[1], []).append(("s", key))

        out: List[List[Tuple[str, Tuple]]] = []
        for v, u in sorted(f.spokes):
            x = phi.vertex_map[v]
            met = x is not None and any(H.has_edge(x, y) for y in phi.h_interior(u))
            cands = candidates.get(("spoke", v, u), [])
            if met:
                self._free(cands)
            elif not cands:
                return None
            else:
                out.append(cands)
        for r in f.sorted_rungs():
            u, w = r
            met = any(H.has_edge(x, y) for x in phi.h_interior(u) for y in phi.h_interior(w))
            cands = candidates.get(_rung_key(u, w), [])
            if met:
                self._free(cands)
            elif not cands:
                return None
            else:
                out.append(cands)
        return out

    def _free(self, cands: List[Tuple[str, Tuple]]) -> None:
        for where, key in cands:
            if where == "h":
                self.h_rel[key] = "free"
            else:
                self.s_rel[key] = "free"

    def resolved(self, witnesses: Tuple[Tuple[str, Tuple], ...], obligations: List[List[Tuple[str, Tuple]]]) -> Tuple[Dict, Dict]:
        h_rel = dict(self.h_rel)
        s_rel = dict(self.s_rel)
        for cands, chosen in zip(obligations, witnesses):
            for where, key in cands:
                table = h_rel if where == "h" else s_rel
                if (where, key) == chosen:
                    table[key] = "req" if where == "h" else "adj"
                else:
                    table[key] = "free"
        return h_rel, s_rel


def _negative_constraints_hold(phi: PartialInclusion) -> bool:
    """Non-spokes and non-rungs of F must not be realized inside H already."""
    f, H = phi.source, phi.target
    for u in f.urpaths:
        interior = phi.h_interior(u.name)
        if not interior:
            continue
        for v in f.vertices:
            x = phi.vertex_map[v]
            if x is None or v in u.ends or f.has_spoke(v, u.name):
                continue
            if any(H.has_edge(x, y) for y in interior):
                return False
    for u, w in itertools.combinations(f.urpath_names, 2):
        if f.has_rung(u, w):
            continue
        if any(H.has_edge(x, y) for x in phi.h_interior(u) for y in phi.h_interior(w)):
            return False
    return True


def _chains(names: List[str], s_rel: Dict[FrozenSet[str], Relation]) -> Optional[List[List[str]]]:
    """Components of the adjacency graph between objects as paths, or None if one is not a path."""
    adj: Dict[str, List[str]] = {n: [] for n in names}
    for key, rel in s_rel.items():
        if rel == "adj":
            y, z = sorted(key)
            adj[y].append(z)
            adj[z].append(y)
    if any(len(v) > 2 for v in adj.values()):
        return None
    seen: Set[str] = set()
    chains = []
    for n in names:
        if n in seen or len(adj[n]) == 2:
            continue
        chain = [n]
        seen.add(n)
        while True:
            nxt = [z for z in adj[chain[-1]] if z not in seen]
            if not nxt:
                break
            chain.append(nxt[0])
            seen.add(nxt[0])
        chains.append(chain)
    if len(seen) != len(names):
        # leftover vertices all have degree 2: a cycle
        return None
    return chains


def _orientations(order: Tuple[str, ...], anchors: Dict[str, Tuple[Anchor, Anchor]]) -> List[Dict[str, Tuple[Anchor, Anchor]]]:
    """Oriented anchors of the connectors of one index order."""
    position = {n: i for i, n in enumerate(order)}
    options: List[List[Tuple[str, Tuple[Anchor, Anchor]]]] = []
    for c in order:
        if c not in anchors:
            continue
        alpha, beta = anchors[c]
        sought = [(end, a) for end, a in enumerate((alpha, beta)) if a[0] == "x"]
        if not sought:
            options.append([(c, (alpha, beta)), (c, (beta, alpha))])
            continue
        end, anchor = sought[0]
        before = position[anchor[1]] < position[c]
        if (end == 0) == before:
            options.append([(c, (alpha, beta))])
        else:
            options.append([(c, (beta, alpha))])
    return [dict(choice) for choice in itertools.product(*options)]


def _placements(chains: List[List[str]], K: int) -> Iterator[Tuple[Tuple[str, ...], ...]]:
    if not chains:
        yield tuple(() for _ in range(K))
        return
    if K == 0:
        return
    for perm in itertools.permutations(chains):
        for idxs in itertools.combinations_with_replacement(range(1, K + 1), len(perm)):
            flips = [(False,) if len(chain) == 1 else (False, True) for chain in perm]
            for flip in itertools.product(*flips):
                orders: List[List[str]] = [[] for _ in range(K)]
                for chain, k, rev in zip(perm, idxs, flip):
                    orders[k - 1].extend(reversed(chain) if rev else chain)
                yield tuple(tuple(o) for o in orders)


def enumerate_search_data(phi: PartialInclusion, f: Pathograph, h: Pathograph) -> List[SearchData]:
    """
    Every valid search data for phi, deduplicated.

    Data are dropped when a non-spoke or non-rung of f is already realized
    inside H, when an obligation has no candidate, when a sought object has
    more than two sought neighbours or they close a cycle, and when objects
    exist but h has no urpath to hold them.
    """
    K = h.K
    if not _negative_constraints_hold(phi):
        return []
    xname = {v: f"x{i}" for i, v in enumerate(phi.undefined_vertices, start=1)}
    open_urpaths = [u for u in f.urpath_names if not phi.is_completed(u)]
    per_urpath = [_urpath_arrangements(phi, u, xname) for u in open_urpaths]

    found: Dict[Tuple, SearchData] = {}
    for combo in itertools.product(*per_urpath):
        conns: Dict[str, Tuple[str, Tuple[Anchor, Anchor]]] = {}
        attachments: Set[Tuple[str, str]] = set()
        for u, (connectors, attached) in zip(open_urpaths, combo):
            for ends in connectors:
                conns[f"p{len(conns) + 1}"] = (u, ends)
            attachments.update(attached)
        relations = _Relations(phi, xname, conns, attachments)
        obligations = relations.open_obligations()
        if obligations is None:
            continue
        names = list(xname.values()) + list(conns)
        for witnesses in itertools.product(*obligations):
            h_rel, s_rel = relations.resolved(witnesses, obligations)
            chains = _chains(names, s_rel)
            if chains is None:
                continue
            for data in _assemble(phi, h_rel, s_rel, chains, relations, K):
                found.setdefault(data.signature(), data)
    result = list(found.values())
    logger.debug(f"{len(result)} search data for {phi.describe()}")
    return result


def _assemble(phi: PartialInclusion, h_rel: Dict, s_rel: Dict, chains: List[List[str]], relations: _Relations, K: int) -> Iterator[SearchData]:
    def touching(y: str, z: str) -> GapKind:
        rel = s_rel[frozenset((y, z))]
        return {"adj": "touch", "non": "gap"}.get(rel, "free")

    required = {y: frozenset(h for (z, h), r in h_rel.items() if z == y and r == "req") for y in relations.kind}
    forbidden = {y: frozenset(h for (z, h), r in h_rel.items() if z == y and r == "forb") for y in relations.kind}

    for orders in _placements(chains, K):
        gaps = tuple(
            (order[i], order[i + 1], touching(order[i], order[i + 1]))
            for order in orders
            for i in range(len(order) - 1)
        )
        per_index = [_orientations(order, relations.anchors) for order in orders]
        for choice in itertools.product(*per_index):
            oriented: Dict[str, Tuple[Anchor, Anchor]] = {}
            for part in choice:
                oriented.update(part)
            objects = []
            for order in orders:
                for name in order:
                    kind = relations.kind[name]
                    objects.append(
                        SoughtObject(
                            kind=kind,
                            name=name,
                            owner=relations.owner_of[name],
                            anchors=oriented.get(name, (None, None)),
                            required=required[name],
                            forbidden=forbidden[name],
                        )
                    )
            yield SearchData(tuple(objects), orders, gaps, inclusion=phi)
