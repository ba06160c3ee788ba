"""
Staged Reduction from Periodic Tiling

Stage 1 turns a tile set S and a 3x3 patch into a directed multicoloured
pathograph: a red and a blue directed cycle, each closed by one urpath, with
every edge, spoke and rung running from the red side to the blue side. The
forbidden family makes the cross edges of any F-free realization spell out a
periodic tiling extending the patch.

Stage 2 drops edge colours and directions: each original vertex becomes a
path of K = |S| vertices coloured 1..K (red) or -1..-K (blue), and an edge
coloured with the k-th tile becomes a complete bipartite graph between two
such paths minus the edge between their k-th vertices.

Stage 3 drops vertex colours: a clique of size 3K and 2K selector vertices
z_1..z_2K with nested neighbourhoods in the clique recover colour i as
adjacency to z_i (z_{K+i} for -i).
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx

from core.utils import TilingError
from pathograph.formats import BLOCK_SEPARATOR, format_pgf
from pathograph.model import Pathograph
from reductions.tiles import PATCH_SIZE, Patch, WangTileSet, pad_tiles

logger = logging.getLogger(__name__)

RED = "red"
BLUE = "blue"

STAGE2_MIN_TILES = 3
STAGE3_MIN_TILES = 9


# directed multicoloured pathographs


class Arc(NamedTuple):
    tail: str
    head: str
    color: str


class DirectedUrpath(NamedTuple):
    name: str
    tail: str
    head: str
    color: str


class DirectedSpoke(NamedTuple):
    """outward: realizing edges run from the vertex into the path, otherwise from the path to the vertex."""

    vertex: str
    urpath: str
    outward: bool


class DirectedRung(NamedTuple):
    tail: str
    head: str


@dataclass(frozen=True)
class DirectedMulticoloredPathograph:
    vertices: Tuple[Tuple[str, str], ...]
    arcs: Tuple[Arc, ...] = ()
    urpaths: Tuple[DirectedUrpath, ...] = ()
    spokes: Tuple[DirectedSpoke, ...] = ()
    rungs: Tuple[DirectedRung, ...] = ()

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.vertices)

    def color_of(self, v: str) -> str:
        return dict(self.vertices)[v]

    def urpath(self, name: str) -> DirectedUrpath:
        for u in self.urpaths:
            if u.name == name:
                return u
        raise KeyError(name)

    def arc(self, tail: str, head: str) -> Optional[Arc]:
        for a in self.arcs:
            if (a.tail, a.head) == (tail, head):
                return a
        return None

    def counts(self) -> Tuple[int, int, int, int, int]:
        """(vertices, urpaths, edges, spokes, rungs)."""
        return (len(self.vertices), len(self.urpaths), len(self.arcs), len(self.spokes), len(self.rungs))

    def validate(self) -> List[str]:
        out = []
        names = set(self.names)
        if len(names) != len(self.vertices):
            out.append("vertex ids are not distinct")
        seen = set()
        for a in self.arcs:
            if a.tail not in names or a.head not in names:
                out.append(f"arc {a.tail}->{a.head} names an unknown vertex")
            if (a.tail, a.head) in seen:
                out.append(f"arc {a.tail}->{a.head} listed twice")
            if (a.head, a.tail) in seen:
                out.append(f"directed 2-cycle between {a.tail} and {a.head}")
            seen.add((a.tail, a.head))
        urpath_names = {u.name for u in self.urpaths}
        for u in self.urpaths:
            if (u.tail, u.head) in seen or (u.head, u.tail) in seen:
                out.append(f"urpath {u.name} joins adjacent vertices")
        for s in self.spokes:
            if s.vertex not in names or s.urpath not in urpath_names:
                out.append(f"spoke ({s.vertex}, {s.urpath}) names an unknown element")
        for r in self.rungs:
            if r.tail not in urpath_names or r.head not in urpath_names:
                out.append(f"rung {r.tail}->{r.head} names an unknown urpath")
        return out

    def underlying(self) -> Pathograph:
        """The pathograph left after forgetting colours and directions."""
        return Pathograph.build(
            self.names,
            [(a.tail, a.head) for a in self.arcs],
            [(u.name, u.tail, u.head) for u in self.urpaths],
            [(s.vertex, s.urpath) for s in self.spokes],
            [(r.tail, r.head) for r in self.rungs],
        )

    def annotations(self) -> List[str]:
        out = [f"color: {v} {c}" for v, c in self.vertices]
        for a in self.arcs:
            out.append(f"color: {a.tail} {a.head} {a.color}")
            out.append(f"dir: {a.tail} {a.head}")
        for u in self.urpaths:
            out.append(f"color: {u.name} {u.color}")
            out.append(f"dir: {u.name} {u.tail} {u.head}")
        for s in self.spokes:
            out.append(f"dir: {s.vertex} {s.urpath}" if s.outward else f"dir: {s.urpath} {s.vertex}")
        for r in self.rungs:
            out.append(f"dir: {r.tail} {r.head}")
        return out

    def to_networkx(self) -> nx.DiGraph:
        """Vertices and arcs with their 'color' attributes; urpaths are ignored."""
        g = nx.DiGraph()
        for v, c in self.vertices:
            g.add_node(v, color=c)
        for a in self.arcs:
            g.add_edge(a.tail, a.head, color=a.color)
        return g

    def describe(self) -> str:
        n, k, e, s, r = self.counts()
        return f"N={n} K={k} |E|={e} |S|={s} |R|={r}"


# vertex-coloured pathographs


@dataclass(frozen=True)
class VertexColoredPathograph:
    base: Pathograph
    colors: Dict[str, int] = field(hash=False)

    def validate(self, K: int) -> List[str]:
        out = list(self.base.validate())
        for v in self.base.vertices:
            c = self.colors.get(v)
            if c is None:
                out.append(f"vertex {v} has no colour")
            elif c == 0 or abs(c) > K:
                out.append(f"vertex {v} has colour {c} outside +-1..{K}")
        return out

    def annotations(self) -> List[str]:
        return [f"color: {v} {self.colors[v]}" for v in self.base.vertices]

    def to_networkx(self) -> nx.Graph:
        g = self.base.to_networkx()
        nx.set_node_attributes(g, {v: self.colors[v] for v in self.base.vertices}, "color")
        return g

    def describe(self) -> str:
        return self.base.describe()


class ForbiddenMember(NamedTuple):
    """One member of a forbidden family with its type ('1a', '2', ...) and what it is indexed by."""

    kind: str
    index: Tuple
    graph: Union[DirectedMulticoloredPathograph, VertexColoredPathograph, Pathograph]

    @property
    def label(self) -> str:
        return f"type {self.kind}" + (f" {self.index}" if self.index else "")


class LazyFamily:
    """A forbidden family counted and generated on demand instead of listed."""

    def __init__(self, kind: str, count: int, generate: Callable[[], Iterator[ForbiddenMember]]):
        self.kind = kind
        self.count = count
        self._generate = generate

    def __iter__(self) -> Iterator[ForbiddenMember]:
        return self._generate()

    def map(self, translate: Callable[[ForbiddenMember], ForbiddenMember]) -> "LazyFamily":
        return LazyFamily(self.kind, self.count, lambda: (translate(m) for m in self._generate()))


# stage 1


@dataclass(frozen=True)
class Stage1:
    tiles: WangTileSet
    patch: Patch = field(hash=False)
    h: DirectedMulticoloredPathograph
    forbidden: Tuple[ForbiddenMember, ...]

    def counts(self) -> Tuple[int, int, int, int, int]:
        return self.h.counts()

    def kinds(self) -> Dict[str, int]:
        return _kind_counts(self.forbidden)


def _kind_counts(members: Iterable[ForbiddenMember]) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for m in members:
        out[m.kind] = out.get(m.kind, 0) + 1
    return out


def _full_patch(tiles: WangTileSet, patch: Patch) -> Patch:
    cells = [(i, j) for i in range(1, PATCH_SIZE + 1) for j in range(1, PATCH_SIZE + 1)]
    missing = [c for c in cells if c not in patch]
    if missing:
        raise TilingError(f"patch lacks cells {missing}")
    for name in patch.values():
        tiles.index(name)
    return {c: patch[c] for c in cells}


def _two_vertex(kind: str, index: Tuple, arc: Optional[Arc]) -> ForbiddenMember:
    graph = DirectedMulticoloredPathograph(vertices=(("r", RED), ("b", BLUE)), arcs=(arc,) if arc else ())
    return ForbiddenMember(kind, index, graph)


def stage1_forbidden(tiles: WangTileSet) -> List[ForbiddenMember]:
    members = [
        _two_vertex("1a", (), Arc("r", "b", RED)),
        _two_vertex("1b", (), Arc("r", "b", BLUE)),
        _two_vertex("1c", (), None),
    ]
    for color in tiles.names + (RED, BLUE):
        members.append(_two_vertex("1d", (color,), Arc("b", "r", color)))
    for s, t in itertools.product(tiles, repeat=2):
        if s.east != t.west:
            graph = DirectedMulticoloredPathograph(
                vertices=(("r1", RED), ("r2", RED), ("b", BLUE)),
                arcs=(Arc("r1", "r2", RED), Arc("r1", "b", s.name), Arc("r2", "b", t.name)),
            )
            members.append(ForbiddenMember("2", (s.name, t.name), graph))
    for s, t in itertools.product(tiles, repeat=2):
        if s.north != t.south:
            graph = DirectedMulticoloredPathograph(
                vertices=(("b1", BLUE), ("b2", BLUE), ("r", RED)),
                arcs=(Arc("b1", "b2", BLUE), Arc("r", "b1", s.name), Arc("r", "b2", t.name)),
            )
            members.append(ForbiddenMember("3", (s.name, t.name), graph))
    return members


def build_stage1(tiles: WangTileSet, patch: Patch) -> Stage1:
    """
    The directed multicoloured instance for (S, patch).

    The red cycle is x1 -> x2 -> x3 closed by urpath ux from x3 to x1, the
    blue cycle likewise with y1..y3 and uy; x_i -> y_j is coloured with the
    patch tile at (i, j). Spokes run from each x_i into uy and from ux into
    each y_j, and the rung runs from ux to uy.
    """
    tiles.ensure_valid()
    patch = _full_patch(tiles, patch)
    xs = [f"x{i}" for i in range(1, PATCH_SIZE + 1)]
    ys = [f"y{j}" for j in range(1, PATCH_SIZE + 1)]
    arcs = [Arc(a, b, RED) for a, b in zip(xs, xs[1:])]
    arcs += [Arc(a, b, BLUE) for a, b in zip(ys, ys[1:])]
    for i, j in itertools.product(range(1, PATCH_SIZE + 1), repeat=2):
        arcs.append(Arc(xs[i - 1], ys[j - 1], patch[(i, j)]))
    h = DirectedMulticoloredPathograph(
        vertices=tuple((x, RED) for x in xs) + tuple((y, BLUE) for y in ys),
        arcs=tuple(arcs),
        urpaths=(DirectedUrpath("ux", xs[-1], xs[0], RED), DirectedUrpath("uy", ys[-1], ys[0], BLUE)),
        spokes=tuple(DirectedSpoke(x, "uy", True) for x in xs) + tuple(DirectedSpoke(y, "ux", False) for y in ys),
        rungs=(DirectedRung("ux", "uy"),),
    )
    forbidden = tuple(stage1_forbidden(tiles))
    logger.info(f"Stage 1 built: ({h.describe()}), {len(forbidden)} forbidden members")
    return Stage1(tiles, patch, h, forbidden)


# stage 2


def path_names(v: str, K: int) -> List[str]:
    return [f"{v}_{k}" for k in range(1, K + 1)]


def translate_colored(g: DirectedMulticoloredPathograph, tiles: WangTileSet) -> VertexColoredPathograph:
    """
    Replace vertices by coloured K-paths and tile-coloured edges by
    bipartite-minus-one gadgets; spokes are inherited by every path vertex.
    """
    K = len(tiles)
    vertices: List[str] = []
    colors: Dict[str, int] = {}
    edges: List[Tuple[str, str]] = []
    for v, c in g.vertices:
        sign = 1 if c == RED else -1
        names = path_names(v, K)
        vertices.extend(names)
        colors.update({x: sign * k for k, x in enumerate(names, start=1)})
        edges.extend(zip(names, names[1:]))

    def last(v: str) -> str:
        return f"{v}_{K}"

    def first(v: str) -> str:
        return f"{v}_1"

    for a in g.arcs:
        if a.color in (RED, BLUE):
            edges.append((last(a.tail), first(a.head)))
            continue
        k = tiles.index(a.color) + 1
        for alpha, beta in itertools.product(range(1, K + 1), repeat=2):
            if alpha == beta == k:
                continue
            edges.append((f"{a.tail}_{alpha}", f"{a.head}_{beta}"))

    base = Pathograph.build(
        vertices,
        edges,
        [(u.name, last(u.tail), first(u.head)) for u in g.urpaths],
        [(x, s.urpath) for s in g.spokes for x in path_names(s.vertex, K)],
        [(r.tail, r.head) for r in g.rungs],
    )
    return VertexColoredPathograph(base, colors)


def colored_graph(vertices: Sequence[Tuple[str, int]], edges: Iterable[Tuple[str, str]] = ()) -> VertexColoredPathograph:
    return VertexColoredPathograph(Pathograph.graph([v for v, _ in vertices], edges), dict(vertices))


class BipartiteFamily:
    """
    The type-1 members: a path coloured 1..K, a path coloured -1..-K, and any
    set of edges between them except a complete bipartite graph minus the
    edge between the two k-th vertices. An edge set is a frozenset of
    (alpha, beta) pairs, meaning x_alpha - y_beta.
    """

    kind = "1"

    def __init__(self, K: int):
        self.K = K
        self.cells = [(alpha, beta) for alpha in range(1, K + 1) for beta in range(1, K + 1)]

    @property
    def count(self) -> int:
        return 2 ** (self.K * self.K) - self.K

    def excluded(self, k: int) -> FrozenSet[Tuple[int, int]]:
        return frozenset(c for c in self.cells if c != (k, k))

    def is_member(self, edges: Iterable[Tuple[int, int]]) -> bool:
        edges = frozenset(edges)
        if not edges <= set(self.cells):
            return False
        return all(edges != self.excluded(k) for k in range(1, self.K + 1))

    def graph(self, edges: Iterable[Tuple[int, int]]) -> VertexColoredPathograph:
        K = self.K
        xs = [(f"x{k}", k) for k in range(1, K + 1)]
        ys = [(f"y{k}", -k) for k in range(1, K + 1)]
        path_edges = [(f"x{k}", f"x{k + 1}") for k in range(1, K)] + [(f"y{k}", f"y{k + 1}") for k in range(1, K)]
        cross = [(f"x{alpha}", f"y{beta}") for alpha, beta in sorted(edges)]
        return colored_graph(xs + ys, path_edges + cross)

    def __iter__(self) -> Iterator[ForbiddenMember]:
        excluded = {self.excluded(k) for k in range(1, self.K + 1)}
        for r in range(len(self.cells) + 1):
            for chosen in itertools.combinations(self.cells, r):
                edges = frozenset(chosen)
                if edges in excluded:
                    continue
                yield ForbiddenMember(self.kind, tuple(chosen), self.graph(edges))

    def lazy(self) -> LazyFamily:
        return LazyFamily(self.kind, self.count, self.__iter__)


def _adjacent_residue(i: int, j: int, K: int) -> bool:
    return (i - j) % K in (1, K - 1)


def stage2_extra(K: int) -> List[ForbiddenMember]:
    """Types 4 to 8, fixing the colour pattern along and between the paths."""
    members: List[ForbiddenMember] = []
    for sign, kind in ((1, "4"), (-1, "5")):
        for i in range(1, K + 1):
            for j in range(i, K + 1):
                if not _adjacent_residue(i, j, K):
                    graph = colored_graph([("v1", sign * i), ("v2", sign * j)], [("v1", "v2")])
                    members.append(ForbiddenMember(kind, (sign * i, sign * j), graph))
    for sign, kind in ((1, "6"), (-1, "7")):
        for i in range(1, K + 1):
            nxt = i % K + 1
            graph = colored_graph(
                [("v1", sign * i), ("v2", sign * nxt), ("v3", sign * nxt)], [("v1", "v2"), ("v1", "v3")]
            )
            members.append(ForbiddenMember(kind, (sign * i,), graph))
    for i, j in itertools.permutations(range(1, K + 1), 2):
        members.append(ForbiddenMember("8", (i, -j), colored_graph([("v1", i), ("v2", -j)])))
    return members


@dataclass(frozen=True)
class Stage2:
    stage1: Stage1
    h: VertexColoredPathograph
    forbidden: Tuple[ForbiddenMember, ...]
    type1: BipartiteFamily

    @property
    def tiles(self) -> WangTileSet:
        return self.stage1.tiles

    @property
    def K(self) -> int:
        return len(self.stage1.tiles)

    def kinds(self) -> Dict[str, int]:
        out = {self.type1.kind: self.type1.count}
        out.update(_kind_counts(self.forbidden))
        return out

    @property
    def total(self) -> int:
        return self.type1.count + len(self.forbidden)

    def members(self) -> Iterator[ForbiddenMember]:
        yield from self.type1
        yield from self.forbidden


def padded_stage1(stage1: Stage1, minimum: int) -> Stage1:
    if len(stage1.tiles) >= minimum:
        return stage1
    return build_stage1(pad_tiles(stage1.tiles, minimum), stage1.patch)


def build_stage2(stage1: Stage1) -> Stage2:
    """
    The vertex-coloured instance; fewer than 3 tiles are padded with dummy
    tiles first.
    """
    stage1 = padded_stage1(stage1, STAGE2_MIN_TILES)
    K = len(stage1.tiles)
    h = translate_colored(stage1.h, stage1.tiles)
    translated = [
        ForbiddenMember(m.kind, m.index, translate_colored(m.graph, stage1.tiles))
        for m in stage1.forbidden
        if m.kind in ("2", "3")
    ]
    forbidden = tuple(translated + stage2_extra(K))
    type1 = BipartiteFamily(K)
    logger.info(f"Stage 2 built: ({h.describe()}), {len(forbidden)} listed members plus {type1.count} of type 1")
    return Stage2(stage1, h, forbidden, type1)


# stage 3


def clique_names(K: int) -> List[str]:
    return [f"c{i}" for i in range(1, 3 * K + 1)]


def selector_names(K: int) -> List[str]:
    return [f"z{i}" for i in range(1, 2 * K + 1)]


def selector_of(color: int, K: int) -> str:
    """z_i for colour i > 0, z_{K+|i|} for colour i < 0."""
    return f"z{color}" if color > 0 else f"z{K - color}"


def _gadget_edges(K: int) -> List[Tuple[str, str]]:
    clique = clique_names(K)
    edges = list(itertools.combinations(clique, 2))
    for i, z in enumerate(selector_names(K), start=1):
        edges.extend((z, c) for c in clique[:i])
    return edges


def uncolor(p: VertexColoredPathograph, K: int) -> Pathograph:
    """
    Add the clique and selectors, attach every vertex to the selector of its
    colour, and give z_i a spoke to each urpath whose ends carry colours of
    z_i's sign.
    """
    base = p.base
    edges = base.sorted_edges()
    edges += _gadget_edges(K)
    edges += [(v, selector_of(p.colors[v], K)) for v in base.vertices]
    spokes = list(base.spokes)
    for u in base.urpaths:
        positive = p.colors[u.left] > 0
        for i, z in enumerate(selector_names(K), start=1):
            if (i <= K) == positive:
                spokes.append((z, u.name))
    return Pathograph.build(
        base.vertices + tuple(clique_names(K)) + tuple(selector_names(K)),
        edges,
        [(u.name, u.left, u.right) for u in base.urpaths],
        spokes,
        base.sorted_rungs(),
    )


def stage3_extra(K: int) -> List[ForbiddenMember]:
    """Types 9 and 10: no vertex sees two selectors, and no long path hangs off one."""
    clique = clique_names(K)
    clique_edges = list(itertools.combinations(clique, 2))
    members: List[ForbiddenMember] = []
    for i, j in itertools.combinations(range(1, 2 * K + 1), 2):
        zi, zj = f"z{i}", f"z{j}"
        edges = clique_edges + [(zi, c) for c in clique[:i]] + [(zj, c) for c in clique[:j]]
        edges += [("v", zi), ("v", zj)]
        members.append(ForbiddenMember("9", (i, j), Pathograph.graph(clique + [zi, zj, "v"], edges)))
    for i in range(1, 2 * K + 1):
        zi = f"z{i}"
        path = [f"v{k}" for k in range(1, K + 2)]
        edges = clique_edges + [(zi, c) for c in clique[:i]] + [("v1", zi)] + list(zip(path, path[1:]))
        members.append(ForbiddenMember("10", (i,), Pathograph.graph(clique + [zi] + path, edges)))
    return members


@dataclass(frozen=True)
class Stage3:
    stage2: Stage2
    h: Pathograph
    forbidden: Tuple[ForbiddenMember, ...]
    type1: LazyFamily

    @property
    def K(self) -> int:
        return self.stage2.K

    def kinds(self) -> Dict[str, int]:
        out = {self.type1.kind: self.type1.count}
        out.update(_kind_counts(self.forbidden))
        return out

    @property
    def total(self) -> int:
        return self.type1.count + len(self.forbidden)

    def members(self) -> Iterator[ForbiddenMember]:
        yield from self.type1
        yield from self.forbidden


def build_stage3(stage2: Stage2) -> Stage3:
    """
    The uncoloured instance; fewer than 9 tiles are padded with dummy tiles
    and stages 1 and 2 rebuilt first.
    """
    if stage2.K < STAGE3_MIN_TILES:
        stage2 = build_stage2(padded_stage1(stage2.stage1, STAGE3_MIN_TILES))
    K = stage2.K

    def translate(m: ForbiddenMember) -> ForbiddenMember:
        return ForbiddenMember(m.kind, m.index, uncolor(m.graph, K))

    h = uncolor(stage2.h, K)
    forbidden = tuple([translate(m) for m in stage2.forbidden] + stage3_extra(K))
    type1 = stage2.type1.lazy().map(translate)
    logger.info(f"Stage 3 built: ({h.describe()}), {len(forbidden)} listed members plus {type1.count} of type 1")
    return Stage3(stage2, h, forbidden, type1)


# output


Stage = Union[Stage1, Stage2, Stage3]


def stage_number(stage: Stage) -> int:
    return {Stage1: 1, Stage2: 2, Stage3: 3}[type(stage)]


def _block(graph, comments: List[str]) -> str:
    if isinstance(graph, Pathograph):
        return format_pgf(graph, comments)
    if isinstance(graph, DirectedMulticoloredPathograph):
        return format_pgf(graph.underlying(), comments + graph.annotations())
    return format_pgf(graph.base, comments + graph.annotations())


def format_stage(stage: Stage, members: bool = True) -> str:
    """
    PGF text: the instance first, then one block per listed forbidden member.
    Colours and directions travel in '# color:' and '# dir:' comments; the
    type-1 family is summarised, not listed.
    """
    number = stage_number(stage)
    header = [f"stage {number} instance"]
    if number > 1:
        header.append(f"type 1: {stage.type1.count} members generated on demand")
    blocks = [_block(stage.h, header)]
    if members:
        for m in stage.forbidden:
            blocks.append(_block(m.graph, [f"forbidden {m.label}"]))
    return f"{BLOCK_SEPARATOR}\n".join(blocks)


def stage_counts(stage: Stage) -> Tuple[int, int, int, int, int]:
    h = stage.h
    if isinstance(h, DirectedMulticoloredPathograph):
        return h.counts()
    base = h.base if isinstance(h, VertexColoredPathograph) else h
    return (base.N, base.K, len(base.edges), len(base.spokes), len(base.rungs))
