"""
Witness Realizations

A periodic tiling with periods (a, b), both at least 4, gives a stage-1
realization directly: a red directed cycle x_1..x_a, a blue directed cycle
y_1..y_b, and an edge x_i -> y_j coloured with the tile at (i, j). Stages 2
and 3 push that graph through the same translations that built their
instances. Stage 1 witnesses are checked in full; for stages 2 and 3 only
the structure is checked, since their forbidden families are far too large
to test containment against.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import networkx as nx
from networkx.algorithms import isomorphism

from core.limits_loader import get_default
from core.utils import TilingError, VerificationError
from pathograph.model import Pathograph
from realization.realization import realization_violations
from reductions.stages import (
    BLUE,
    RED,
    Arc,
    DirectedMulticoloredPathograph,
    ForbiddenMember,
    Stage1,
    VertexColoredPathograph,
    build_stage1,
    build_stage2,
    build_stage3,
    clique_names,
    path_names,
    selector_names,
    selector_of,
    translate_colored,
    uncolor,
)
from reductions.tiles import PATCH_SIZE, Patch, PeriodicTiling, patch_from_tiling

logger = logging.getLogger(__name__)

MIN_PERIOD = 4

_NODE_MATCH = isomorphism.categorical_node_match("color", None)
_EDGE_MATCH = isomorphism.categorical_edge_match("color", None)


# stage 1 checks


def directed_realization_violations(
    g: DirectedMulticoloredPathograph, h: DirectedMulticoloredPathograph, internal_paths: Dict[str, Sequence[str]]
) -> List[str]:
    """
    Realization invariants of a directed multicoloured graph: the undirected
    ones, then colours, directions and a path of at least 3 vertices per urpath.
    """
    out = realization_violations(g.underlying(), h.underlying(), internal_paths)
    if out:
        return out
    for v, c in h.vertices:
        if g.color_of(v) != c:
            out.append(f"vertex {v} is {g.color_of(v)}, expected {c}")
    for a in h.arcs:
        if g.arc(a.tail, a.head) != a:
            out.append(f"edge {a.tail}->{a.head} ({a.color}) differs from the pathograph")
    for u in h.urpaths:
        seq = [u.tail, *internal_paths[u.name], u.head]
        if len(seq) < 3:
            out.append(f"path of {u.name} has fewer than 3 vertices")
        for x in internal_paths[u.name]:
            if g.color_of(x) != u.color:
                out.append(f"vertex {x} on the path of {u.name} is not {u.color}")
        for x, y in zip(seq, seq[1:]):
            arc = g.arc(x, y)
            if arc is None or arc.color != u.color:
                out.append(f"path of {u.name} lacks a {u.color} edge {x}->{y}")
    for s in h.spokes:
        xs = internal_paths[s.urpath]
        pairs = [(s.vertex, x) if s.outward else (x, s.vertex) for x in xs]
        if not any(g.arc(*p) for p in pairs):
            out.append(f"spoke ({s.vertex}, {s.urpath}) has no edge in its direction")
    for r in h.rungs:
        if not any(g.arc(x, y) for x in internal_paths[r.tail] for y in internal_paths[r.head]):
            out.append(f"rung {r.tail}->{r.head} has no edge in its direction")
    return out


def first_forbidden(g: DirectedMulticoloredPathograph, members: Sequence[ForbiddenMember]) -> Optional[ForbiddenMember]:
    """The first member contained as a colour- and direction-preserving induced subgraph, if any."""
    target = g.to_networkx()
    for m in members:
        matcher = isomorphism.DiGraphMatcher(target, m.graph.to_networkx(), node_match=_NODE_MATCH, edge_match=_EDGE_MATCH)
        if matcher.subgraph_is_isomorphic():
            return m
    return None


# witness graphs


def stage1_witness(tiling: PeriodicTiling) -> Tuple[DirectedMulticoloredPathograph, Dict[str, Tuple[str, ...]]]:
    """The directed multicoloured graph of a tiling whose periods are both at least 4."""
    a, b = tiling.periods
    if min(a, b) < MIN_PERIOD:
        raise TilingError(f"witness needs periods of at least {MIN_PERIOD}, got ({a}, {b})")
    xs = [f"x{i}" for i in range(1, a + 1)]
    ys = [f"y{j}" for j in range(1, b + 1)]
    arcs = [Arc(xs[i], xs[(i + 1) % a], RED) for i in range(a)]
    arcs += [Arc(ys[j], ys[(j + 1) % b], BLUE) for j in range(b)]
    for i, j in itertools.product(range(a), range(b)):
        arcs.append(Arc(xs[i], ys[j], tiling.tile_at(i, j).name))
    g = DirectedMulticoloredPathograph(
        vertices=tuple((x, RED) for x in xs) + tuple((y, BLUE) for y in ys),
        arcs=tuple(arcs),
    )
    paths = {"ux": tuple(xs[PATCH_SIZE:]), "uy": tuple(ys[PATCH_SIZE:])}
    return g, paths


def _expand_paths(paths: Dict[str, Tuple[str, ...]], K: int) -> Dict[str, Tuple[str, ...]]:
    return {u: tuple(x for v in vs for x in path_names(v, K)) for u, vs in paths.items()}


# reports

Witness = Union[DirectedMulticoloredPathograph, VertexColoredPathograph, Pathograph]


@dataclass(frozen=True)
class WitnessReport:
    stage: int
    periods: Tuple[int, int]
    graph: Witness
    internal_paths: Dict[str, Tuple[str, ...]] = field(hash=False)
    checks: Dict[str, bool] = field(hash=False)
    freeness: Literal["verified", "skipped"] = "skipped"

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def vertex_count(self) -> int:
        if isinstance(self.graph, DirectedMulticoloredPathograph):
            return len(self.graph.vertices)
        base = self.graph.base if isinstance(self.graph, VertexColoredPathograph) else self.graph
        return base.N

    def lines(self) -> List[str]:
        out = [f"stage {self.stage} witness, periods {self.periods[0]}x{self.periods[1]}, {self.vertex_count} vertices"]
        for name, passed in self.checks.items():
            out.append(f"  {name}: {'ok' if passed else 'FAILED'}")
        if self.freeness == "skipped":
            out.append("  forbidden-freeness: skipped (family too large to check)")
        return out


def _gadget_checks(
    g: VertexColoredPathograph, tiling: PeriodicTiling, tiles_index: Dict[str, int], K: int
) -> List[str]:
    """Each red path and blue path miss exactly one edge, between colours k and -k for the k-th tile."""
    out = []
    for i, j in itertools.product(range(tiling.a), range(tiling.b)):
        xs = path_names(f"x{i + 1}", K)
        ys = path_names(f"y{j + 1}", K)
        missing = [(x, y) for x in xs for y in ys if not g.base.has_edge(x, y)]
        k = tiles_index[tiling.tile_at(i, j).name] + 1
        if missing != [(xs[k - 1], ys[k - 1])]:
            out.append(f"gadget x{i + 1}/y{j + 1} misses {missing}, expected only colours {k}/{-k}")
    return out


def _color_checks(g: VertexColoredPathograph, tiling: PeriodicTiling, K: int) -> List[str]:
    out = []
    for prefix, count, sign in (("x", tiling.a, 1), ("y", tiling.b, -1)):
        for n in range(1, count + 1):
            for k, v in enumerate(path_names(f"{prefix}{n}", K), start=1):
                if g.colors.get(v) != sign * k:
                    out.append(f"vertex {v} has colour {g.colors.get(v)}, expected {sign * k}")
    return out


def _selector_checks(g: Pathograph, colored: VertexColoredPathograph, K: int) -> List[str]:
    out = []
    clique = clique_names(K)
    for c, d in itertools.combinations(clique, 2):
        if not g.has_edge(c, d):
            out.append(f"clique misses {c}-{d}")
    for i, z in enumerate(selector_names(K), start=1):
        seen = [c for c in clique if g.has_edge(z, c)]
        if seen != clique[:i]:
            out.append(f"{z} sees {len(seen)} clique vertices, expected c1..c{i}")
    selectors = set(selector_names(K))
    for v in colored.base.vertices:
        attached = sorted(z for z in selectors if g.has_edge(v, z))
        if attached != [selector_of(colored.colors[v], K)]:
            out.append(f"{v} is attached to {attached}")
    return out


def _raise_on_failure(report: WitnessReport, problems: Dict[str, List[str]]) -> WitnessReport:
    failed = [f"{name}: {p}" for name, ps in problems.items() for p in ps]
    if failed:
        logger.error(f"Stage {report.stage} witness failed verification: {failed[:5]}")
        raise VerificationError("; ".join(failed[:10]))
    logger.info(f"Stage {report.stage} witness verified with {report.vertex_count} vertices")
    return report


def tiling_to_realization(stage: int, tiling: PeriodicTiling, patch: Optional[Patch] = None) -> WitnessReport:
    """
    Build and verify the witness realization of a periodic tiling at a stage.

    Periods below 4 are lifted first. The patch defaults to the 3x3 corner
    of the tiling itself.

    Raises:
        TilingError: If the tiling is invalid, does not extend the patch, or the stage is unknown
        VerificationError: If the witness fails a check
    """
    if stage not in (1, 2, 3):
        raise TilingError(f"unknown stage {stage}")
    problems = tiling.violations()
    if problems:
        raise TilingError("invalid tiling: " + "; ".join(problems[:5]))
    if patch is not None and not tiling.extends(patch):
        raise TilingError("tiling does not extend the patch")
    patch = patch or patch_from_tiling(tiling)
    tiling = tiling.lifted(MIN_PERIOD)

    stage1 = build_stage1(tiling.tiles, patch)
    g1, paths1 = stage1_witness(tiling)
    if stage == 1:
        realizes = directed_realization_violations(g1, stage1.h, paths1)
        contained = first_forbidden(g1, stage1.forbidden)
        report = WitnessReport(
            1, tiling.periods, g1, paths1,
            {"realizes instance": not realizes, "forbidden-free": contained is None},
            freeness="verified",
        )
        found = [f"contains {contained.label}"] if contained else []
        return _raise_on_failure(report, {"realizes instance": realizes, "forbidden-free": found})

    stage2 = build_stage2(stage1)
    if stage == 3:
        stage3 = build_stage3(stage2)
        stage2 = stage3.stage2
    K = stage2.K
    tiles_index = {name: i for i, name in enumerate(stage2.tiles.names)}
    g2 = translate_colored(g1, stage2.tiles)
    paths2 = _expand_paths(paths1, K)
    colored = {
        "vertex count": [] if g2.base.N == (tiling.a + tiling.b) * K else [f"{g2.base.N} vertices"],
        "colouring": _color_checks(g2, tiling, K),
        "gadgets": _gadget_checks(g2, tiling, tiles_index, K),
    }
    if stage == 2:
        colored["realizes instance"] = realization_violations(g2.base, stage2.h.base, paths2)
        report = WitnessReport(2, tiling.periods, g2, paths2, {k: not v for k, v in colored.items()})
        return _raise_on_failure(report, colored)

    g3 = uncolor(g2, K)
    expected = (tiling.a + tiling.b) * K + 5 * K
    checks = {
        "vertex count": [] if g3.N == expected else [f"{g3.N} vertices, expected {expected}"],
        "colouring": colored["colouring"],
        "gadgets": colored["gadgets"],
        "clique and selectors": _selector_checks(g3, g2, K),
        "realizes instance": realization_violations(g3, stage3.h, paths2),
    }
    report = WitnessReport(3, tiling.periods, g3, paths2, {k: not v for k, v in checks.items()})
    return _raise_on_failure(report, checks)


# exhaustive stage-1 search


class _CycleSearch:
    """
    Colour the cross edges x_i -> y_j of a fixed pair of cycles cell by cell,
    testing every 2- and 3-vertex induced subgraph through the new edge
    against the forbidden members as soon as all its edges are coloured.
    """

    def __init__(self, stage1: Stage1, a: int, b: int):
        self.stage1 = stage1
        self.a = a
        self.b = b
        self.xs = [f"x{i}" for i in range(1, a + 1)]
        self.ys = [f"y{j}" for j in range(1, b + 1)]
        self.graph = nx.DiGraph()
        for x in self.xs:
            self.graph.add_node(x, color=RED)
        for y in self.ys:
            self.graph.add_node(y, color=BLUE)
        for i in range(a):
            self.graph.add_edge(self.xs[i], self.xs[(i + 1) % a], color=RED)
        for j in range(b):
            self.graph.add_edge(self.ys[j], self.ys[(j + 1) % b], color=BLUE)
        self.by_size: Dict[int, List[nx.DiGraph]] = {}
        for m in stage1.forbidden:
            mg = m.graph.to_networkx()
            self.by_size.setdefault(mg.number_of_nodes(), []).append(mg)
        self.cells = [(i, j) for j in range(b) for i in range(a)]
        self.fixed = {(i - 1, j - 1): name for (i, j), name in stage1.patch.items()}

    def _hits(self, nodes: Sequence[str]) -> bool:
        sub = self.graph.subgraph(nodes)
        return any(
            nx.is_isomorphic(sub, mg, node_match=_NODE_MATCH, edge_match=_EDGE_MATCH)
            for mg in self.by_size.get(len(nodes), ())
        )

    def _consistent(self, i: int, j: int) -> bool:
        x, y = self.xs[i], self.ys[j]
        if self._hits([x, y]):
            return False
        for k, other in enumerate(self.xs):
            if k != i and self.graph.has_edge(other, y) and self._hits([x, other, y]):
                return False
        for k, other in enumerate(self.ys):
            if k != j and self.graph.has_edge(x, other) and self._hits([x, y, other]):
                return False
        return True

    def run(self, n: int = 0) -> bool:
        if n == len(self.cells):
            return True
        i, j = self.cells[n]
        x, y = self.xs[i], self.ys[j]
        choices = [self.fixed[(i, j)]] if (i, j) in self.fixed else self.stage1.tiles.names
        for name in choices:
            self.graph.add_edge(x, y, color=name)
            if self._consistent(i, j) and self.run(n + 1):
                return True
            self.graph.remove_edge(x, y)
        return False

    def witness(self) -> DirectedMulticoloredPathograph:
        return DirectedMulticoloredPathograph(
            vertices=tuple((v, c) for v, c in self.graph.nodes(data="color")),
            arcs=tuple(Arc(s, t, c) for s, t, c in self.graph.edges(data="color")),
        )


def tiling_search_stage1(stage1: Stage1, max_cycle: Optional[int] = None) -> Optional[WitnessReport]:
    """
    Search stage-1 realizations whose red and blue paths close cycles of 4 to
    `max_cycle` vertices, every cross edge running red to blue with a tile
    colour, for one that contains no forbidden member.

    Args:
        stage1: The stage-1 instance
        max_cycle: Largest cycle length tried; defaults to stage1_max_cycle in the limits file

    Returns:
        The verified witness of the first one found, or None
    """
    if max_cycle is None:
        max_cycle = int(get_default("stage1_max_cycle"))
    for a, b in sorted(itertools.product(range(MIN_PERIOD, max_cycle + 1), repeat=2), key=lambda p: (p[0] * p[1], p)):
        search = _CycleSearch(stage1, a, b)
        if not search.run():
            logger.debug(f"No forbidden-free stage 1 realization with cycles {a} and {b}")
            continue
        g = search.witness()
        paths = {"ux": tuple(search.xs[PATCH_SIZE:]), "uy": tuple(search.ys[PATCH_SIZE:])}
        realizes = directed_realization_violations(g, stage1.h, paths)
        contained = first_forbidden(g, stage1.forbidden)
        report = WitnessReport(
            1, (a, b), g, paths,
            {"realizes instance": not realizes, "forbidden-free": contained is None},
            freeness="verified",
        )
        found = [f"contains {contained.label}"] if contained else []
        return _raise_on_failure(report, {"realizes instance": realizes, "forbidden-free": found})
    logger.info(f"No forbidden-free stage 1 realization with cycles up to {max_cycle}")
    return None
