"""Small graph builders and hypothesis strategies shared by the test modules."""

import itertools
from typing import List

from hypothesis import strategies as st

from automaton.machines import Alphabet, Nfa, SymbolPattern
from automaton.partial import PartialInclusion
from pathograph.model import Pathograph
from pathograph.paths import PathSub
from realization.strings import DeterminationString
from reductions.tiles import WangTileSet


def path(n: int) -> Pathograph:
    vs = [f"p{i}" for i in range(1, n + 1)]
    return Pathograph.graph(vs, zip(vs, vs[1:]))


def cycle(n: int) -> Pathograph:
    vs = [f"c{i}" for i in range(1, n + 1)]
    return Pathograph.graph(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def complete(n: int) -> Pathograph:
    vs = [f"k{i}" for i in range(1, n + 1)]
    return Pathograph.graph(vs, itertools.combinations(vs, 2))


def wheel(n: int) -> Pathograph:
    """A hole of length n plus a hub adjacent to all of it."""
    rim = cycle(n)
    edges = [tuple(e) for e in rim.edges] + [("hub", v) for v in rim.vertices]
    return Pathograph.graph(list(rim.vertices) + ["hub"], edges)


def square_with_urpath() -> Pathograph:
    """Square a-b-c-d with one urpath a..c seen by b and d."""
    return Pathograph.build(
        ["a", "b", "c", "d"],
        edges=[("a", "b"), ("a", "d"), ("c", "b"), ("c", "d")],
        urpaths=[("u", "a", "c")],
        spokes=[("b", "u"), ("d", "u")],
    )


def two_urpaths_with_rung(extra_spoke: bool = False) -> Pathograph:
    vertices = ["a", "b", "c", "d"] + (["e"] if extra_spoke else [])
    return Pathograph.build(
        vertices,
        urpaths=[("u1", "a", "b"), ("u2", "c", "d")],
        spokes=[("e", "u1")] if extra_spoke else [],
        rungs=[("u1", "u2")],
    )


@st.composite
def graphs(draw, min_vertices: int = 1, max_vertices: int = 6) -> Pathograph:
    n = draw(st.integers(min_vertices, max_vertices))
    vs = [f"g{i}" for i in range(1, n + 1)]
    edges = [e for e in itertools.combinations(vs, 2) if draw(st.booleans())]
    return Pathograph.graph(vs, edges)


@st.composite
def pathographs(draw, max_vertices: int = 5, max_urpaths: int = 2, with_rungs: bool = False) -> Pathograph:
    """Valid pathographs: urpath ends distinct and non-adjacent, no endpoint spokes."""
    n = draw(st.integers(2, max_vertices))
    vs = [f"v{i}" for i in range(1, n + 1)]
    pairs = list(itertools.combinations(vs, 2))
    k = draw(st.integers(0, max_urpaths))
    urpaths = []
    for j in range(1, k + 1):
        left, right = draw(st.sampled_from(pairs))
        if draw(st.booleans()):
            left, right = right, left
        urpaths.append((f"u{j}", left, right))
    blocked = {frozenset((left, right)) for _, left, right in urpaths}
    edges = [e for e in pairs if frozenset(e) not in blocked and draw(st.booleans())]
    spokes = [(v, u) for u, left, right in urpaths for v in vs if v not in (left, right) and draw(st.booleans())]
    rungs = []
    if with_rungs:
        names = [u for u, _, _ in urpaths]
        rungs = [r for r in itertools.combinations(names, 2) if draw(st.booleans())]
    return Pathograph.build(vs, edges, urpaths, spokes, rungs)


def rungless_pathographs(**kwargs):
    return pathographs(with_rungs=False, **kwargs)


@st.composite
def one_rung_pathographs(draw, max_vertices: int = 4, max_spokes: int = 1) -> Pathograph:
    """Two urpaths u1, u2 joined by the only rung, plus a few spokes and random edges."""
    n = draw(st.integers(2, max_vertices))
    vs = [f"v{i}" for i in range(1, n + 1)]
    pairs = list(itertools.combinations(vs, 2))
    urpaths = [(name,) + draw(st.sampled_from(pairs)) for name in ("u1", "u2")]
    blocked = {frozenset((left, right)) for _, left, right in urpaths}
    edges = [e for e in pairs if frozenset(e) not in blocked and draw(st.booleans())]
    candidates = [(v, u) for u, left, right in urpaths for v in vs if v not in (left, right)]
    spokes = draw(st.lists(st.sampled_from(candidates), max_size=max_spokes, unique=True)) if candidates else []
    return Pathograph.build(vs, edges, urpaths, spokes, [("u1", "u2")])


SMALL_ALPHABET = Alphabet(("a", "b"), 2)


@st.composite
def patterns(draw, alphabet: Alphabet = SMALL_ALPHABET) -> SymbolPattern:
    index = draw(st.integers(1, alphabet.K))
    required, forbidden = set(), set()
    for v in alphabet.vertices:
        choice = draw(st.sampled_from(["any", "in", "out"]))
        if choice == "in":
            required.add(v)
        elif choice == "out":
            forbidden.add(v)
    return SymbolPattern(index, frozenset(required), frozenset(forbidden))


@st.composite
def nfas(draw, alphabet: Alphabet = SMALL_ALPHABET, max_states: int = 4) -> Nfa:
    n = draw(st.integers(1, max_states))
    nfa = Nfa(alphabet, 0, name="random")
    for s in range(n):
        nfa.add_state(s, accepting=draw(st.booleans()))
    for _ in range(draw(st.integers(0, 3 * n))):
        nfa.add_move(draw(st.integers(0, n - 1)), draw(patterns(alphabet)), draw(st.integers(0, n - 1)))
    for _ in range(draw(st.integers(0, n))):
        nfa.add_epsilon(draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1)))
    return nfa


def words(alphabet: Alphabet = SMALL_ALPHABET, max_size: int = 5):
    symbols = st.sampled_from(list(alphabet.symbols))
    return st.lists(symbols, max_size=max_size).map(lambda xs: DeterminationString(tuple(xs)))


def all_words(alphabet: Alphabet, max_length: int) -> List[DeterminationString]:
    out = []
    for length in range(max_length + 1):
        for combo in itertools.product(alphabet.symbols, repeat=length):
            out.append(DeterminationString(tuple(combo)))
    return out


@st.composite
def tile_sets(draw, max_tiles: int = 3, colors=("r", "g", "b")) -> WangTileSet:
    """Tile sets with distinct side tuples."""
    sides = draw(
        st.lists(
            st.tuples(*(st.sampled_from(colors) for _ in range(4))),
            min_size=1,
            max_size=max_tiles,
            unique=True,
        )
    )
    return WangTileSet.of(*[(f"t{i}",) + s for i, s in enumerate(sides, start=1)])


def wheel_trace(w1: Pathograph, square: Pathograph) -> PartialInclusion:
    """The one-spoke wheel traced on the square: v1, v3 on b, d; u1 through a; v2 left for the urpath."""
    return PartialInclusion(
        w1,
        square,
        {"v1": "b", "v2": None, "v3": "d"},
        {
            "u1": frozenset({PathSub(("b", "a", "d"), (None, None))}),
            "u2": frozenset({PathSub(("b",)), PathSub(("d",))}),
        },
    )
