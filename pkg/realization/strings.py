"""
Determination Strings

For a rungless pathograph h with urpaths u_1..u_K, the determination string
of a realization lists, urpath by urpath in index order and left to right
along each internal path, the neighbourhood of every internal vertex among
the vertices of h. The string determines the realization.

Text form: space-separated `k:{v1,v2}` tokens, `k:{}` for an empty
neighbourhood.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from core.utils import FormatParseError, IllFormedStringError, PreconditionError
from pathograph.model import Pathograph, pair
from realization.realization import Realization, internal_name

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"(\d+):\{([^{}]*)\}")


class Symbol(NamedTuple):
    """One letter (urpath index, neighbourhood) of a determination string."""

    index: int
    neighborhood: FrozenSet[str]

    def render(self, order: Optional[Sequence[str]] = None) -> str:
        if order is not None:
            rank = {v: i for i, v in enumerate(order)}
            items = sorted(self.neighborhood, key=lambda v: (rank.get(v, len(rank)), v))
        else:
            items = sorted(self.neighborhood)
        return f"{self.index}:{{{','.join(items)}}}"


def symbol(index: int, *vertices: str) -> Symbol:
    return Symbol(index, frozenset(vertices))


@dataclass(frozen=True)
class DeterminationString:
    symbols: Tuple[Symbol, ...] = ()

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def render(self, order: Optional[Sequence[str]] = None) -> str:
        return " ".join(s.render(order) for s in self.symbols)

    def __str__(self) -> str:
        return self.render()


def parse_symbol(token: str, position: int = 0) -> Symbol:
    match = _TOKEN.fullmatch(token)
    if not match:
        raise FormatParseError(f"bad determination-string token '{token}' at position {position}")
    index, body = match.groups()
    members = [v.strip() for v in body.split(",") if v.strip()]
    return Symbol(int(index), frozenset(members))


def parse_determination_string(text: str) -> DeterminationString:
    """
    Parse `k:{..} k:{..}` text; an empty or 'ε' text is the empty string.

    Raises:
        FormatParseError: On malformed tokens
    """
    stripped = text.strip()
    if stripped in ("", "ε", "epsilon"):
        return DeterminationString(())
    return DeterminationString(tuple(parse_symbol(tok, i) for i, tok in enumerate(stripped.split())))


def format_determination_string(sigma: DeterminationString, h: Optional[Pathograph] = None) -> str:
    if not sigma.symbols:
        return "ε"
    return sigma.render(h.vertices if h is not None else None)


def _require_rungless(h: Pathograph) -> None:
    if not h.is_rungless:
        raise PreconditionError("determination strings are defined for rungless pathographs only")


def determination_string(r: Realization) -> DeterminationString:
    """The determination string of a realization of a rungless pathograph."""
    h = r.source
    _require_rungless(h)
    hv = set(h.vertices)
    symbols = []
    for i, u in enumerate(h.urpath_names, start=1):
        for x in r.internal_paths[u]:
            symbols.append(Symbol(i, frozenset(r.graph.neighbors(x) & hv)))
    return DeterminationString(tuple(symbols))


def string_violations(h: Pathograph, sigma: DeterminationString) -> List[str]:
    """
    Reasons why sigma is not the determination string of any realization of h.

    Covers index discipline (nondecreasing, every index present), endpoint
    discipline (a_i exactly in the first index-i symbol, b_i exactly in the
    last) and spoke discipline (every spoke vertex of u_i in some index-i
    symbol, no other vertex besides the endpoints ever).
    """
    out: List[str] = []
    hv = set(h.vertices)
    segments: Dict[int, List[FrozenSet[str]]] = {}
    previous = 0
    for pos, s in enumerate(sigma.symbols):
        if not 1 <= s.index <= h.K:
            out.append(f"symbol {pos + 1} has index {s.index} outside 1..{h.K}")
            continue
        if not s.neighborhood <= hv:
            out.append(f"symbol {pos + 1} names unknown vertices {sorted(s.neighborhood - hv)}")
        if s.index < previous:
            out.append(f"index decreases at symbol {pos + 1}")
        previous = max(previous, s.index)
        segments.setdefault(s.index, []).append(s.neighborhood)

    for i, u in enumerate(h.urpaths, start=1):
        seg = segments.get(i)
        if not seg:
            out.append(f"index {i} missing")
            continue
        if u.left not in seg[0]:
            out.append(f"first index-{i} symbol lacks {u.left}")
        if u.right not in seg[-1]:
            out.append(f"last index-{i} symbol lacks {u.right}")
        for k, nb in enumerate(seg):
            if u.left in nb and k != 0:
                out.append(f"{u.left} in a non-first index-{i} symbol")
            if u.right in nb and k != len(seg) - 1:
                out.append(f"{u.right} in a non-last index-{i} symbol")
        spoke_vertices = h.spokes_of(u.name)
        seen = set().union(*seg)
        for v in sorted(spoke_vertices - seen):
            out.append(f"spoke ({v}, {u.name}) has no index-{i} symbol")
        for v in sorted(seen - spoke_vertices - set(u.ends)):
            out.append(f"{v} occurs in index-{i} symbols without a spoke to {u.name}")
    return out


def is_well_formed(h: Pathograph, sigma: DeterminationString) -> bool:
    return not string_violations(h, sigma)


def realization_from_string(h: Pathograph, sigma: DeterminationString) -> Realization:
    """
    Reconstruct the realization with the given determination string.

    Raises:
        PreconditionError: If h has rungs
        IllFormedStringError: If sigma is not a determination string of h
    """
    _require_rungless(h)
    problems = string_violations(h, sigma)
    if problems:
        raise IllFormedStringError(problems)

    by_index: Dict[int, List[FrozenSet[str]]] = {}
    for s in sigma.symbols:
        by_index.setdefault(s.index, []).append(s.neighborhood)

    vertices = list(h.vertices)
    edges = set(h.edges)
    paths: Dict[str, Tuple[str, ...]] = {}
    for i, u in enumerate(h.urpaths, start=1):
        xs = tuple(internal_name(u.name, k) for k in range(1, len(by_index[i]) + 1))
        paths[u.name] = xs
        vertices.extend(xs)
        for a, b in zip(xs, xs[1:]):
            edges.add(pair(a, b))
        for x, nb in zip(xs, by_index[i]):
            edges.update(pair(x, v) for v in nb)
    graph = Pathograph(vertices=tuple(vertices), edges=frozenset(edges))
    return Realization(graph, h, paths)


def strings_of(realizations: Iterable[Realization]) -> List[str]:
    return [format_determination_string(determination_string(r), r.source) for r in realizations]
