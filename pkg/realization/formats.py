"""
Realization Text Format (PGR)

A PGF graph section (vertices and edges) plus one `path:` line per urpath
listing the urpath id followed by the whole path from its left endpoint to
its right endpoint:

    path: u1 a x1 x2 c
"""

import logging
from pathlib import Path
from typing import Dict, List, Tuple

from core.utils import FormatParseError
from pathograph.formats import PathographBuilder, iter_directives, split_blocks
from pathograph.model import Pathograph
from realization.realization import Realization, make_realization

logger = logging.getLogger(__name__)


def parse_pgr(text: str, h: Pathograph) -> Realization:
    """
    Parse a labeled realization of h.

    Raises:
        FormatParseError: On malformed text or paths whose ends do not match h
        NotARealizationError: If the parsed graph does not realize h
    """
    blocks = split_blocks(text)
    if len(blocks) != 1:
        raise FormatParseError(f"expected one realization, found {len(blocks)} blocks")
    builder = PathographBuilder()
    paths: Dict[str, Tuple[str, ...]] = {}
    for number, directive, tokens in iter_directives(blocks[0]):
        if directive in ("urpath", "spoke", "rung"):
            raise FormatParseError(f"'{directive}' is not allowed in a realization graph", number)
        if builder.feed(number, directive, tokens):
            continue
        if directive != "path":
            raise FormatParseError(f"unknown directive '{directive}'", number)
        if len(tokens) < 3:
            raise FormatParseError("'path' needs an urpath id and at least two vertices", number)
        name, seq = tokens[0], tokens[1:]
        if name not in h.urpath_names:
            raise FormatParseError(f"unknown urpath '{name}'", number)
        if name in paths:
            raise FormatParseError(f"duplicate path for '{name}'", number)
        left, right = h.endpoints(name)
        if (seq[0], seq[-1]) == (right, left):
            seq = list(reversed(seq))
        elif (seq[0], seq[-1]) != (left, right):
            raise FormatParseError(f"path of '{name}' must run from {left} to {right}", number)
        paths[name] = tuple(seq[1:-1])
    graph = builder.result()
    return make_realization(graph, h, paths)


def format_pgr(r: Realization) -> str:
    """Render a realization as PGR text."""
    g = r.graph
    lines: List[str] = ["vertices: " + " ".join(g.vertices)]
    for a, b in g.sorted_edges():
        lines.append(f"edge: {a} {b}")
    for u in r.source.urpaths:
        seq = [u.left, *r.internal_paths[u.name], u.right]
        lines.append(f"path: {u.name} " + " ".join(seq))
    return "\n".join(lines) + "\n"


def load_pgr_file(path: str, h: Pathograph) -> Realization:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatParseError(f"cannot read '{path}': {e}")
    return parse_pgr(text, h)
