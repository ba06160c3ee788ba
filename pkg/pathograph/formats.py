"""
Pathograph Text Format (PGF)

Line-based reader and writer. Each line is `directive: tokens`:

    vertices: a b c d
    edge: a b
    urpath: u1 a c        (name, left, right; listing order is the index)
    spoke: b u1
    rung: u1 u2

A '#' that starts a line or follows whitespace begins a comment, so ids such
as `u#1` stay intact. Several pathographs in one file are separated by lines
consisting of `---`.
"""

import logging
import re
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple

from core.utils import FormatParseError
from pathograph.model import Pathograph, Urpath, pair

logger = logging.getLogger(__name__)

BLOCK_SEPARATOR = "---"
_ID_PATTERN = re.compile(r"^[^\s:{},()|*]+$")
_COMMENT_PATTERN = re.compile(r"(^|\s)#.*$")


def strip_comment(line: str) -> str:
    return _COMMENT_PATTERN.sub("", line).strip()


def split_blocks(text: str) -> List[List[Tuple[int, str]]]:
    """Split text into blocks of (line number, raw line) separated by '---' lines."""
    blocks: List[List[Tuple[int, str]]] = [[]]
    for number, raw in enumerate(text.splitlines(), start=1):
        if raw.strip() == BLOCK_SEPARATOR:
            blocks.append([])
            continue
        blocks[-1].append((number, raw))
    return blocks


def iter_directives(lines: Iterable[Tuple[int, str]]) -> Iterator[Tuple[int, str, List[str]]]:
    """Yield (line number, directive, tokens) for every non-blank line."""
    for number, raw in lines:
        line = strip_comment(raw)
        if not line:
            continue
        if ":" not in line:
            raise FormatParseError(f"expected 'directive: ...', got '{line}'", number)
        directive, _, rest = line.partition(":")
        tokens = rest.split()
        for token in tokens:
            if not _ID_PATTERN.match(token):
                raise FormatParseError(f"invalid id '{token}'", number)
        yield number, directive.strip().lower(), tokens


class PathographBuilder:
    """Accumulates PGF directives into a Pathograph, checking references as it goes."""

    ARITY = {"edge": 2, "urpath": 3, "spoke": 2, "rung": 2}

    def __init__(self):
        self.vertices: Dict[str, None] = {}
        self.urpaths: List[Urpath] = []
        self.edges = set()
        self.spokes = set()
        self.rungs = set()

    def _need_vertex(self, v: str, number: int) -> None:
        if v not in self.vertices:
            raise FormatParseError(f"unknown vertex '{v}'", number)

    def _need_urpath(self, u: str, number: int) -> None:
        if u not in {x.name for x in self.urpaths}:
            raise FormatParseError(f"unknown urpath '{u}'", number)

    def feed(self, number: int, directive: str, tokens: List[str]) -> bool:
        """Apply one directive; returns False for directives this builder does not know."""
        if directive == "vertices":
            for v in tokens:
                self.vertices[v] = None
            return True
        if directive not in self.ARITY:
            return False
        if len(tokens) != self.ARITY[directive]:
            raise FormatParseError(f"'{directive}' takes {self.ARITY[directive]} ids, got {len(tokens)}", number)
        if directive == "edge":
            a, b = tokens
            self._need_vertex(a, number)
            self._need_vertex(b, number)
            self.edges.add(pair(a, b))
        elif directive == "urpath":
            name, left, right = tokens
            self._need_vertex(left, number)
            self._need_vertex(right, number)
            if name in {x.name for x in self.urpaths}:
                raise FormatParseError(f"duplicate urpath '{name}'", number)
            self.urpaths.append(Urpath(name, left, right))
        elif directive == "spoke":
            v, u = tokens
            self._need_vertex(v, number)
            self._need_urpath(u, number)
            self.spokes.add((v, u))
        else:
            a, b = tokens
            self._need_urpath(a, number)
            self._need_urpath(b, number)
            self.rungs.add(pair(a, b))
        return True

    def result(self) -> Pathograph:
        return Pathograph(
            vertices=tuple(self.vertices),
            urpaths=tuple(self.urpaths),
            edges=frozenset(self.edges),
            spokes=frozenset(self.spokes),
            rungs=frozenset(self.rungs),
        )


def _parse_block(lines: List[Tuple[int, str]], extra: Optional[Callable[[int, str, List[str]], bool]] = None) -> Pathograph:
    builder = PathographBuilder()
    for number, directive, tokens in iter_directives(lines):
        if builder.feed(number, directive, tokens):
            continue
        if extra is not None and extra(number, directive, tokens):
            continue
        raise FormatParseError(f"unknown directive '{directive}'", number)
    return builder.result()


def parse_pgf(text: str) -> Pathograph:
    """
    Parse a single PGF pathograph.

    Raises:
        FormatParseError: On malformed lines, unknown ids or more than one block
    """
    blocks = split_blocks(text)
    if len(blocks) != 1:
        raise FormatParseError(f"expected one pathograph, found {len(blocks)} blocks")
    return _parse_block(blocks[0])


def parse_pgf_many(text: str) -> List[Pathograph]:
    """Parse a '---'-separated list of pathographs; blank blocks are skipped."""
    result = []
    for block in split_blocks(text):
        if not any(strip_comment(raw) for _, raw in block):
            continue
        result.append(_parse_block(block))
    logger.debug(f"Parsed {len(result)} pathographs")
    return result


def format_pgf(p: Pathograph, comments: Iterable[str] = ()) -> str:
    """Render a pathograph as PGF text with deterministic element order."""
    lines = [f"# {c}" for c in comments]
    lines.append("vertices: " + " ".join(p.vertices) if p.vertices else "vertices:")
    for a, b in p.sorted_edges():
        lines.append(f"edge: {a} {b}")
    for u in p.urpaths:
        lines.append(f"urpath: {u.name} {u.left} {u.right}")
    for v, u in p.sorted_spokes():
        lines.append(f"spoke: {v} {u}")
    for a, b in p.sorted_rungs():
        lines.append(f"rung: {a} {b}")
    return "\n".join(lines) + "\n"


def format_pgf_many(pathographs: Iterable[Pathograph]) -> str:
    return f"{BLOCK_SEPARATOR}\n".join(format_pgf(p) for p in pathographs)


def load_pgf_file(path: str) -> List[Pathograph]:
    """Read every pathograph from a PGF file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatParseError(f"cannot read '{path}': {e}")
    return parse_pgf_many(text)
