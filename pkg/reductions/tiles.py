"""
Wang Tiles and Periodic Tilings

A Wang tile is a unit square with coloured sides (north, east, south, west).
A periodic tiling with periods (a, b) assigns a tile to every cell (i, j) of
the a-by-b torus so that east meets west and north meets south across every
shared side, wrapping around at the borders.

Tile file format:

    color: g m
    tile: s m g g m        (name, then N E S W)
    tile: t g m g g
    patch: 3 3             (optional, followed by 3 rows of tile names)
    s t s
    t s t
    s s s

Patch rows are listed j = 1..3, each row giving the tiles for i = 1..3.
"""

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

from core.limits_loader import get_limit
from core.utils import FormatParseError, LimitExceededError, TilingError
from pathograph.formats import strip_comment

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]
Patch = Dict[Cell, str]

PATCH_SIZE = 3


class WangTile(NamedTuple):
    name: str
    north: str
    east: str
    south: str
    west: str

    @property
    def sides(self) -> Tuple[str, str, str, str]:
        return (self.north, self.east, self.south, self.west)

    def __str__(self) -> str:
        return f"{self.name}({' '.join(self.sides)})"


@dataclass(frozen=True)
class WangTileSet:
    """Ordered tiles over a colour universe; a tile's position is its index."""

    tiles: Tuple[WangTile, ...]
    colors: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.colors:
            object.__setattr__(self, "colors", tuple(dict.fromkeys(c for t in self.tiles for c in t.sides)))

    @classmethod
    def of(cls, *tiles: Tuple[str, str, str, str, str]) -> "WangTileSet":
        return cls(tuple(WangTile(*t) for t in tiles))

    def __len__(self) -> int:
        return len(self.tiles)

    def __iter__(self) -> Iterator[WangTile]:
        return iter(self.tiles)

    def index(self, name: str) -> int:
        for i, t in enumerate(self.tiles):
            if t.name == name:
                return i
        raise TilingError(f"unknown tile '{name}'")

    def tile(self, name: str) -> WangTile:
        return self.tiles[self.index(name)]

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(t.name for t in self.tiles)

    def validate(self) -> List[str]:
        out = []
        names = [t.name for t in self.tiles]
        for name in sorted({n for n in names if names.count(n) > 1}):
            out.append(f"tile name '{name}' used more than once")
        sides = [t.sides for t in self.tiles]
        for i, s in enumerate(sides):
            if s in sides[:i]:
                out.append(f"tile {self.tiles[i].name} repeats the sides of an earlier tile")
        palette = set(self.colors)
        for t in self.tiles:
            for c in t.sides:
                if c not in palette:
                    out.append(f"tile {t.name} uses colour '{c}' outside the colour set")
        return out

    def ensure_valid(self) -> "WangTileSet":
        problems = self.validate()
        if problems:
            raise TilingError("; ".join(problems))
        return self


def matches_east(left: WangTile, right: WangTile) -> bool:
    return left.east == right.west


def matches_north(below: WangTile, above: WangTile) -> bool:
    return below.north == above.south


@dataclass(frozen=True)
class PeriodicTiling:
    """Tile indices on the a-by-b torus; cells are 0-based (i mod a, j mod b)."""

    tiles: WangTileSet
    periods: Tuple[int, int]
    assignment: Dict[Cell, int] = field(hash=False)

    @property
    def a(self) -> int:
        return self.periods[0]

    @property
    def b(self) -> int:
        return self.periods[1]

    def index_at(self, i: int, j: int) -> int:
        return self.assignment[(i % self.a, j % self.b)]

    def tile_at(self, i: int, j: int) -> WangTile:
        return self.tiles.tiles[self.index_at(i, j)]

    def violations(self) -> List[str]:
        out = []
        for i, j in itertools.product(range(self.a), range(self.b)):
            if (i, j) not in self.assignment:
                out.append(f"cell ({i}, {j}) has no tile")
        if out:
            return out
        for i, j in itertools.product(range(self.a), range(self.b)):
            here = self.tile_at(i, j)
            if not matches_east(here, self.tile_at(i + 1, j)):
                out.append(f"east side of ({i}, {j}) does not match")
            if not matches_north(here, self.tile_at(i, j + 1)):
                out.append(f"north side of ({i}, {j}) does not match")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def extends(self, patch: Optional[Patch]) -> bool:
        """True when cell (i, j) for i, j in 1..3 carries the patch tile."""
        if not patch:
            return True
        return all(self.tile_at(i - 1, j - 1).name == name for (i, j), name in patch.items())

    def lifted(self, minimum: int = 4) -> "PeriodicTiling":
        """The same tiling with every period below `minimum` multiplied by `minimum`."""
        a = self.a * minimum if self.a < minimum else self.a
        b = self.b * minimum if self.b < minimum else self.b
        if (a, b) == self.periods:
            return self
        assignment = {(i, j): self.index_at(i, j) for i in range(a) for j in range(b)}
        return PeriodicTiling(self.tiles, (a, b), assignment)

    def render(self) -> str:
        """Rows from the top (j = b-1) down, tile names separated by spaces."""
        rows = []
        for j in reversed(range(self.b)):
            rows.append(" ".join(self.tile_at(i, j).name for i in range(self.a)))
        return "\n".join(rows)


def _patch_cells(patch: Optional[Patch], tiles: WangTileSet, a: int, b: int) -> Optional[Dict[Cell, int]]:
    """Patch constraints folded onto the a-by-b torus, or None if two of them collide."""
    fixed: Dict[Cell, int] = {}
    for (i, j), name in (patch or {}).items():
        cell = ((i - 1) % a, (j - 1) % b)
        index = tiles.index(name)
        if fixed.setdefault(cell, index) != index:
            return None
    return fixed


class _TorusSearch:
    """Backtracking over cells in row-major order, checking each side as soon as both tiles are placed."""

    def __init__(self, tiles: WangTileSet, a: int, b: int, fixed: Dict[Cell, int]):
        self.tiles = tiles.tiles
        self.a = a
        self.b = b
        self.fixed = fixed
        self.cells = [(i, j) for j in range(b) for i in range(a)]
        self.grid: Dict[Cell, int] = {}
        self.nodes = 0

    def _fits(self, cell: Cell, index: int) -> bool:
        i, j = cell
        tile = self.tiles[index]
        west = self.grid.get(((i - 1) % self.a, j))
        if west is not None and not matches_east(self.tiles[west], tile):
            return False
        east = self.grid.get(((i + 1) % self.a, j))
        if east is not None and not matches_east(tile, self.tiles[east]):
            return False
        south = self.grid.get((i, (j - 1) % self.b))
        if south is not None and not matches_north(self.tiles[south], tile):
            return False
        north = self.grid.get((i, (j + 1) % self.b))
        if north is not None and not matches_north(tile, self.tiles[north]):
            return False
        return True

    def run(self, k: int = 0) -> bool:
        if k == len(self.cells):
            return True
        cell = self.cells[k]
        choices = [self.fixed[cell]] if cell in self.fixed else range(len(self.tiles))
        for index in choices:
            self.nodes += 1
            # a period-1 side compares the tile with itself
            self.grid[cell] = index
            if self._fits(cell, index) and self.run(k + 1):
                return True
            del self.grid[cell]
        return False


def period_schedule(a_max: int, b_max: int) -> List[Tuple[int, int]]:
    """Period pairs in search order: by area, then by a."""
    return sorted(itertools.product(range(1, a_max + 1), range(1, b_max + 1)), key=lambda p: (p[0] * p[1], p))


def tile_torus(tiles: WangTileSet, a: int, b: int, patch: Optional[Patch] = None) -> Optional[PeriodicTiling]:
    """A tiling with exactly the periods (a, b), or None."""
    fixed = _patch_cells(patch, tiles, a, b)
    if fixed is None or not tiles.tiles:
        return None
    search = _TorusSearch(tiles, a, b, fixed)
    found = search.run()
    logger.debug(f"Torus {a}x{b}: {'tiled' if found else 'no tiling'} after {search.nodes} nodes")
    if not found:
        return None
    return PeriodicTiling(tiles, (a, b), dict(search.grid))


def search_periodic_tiling(
    tiles: WangTileSet, a_max: int, b_max: int, patch: Optional[Patch] = None
) -> Optional[PeriodicTiling]:
    """
    Search every period pair up to (a_max, b_max) for a periodic tiling.

    Args:
        tiles: The tile set
        a_max, b_max: Largest horizontal and vertical periods to try
        patch: Optional tiles for cells (i, j), i, j in 1..3, the tiling must extend

    Returns:
        The first tiling in schedule order, or None when there is none within the bounds

    Raises:
        TilingError: If a bound is below 1 or the patch names an unknown tile
        LimitExceededError: If a bound exceeds the tiling.max_period guard
    """
    if a_max < 1 or b_max < 1:
        raise TilingError(f"period bounds must be at least 1, got ({a_max}, {b_max})")
    limit = get_limit("tiling.max_period")
    if max(a_max, b_max) > limit:
        raise LimitExceededError(f"period bound {max(a_max, b_max)} exceeds tiling.max_period={limit}")
    for name in (patch or {}).values():
        tiles.index(name)

    for a, b in period_schedule(a_max, b_max):
        tiling = tile_torus(tiles, a, b, patch)
        if tiling is not None:
            logger.info(f"Periodic tiling found with periods ({a}, {b})")
            return tiling
    logger.info(f"No periodic tiling with periods up to ({a_max}, {b_max})")
    return None


def pad_tiles(tiles: WangTileSet, target: int) -> WangTileSet:
    """
    Add dummy tiles until there are `target` of them.

    Every dummy side gets a colour of its own, so a dummy tile can be placed
    next to nothing, not even itself.
    """
    if len(tiles) >= target:
        return tiles
    taken = set(tiles.colors) | set(tiles.names)
    extra: List[WangTile] = []
    counter = itertools.count(1)
    while len(tiles) + len(extra) < target:
        k = next(counter)
        name = f"dummy{k}"
        sides = [f"{name}_{side}" for side in "nesw"]
        if name in taken or taken & set(sides):
            continue
        extra.append(WangTile(name, *sides))
    padded = tiles.tiles + tuple(extra)
    colors = tiles.colors + tuple(c for t in extra for c in t.sides)
    logger.debug(f"Padded {len(tiles)} tiles with {len(extra)} dummy tiles")
    return WangTileSet(padded, colors)


def uniform_patch(name: str) -> Patch:
    return {(i, j): name for i in range(1, PATCH_SIZE + 1) for j in range(1, PATCH_SIZE + 1)}


# tile files


def parse_tiles(text: str) -> Tuple[WangTileSet, Optional[Patch]]:
    """
    Parse a tile file into a tile set and an optional 3x3 patch.

    Raises:
        FormatParseError: On malformed lines, unknown colours or tiles, or a short patch
    """
    lines = enumerate(text.splitlines(), start=1)
    colors: List[str] = []
    tiles: List[WangTile] = []
    patch: Optional[Patch] = None
    pending_rows: Optional[int] = None
    patch_line = 0
    for number, raw in lines:
        line = strip_comment(raw)
        if not line:
            continue
        if pending_rows is not None and pending_rows > 0:
            names = line.split()
            if len(names) != PATCH_SIZE:
                raise FormatParseError(f"patch row needs {PATCH_SIZE} tile names, got {len(names)}", number)
            j = PATCH_SIZE - pending_rows + 1
            for i, name in enumerate(names, start=1):
                patch[(i, j)] = name
            pending_rows -= 1
            continue
        if ":" not in line:
            raise FormatParseError(f"expected 'directive: ...', got '{line}'", number)
        directive, _, rest = line.partition(":")
        directive = directive.strip().lower()
        tokens = rest.split()
        if directive == "color":
            colors.extend(tokens)
        elif directive == "tile":
            if len(tokens) != 5:
                raise FormatParseError("tile needs a name and four colours (N E S W)", number)
            tiles.append(WangTile(*tokens))
        elif directive == "patch":
            if tokens != [str(PATCH_SIZE), str(PATCH_SIZE)]:
                raise FormatParseError(f"only '{PATCH_SIZE} {PATCH_SIZE}' patches are supported", number)
            if patch is not None:
                raise FormatParseError("patch given twice", number)
            patch = {}
            pending_rows = PATCH_SIZE
            patch_line = number
        else:
            raise FormatParseError(f"unknown directive '{directive}'", number)
    if pending_rows:
        raise FormatParseError(f"patch is missing {pending_rows} rows", patch_line)

    tileset = WangTileSet(tuple(tiles), tuple(dict.fromkeys(colors)))
    if not colors:
        tileset = WangTileSet(tuple(tiles))
    problems = tileset.validate()
    if problems:
        raise FormatParseError("; ".join(problems))
    for name in (patch or {}).values():
        if name not in tileset.names:
            raise FormatParseError(f"patch names unknown tile '{name}'", patch_line)
    logger.debug(f"Parsed {len(tileset)} tiles over {len(tileset.colors)} colours")
    return tileset, patch


def format_tiles(tiles: WangTileSet, patch: Optional[Patch] = None) -> str:
    lines = ["color: " + " ".join(tiles.colors)]
    for t in tiles:
        lines.append(f"tile: {t.name} {t.north} {t.east} {t.south} {t.west}")
    if patch:
        lines.append(f"patch: {PATCH_SIZE} {PATCH_SIZE}")
        for j in range(1, PATCH_SIZE + 1):
            lines.append(" ".join(patch[(i, j)] for i in range(1, PATCH_SIZE + 1)))
    return "\n".join(lines) + "\n"


def load_tiles_file(path: str) -> Tuple[WangTileSet, Optional[Patch]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatParseError(f"cannot read '{path}': {e}")
    return parse_tiles(text)


def patch_from_tiling(tiling: PeriodicTiling) -> Patch:
    """The 3x3 patch a tiling induces on cells (i, j), i, j in 1..3."""
    return {
        (i, j): tiling.tile_at(i - 1, j - 1).name
        for i in range(1, PATCH_SIZE + 1)
        for j in range(1, PATCH_SIZE + 1)
    }
