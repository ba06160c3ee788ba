import pytest

from core.utils import TilingError
from pathograph.formats import parse_pgf_many
from reductions.stages import (
    BipartiteFamily,
    build_stage1,
    build_stage2,
    build_stage3,
    format_stage,
    selector_of,
    stage2_extra,
    stage_counts,
    stage_number,
    translate_colored,
    uncolor,
)
from reductions.tiles import WangTileSet, uniform_patch

UNIFORM = WangTileSet.of(("u", "g", "g", "g", "g"))
PAIR = WangTileSet.of(("s", "g", "g", "g", "g"), ("t", "m", "g", "m", "m"))


@pytest.fixture
def stage1():
    return build_stage1(UNIFORM, uniform_patch("u"))


@pytest.fixture
def stage2(stage1):
    return build_stage2(stage1)


def test_stage1_instance(stage1):
    assert stage1.counts() == (6, 2, 13, 6, 1)
    assert stage1.h.validate() == []
    assert stage1.h.underlying().validate() == []
    assert stage1.h.arc("x1", "y3").color == "u"
    assert stage1.h.arc("y1", "x1") is None
    assert stage1.kinds() == {"1a": 1, "1b": 1, "1c": 1, "1d": 3}


def test_stage1_mismatch_members():
    kinds = build_stage1(PAIR, uniform_patch("s")).kinds()
    assert kinds["1d"] == 4
    assert kinds["2"] == 2
    assert kinds["3"] == 2


def test_stage1_patch_errors():
    patch = uniform_patch("u")
    del patch[(2, 2)]
    with pytest.raises(TilingError, match="lacks cells"):
        build_stage1(UNIFORM, patch)
    with pytest.raises(TilingError, match="unknown tile"):
        build_stage1(UNIFORM, uniform_patch("v"))


def test_stage2_pads_and_translates(stage2):
    assert stage2.K == 3
    assert stage2.tiles.names[0] == "u"
    assert stage_counts(stage2) == (18, 2, 88, 18, 1)
    assert stage2.h.validate(3) == []
    kinds = stage2.kinds()
    assert kinds["1"] == 509
    for kind in ("4", "5", "6", "7"):
        assert kinds[kind] == 3
    assert kinds["8"] == 6
    assert len(stage2.forbidden) == 34
    assert stage2.total == 509 + 34


def test_translated_edge_misses_exactly_the_tile_pair(stage2):
    h = stage2.h.base
    missing = [(a, b) for a in ("x1_1", "x1_2", "x1_3") for b in ("y2_1", "y2_2", "y2_3") if not h.has_edge(a, b)]
    assert missing == [("x1_1", "y2_1")]
    assert stage2.h.colors["y2_3"] == -3


def test_bipartite_family():
    family = BipartiteFamily(2)
    members = list(family)
    assert len(members) == family.count == 14
    assert not family.is_member(family.excluded(1))
    assert family.is_member([(1, 1)])
    assert not family.is_member([(3, 1)])
    assert BipartiteFamily(1).count == 1
    assert len(list(BipartiteFamily(1))) == 1
    lazy = family.lazy()
    assert lazy.count == 14
    assert sum(1 for _ in lazy) == 14


def test_stage2_extra_residues():
    labels = {m.label for m in stage2_extra(4)}
    assert "type 4 (1, 3)" in labels
    assert "type 4 (1, 2)" not in labels
    assert "type 5 (-2, -4)" in labels
    assert "type 8 (1, -2)" in labels
    assert "type 8 (1, -1)" not in labels


def test_selector_of():
    assert selector_of(3, 9) == "z3"
    assert selector_of(-3, 9) == "z12"


def test_uncolor_attaches_selectors(stage2):
    g = uncolor(stage2.h, 3)
    assert g.has_edge("x1_2", "z2")
    assert g.has_edge("y1_2", "z5")
    assert g.has_edge("z4", "c4") and not g.has_edge("z4", "c5")
    assert ("z1", "uy") not in g.spokes
    assert ("z4", "uy") in g.spokes
    assert g.validate() == []


@pytest.mark.slow
def test_stage3_pads_to_nine_tiles(stage2):
    stage3 = build_stage3(stage2)
    assert stage3.K == 9
    n, k, _, spokes, rungs = stage_counts(stage3)
    assert (n, k, spokes, rungs) == (99, 2, 72, 1)
    kinds = stage3.kinds()
    assert kinds["9"] == 153
    assert kinds["10"] == 18
    assert kinds["1"] == 2 ** 81 - 9
    assert stage_number(stage3) == 3


def test_format_stage_lists_the_members(stage1, stage2):
    blocks = parse_pgf_many(format_stage(stage1))
    assert len(blocks) == 1 + 6
    text = format_stage(stage2, members=False)
    assert "# type 1: 509 members generated on demand" in text
    assert "# color: x1_1 1" in text
    assert len(parse_pgf_many(text)) == 1
    assert stage_number(stage2) == 2


def test_translate_colored_of_a_member(stage1):
    member = next(m for m in stage1.forbidden if m.kind == "1a")
    colored = translate_colored(member.graph, stage1.tiles)
    assert colored.base.N == 2
    assert colored.base.has_edge("r_1", "b_1")
