import pytest

import reductions.witness as witness_module
from core.utils import TilingError
from reductions.stages import build_stage1
from reductions.tiles import PeriodicTiling, WangTileSet, search_periodic_tiling, uniform_patch
from reductions.witness import (
    directed_realization_violations,
    first_forbidden,
    stage1_witness,
    tiling_search_stage1,
    tiling_to_realization,
)

UNIFORM = WangTileSet.of(("u", "g", "g", "g", "g"))
MISMATCHED = WangTileSet.of(("s", "g", "r", "g", "b"), ("t", "g", "y", "g", "b"))


@pytest.fixture
def unit_tiling():
    return search_periodic_tiling(UNIFORM, 1, 1)


def test_stage1_witness_is_verified(unit_tiling):
    report = tiling_to_realization(1, unit_tiling)
    assert report.ok
    assert report.periods == (4, 4)
    assert report.vertex_count == 8
    assert report.freeness == "verified"
    assert report.internal_paths == {"ux": ("x4",), "uy": ("y4",)}
    assert report.lines()[0] == "stage 1 witness, periods 4x4, 8 vertices"


def test_stage2_witness(unit_tiling):
    report = tiling_to_realization(2, unit_tiling, uniform_patch("u"))
    assert report.ok
    assert report.vertex_count == 24
    assert report.freeness == "skipped"
    assert "  forbidden-freeness: skipped (family too large to check)" in report.lines()
    assert report.checks["gadgets"]


@pytest.mark.slow
def test_stage3_witness(unit_tiling):
    report = tiling_to_realization(3, unit_tiling)
    assert report.ok
    assert report.vertex_count == 117
    assert report.checks["clique and selectors"]


def test_witness_rejects_bad_input(unit_tiling):
    with pytest.raises(TilingError, match="unknown stage"):
        tiling_to_realization(4, unit_tiling)
    broken = PeriodicTiling(MISMATCHED, (1, 1), {(0, 0): 0})
    with pytest.raises(TilingError, match="invalid tiling"):
        tiling_to_realization(1, broken)
    with pytest.raises(TilingError, match="extend"):
        tiling_to_realization(1, unit_tiling, {(1, 1): "v"})


def test_short_periods_have_no_direct_witness(unit_tiling):
    with pytest.raises(TilingError):
        stage1_witness(unit_tiling)


def test_witness_graph_shape(unit_tiling):
    g, paths = stage1_witness(unit_tiling.lifted())
    assert g.counts() == (8, 0, 24, 0, 0)
    assert g.arc("x4", "x1").color == "red"
    assert g.arc("x2", "y3").color == "u"
    stage1 = build_stage1(UNIFORM, uniform_patch("u"))
    assert directed_realization_violations(g, stage1.h, paths) == []
    assert first_forbidden(g, stage1.forbidden) is None


def test_backwards_cross_edge_is_forbidden(unit_tiling):
    g, _ = stage1_witness(unit_tiling.lifted())
    stage1 = build_stage1(UNIFORM, uniform_patch("u"))
    reversed_arcs = tuple(a._replace(tail=a.head, head=a.tail) if (a.tail, a.head) == ("x1", "y1") else a for a in g.arcs)
    flipped = type(g)(vertices=g.vertices, arcs=reversed_arcs)
    assert first_forbidden(flipped, stage1.forbidden).kind == "1d"


def test_cycle_search_finds_the_uniform_witness():
    report = tiling_search_stage1(build_stage1(UNIFORM, uniform_patch("u")), 4)
    assert report.ok
    assert report.periods == (4, 4)


def test_cycle_search_fails_on_mismatched_tiles():
    assert tiling_search_stage1(build_stage1(MISMATCHED, uniform_patch("s")), 4) is None


def test_cycle_search_bound_defaults_to_the_limits_file(monkeypatch):
    asked = []
    monkeypatch.setattr(witness_module, "get_default", lambda name: asked.append(name) or 4)
    assert tiling_search_stage1(build_stage1(MISMATCHED, uniform_patch("s"))) is None
    assert asked == ["stage1_max_cycle"]
