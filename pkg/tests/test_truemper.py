import networkx as nx
import pytest

from containment.truemper import (
    TRUEMPER_KINDS,
    find_configuration,
    find_prism,
    find_pyramid,
    find_theta,
    find_wheel,
    truemper,
    truemper_union,
)
from helpers import cycle
from oracles import find_configuration_by_definition, is_configuration, small_graphs
from pathograph.inclusion import contains
from pathograph.model import Pathograph
from realization.realization import enumerate_realizations


def pyramid_graph() -> Pathograph:
    return Pathograph.graph(
        ["a", "b1", "b2", "b3", "p1", "p2"],
        [("b1", "b2"), ("b1", "b3"), ("b2", "b3"), ("a", "p1"), ("p1", "b1"), ("a", "p2"), ("p2", "b2"), ("a", "b3")],
    )


@pytest.mark.parametrize("kind, size", [("theta", 1), ("pyramid", 2), ("prism", 4), ("wheel", 2)])
def test_set_sizes(kind, size):
    members = truemper(kind)
    assert len(members) == size
    assert all(m.validate() == [] for m in members)


def test_unknown_kind():
    with pytest.raises(ValueError):
        truemper("star")


def test_union_keeps_order():
    assert len(truemper_union(["theta", "wheel"])) == 3
    assert len(truemper_union(TRUEMPER_KINDS)) == 9


def test_detectors_on_the_basic_shapes(k23, wheel5):
    assert find_theta(k23) == frozenset(k23.vertices)
    assert find_wheel(wheel5) == frozenset(wheel5.vertices)
    ladder = Pathograph.from_networkx(nx.circular_ladder_graph(3))
    assert find_prism(ladder) == frozenset(ladder.vertices)
    assert find_pyramid(pyramid_graph()) == frozenset(pyramid_graph().vertices)


@pytest.mark.parametrize("kind", TRUEMPER_KINDS)
def test_holes_are_truemper_free(kind):
    assert find_configuration(cycle(6), kind) is None


def test_pyramid_with_two_short_legs_is_not_a_pyramid():
    g = Pathograph.graph(
        ["a", "b1", "b2", "b3", "p1"],
        [("b1", "b2"), ("b1", "b3"), ("b2", "b3"), ("a", "p1"), ("p1", "b1"), ("a", "b2"), ("a", "b3")],
    )
    assert find_pyramid(g) is None


@pytest.mark.parametrize("kind", TRUEMPER_KINDS)
def test_shortest_realizations_contain_their_configuration(kind):
    for member in truemper(kind):
        for r in enumerate_realizations(member, 1):
            found = find_configuration(r.graph, kind)
            assert found is not None
            assert is_configuration(r.graph.to_networkx().subgraph(found), kind)


@pytest.mark.parametrize("kind", TRUEMPER_KINDS)
def test_set_agrees_with_definition_on_six_vertices(kind):
    members = truemper(kind)
    for nxg in small_graphs(6):
        g = Pathograph.from_networkx(nxg)
        by_set = any(contains(g, m) for m in members)
        assert by_set == (find_configuration(g, kind) is not None), sorted(nxg.edges)


@pytest.mark.slow
@pytest.mark.parametrize("kind", TRUEMPER_KINDS)
def test_set_and_detector_agree_with_definition_on_seven_vertices(kind):
    members = truemper(kind)
    for nxg in small_graphs(7):
        g = Pathograph.from_networkx(nxg)
        expected = find_configuration_by_definition(g.to_networkx(), kind) is not None
        assert (find_configuration(g, kind) is not None) == expected
        assert any(contains(g, m) for m in members) == expected
