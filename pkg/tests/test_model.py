import networkx as nx
import pytest
from hypothesis import given, settings

from core.utils import UnknownElementError, ValidationError
from helpers import cycle, pathographs, square_with_urpath
from pathograph.model import Pathograph, is_connected, pair


def test_square_is_valid_and_counts(square_h):
    assert square_h.validate() == []
    assert square_h.describe() == "N=4 K=1 |E|=4 |S|=2 |R|=0"
    assert square_h.index_of("u") == 1
    assert square_h.spokes_of("u") == {"b", "d"}
    assert square_h.neighbors("a") == {"b", "d"}
    assert square_h.urpaths_at("c") == ["u"]


def test_without_urpaths_is_the_square(square_h, c4):
    h = square_h.without_urpaths()
    assert h.is_graph
    assert nx.is_isomorphic(h.to_networkx(), c4.to_networkx())


@pytest.mark.parametrize(
    "p, fragment",
    [
        (Pathograph.build(["a", "b"], [("a", "b")], [("u", "a", "b")]), "urpath endpoints adjacent: 'u'"),
        (Pathograph.build(["a"], urpaths=[("u", "a", "a")]), "urpath endpoints equal: 'u'"),
        (Pathograph.build(["a", "b"], urpaths=[("u", "a", "b")], spokes=[("a", "u")]), "endpoint spoke: (a, u)"),
        (Pathograph.build(["a"], [("a", "a")]), "loop edge at 'a'"),
        (Pathograph.build(["a"], [("a", "z")]), "unknown vertex 'z'"),
        (Pathograph.build(["a", "b"], urpaths=[("u", "a", "b"), ("u", "b", "a")]), "duplicate urpath id"),
        (Pathograph.build(["a", "b"], urpaths=[("u", "a", "b")], rungs=[("u", "u")]), "self rung on 'u'"),
        (Pathograph.build(["a", "b"], urpaths=[("u", "a", "b")], spokes=[("a", "w")]), "unknown urpath 'w'"),
    ],
)
def test_validate_names_the_offending_element(p, fragment):
    violations = p.validate()
    assert any(fragment in v for v in violations), violations
    with pytest.raises(ValidationError) as exc:
        p.ensure_valid()
    assert exc.value.violations == violations


def test_deleting_an_endpoint_removes_its_urpath(square_h):
    q = square_h.subpathograph(del_vertices=["a"])
    assert q.K == 0
    assert q.spokes == frozenset()
    assert q.vertices == ("b", "c", "d")
    assert q.validate() == []


def test_deleting_an_urpath_keeps_endpoints(square_h):
    q = square_h.subpathograph(del_urpaths=["u"])
    assert q.vertices == square_h.vertices
    assert q.is_graph


def test_subpathograph_rejects_unknown_ids(square_h):
    with pytest.raises(UnknownElementError):
        square_h.subpathograph(del_vertices=["zz"])
    with pytest.raises(UnknownElementError):
        square_h.subpathograph(del_urpaths=["zz"])


def test_index_of_unknown_urpath(square_h):
    with pytest.raises(UnknownElementError):
        square_h.index_of("w")


def test_relabel_and_equality(square_h):
    q = square_h.relabel({"a": "x"}, {"u": "w"})
    assert q.urpath("w").ends == ("x", "c")
    assert q.has_spoke("b", "w")
    assert q.relabel({"x": "a"}, {"w": "u"}) == square_h


def test_with_elements_appends_urpaths_last():
    p = Pathograph.build(["a", "b", "c"], urpaths=[("u1", "a", "b")])
    q = p.with_elements(urpaths=[("u2", "a", "c")], rungs=[("u1", "u2")])
    assert q.urpath_names == ("u1", "u2")
    assert q.has_rung("u2", "u1")


def test_from_networkx_stringifies_nodes():
    p = Pathograph.from_networkx(nx.path_graph(3))
    assert p.vertices == ("0", "1", "2")
    assert p.has_edge("1", "0")


def test_incidence_graph_kinds(square_h):
    g = square_h.incidence_graph()
    kinds = sorted(d["kind"] for _, _, d in g.edges(data=True))
    assert kinds.count("end") == 2
    assert kinds.count("spoke") == 2
    assert kinds.count("edge") == 4


def test_is_connected():
    assert not is_connected(Pathograph.build([]))
    assert is_connected(square_with_urpath())
    assert not is_connected(Pathograph.graph(["a", "b"]))
    # an urpath joins its endpoints
    assert is_connected(Pathograph.build(["a", "b"], urpaths=[("u", "a", "b")]))
    assert is_connected(cycle(5))


def test_pair_is_unordered():
    assert pair("a", "b") == pair("b", "a")


@settings(max_examples=60, deadline=None)
@given(pathographs(with_rungs=True))
def test_generated_pathographs_are_valid(p):
    assert p.validate() == []


@settings(max_examples=60, deadline=None)
@given(pathographs())
def test_subpathographs_stay_valid(p):
    for v in p.vertices:
        assert p.subpathograph(del_vertices=[v]).validate() == []
    for u in p.urpath_names:
        assert p.subpathograph(del_urpaths=[u]).validate() == []
