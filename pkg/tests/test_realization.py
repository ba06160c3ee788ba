import pytest
from hypothesis import given, settings

import realization.realization as realization_module
from core.utils import LimitExceededError, NotARealizationError
from helpers import complete, rungless_pathographs, two_urpaths_with_rung
from pathograph.isomorphism import is_isomorphic
from pathograph.model import Pathograph, pair
from realization.realization import (
    count_realizations,
    decide_bounded,
    enumerate_realizations,
    first_contained,
    is_f_free,
    is_minimal,
    is_realization,
    length_tuples,
    make_realization,
    realization_violations,
)
from realization.strings import determination_string, format_determination_string, parse_determination_string, realization_from_string


@pytest.mark.parametrize("bound, expected", [(1, 1), (2, 10)])
def test_square_counts(square_h, bound, expected):
    assert count_realizations(square_h, bound) == expected


def test_theta_single_realization_is_k23(theta, k23):
    (th,) = theta
    (r,) = list(enumerate_realizations(th, 1))
    assert is_isomorphic(r.graph, k23)


def test_shortest_square_realization_is_a_wheel(square_h, wheels):
    (r,) = list(enumerate_realizations(square_h, 1))
    assert r.graph.neighbors("u#1") == {"a", "b", "c", "d"}
    assert format_determination_string(determination_string(r), square_h) == "1:{a,b,c,d}"
    assert not is_f_free(r.graph, wheels)
    assert first_contained(r.graph, wheels) is not None


def test_length_tuples_order():
    assert length_tuples(2, 2) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert length_tuples(0, 3) == [()]


def test_enumeration_order_first_lengths(square_h):
    lengths = [r.lengths() for r in enumerate_realizations(square_h, 2)]
    assert lengths == [(1,)] + [(2,)] * 9


def test_every_enumerated_graph_is_a_realization(square_h):
    for r in enumerate_realizations(square_h, 2):
        assert realization_violations(r.graph, square_h, r.internal_paths) == []


def test_rungs_are_realized_by_cross_edges():
    h = two_urpaths_with_rung()
    rs = list(enumerate_realizations(h, 1))
    assert len(rs) == 1
    assert rs[0].graph.has_edge("u1#1", "u2#1")


def test_bad_bound_and_guard(square_h, monkeypatch):
    with pytest.raises(ValueError):
        list(enumerate_realizations(square_h, 0))
    monkeypatch.setattr(realization_module, "get_limit", lambda name: 3)
    with pytest.raises(LimitExceededError):
        count_realizations(square_h, 2)


def test_violation_messages(square_h):
    r = realization_from_string(square_h, parse_determination_string("1:{a,b} 1:{c,d}"))
    g = r.graph

    no_spoke = Pathograph(vertices=g.vertices, edges=g.edges - {pair("d", "u#2")})
    assert "spoke (d, u) unrealized" in realization_violations(no_spoke, square_h, r.internal_paths)

    chord = Pathograph(vertices=g.vertices, edges=g.edges | {pair("a", "u#2")})
    assert "chord a-u#2 on path of u" in realization_violations(chord, square_h, r.internal_paths)

    broken = Pathograph(vertices=g.vertices, edges=g.edges - {pair("u#1", "u#2")})
    assert "missing path edge u#1-u#2 on path of u" in realization_violations(broken, square_h, r.internal_paths)

    assert "urpath u has no internal vertex" in realization_violations(g, square_h, {"u": ()})


def test_unexpected_spoke():
    h = Pathograph.build(["a", "b", "c"], urpaths=[("u", "a", "c")])
    g = Pathograph.graph(["a", "b", "c", "x"], [("a", "x"), ("x", "c"), ("b", "x")])
    assert "b sees the path of u without a spoke" in realization_violations(g, h, {"u": ("x",)})


def test_rung_violation_message():
    h = two_urpaths_with_rung()
    g = Pathograph.graph(["a", "b", "c", "d", "x", "y"], [("a", "x"), ("x", "b"), ("c", "y"), ("y", "d")])
    assert "rung u1-u2 unrealized" in realization_violations(g, h, {"u1": ("x",), "u2": ("y",)})


def test_missing_pathograph_vertex_is_an_error(square_h):
    g = Pathograph.graph(["a", "b", "c"])
    with pytest.raises(NotARealizationError):
        realization_violations(g, square_h, {"u": ()})
    with pytest.raises(NotARealizationError):
        make_realization(Pathograph.graph(["a", "b", "c", "d"]), square_h, {"u": ()})


def test_minimality(square_h):
    loose = realization_from_string(square_h, parse_determination_string("1:{a,b} 1:{b,c,d}"))
    tight = realization_from_string(square_h, parse_determination_string("1:{a,b} 1:{c,d}"))
    assert not is_minimal(loose)
    assert is_minimal(tight)


def test_bounded_oracle_yes(square_h, theta_wheel):
    decision = decide_bounded(square_h, theta_wheel, 2)
    assert decision.answer == "yes"
    assert decision.examined == 3
    assert format_determination_string(determination_string(decision.realization), square_h) == "1:{a,b} 1:{c,d}"
    assert is_f_free(decision.realization.graph, theta_wheel)


def test_bounded_oracle_unknown(square_h, theta_prism_wheel):
    decision = decide_bounded(square_h, theta_prism_wheel, 3)
    assert decision.answer == "unknown"
    assert decision.realization is None
    assert decision.examined == count_realizations(square_h, 3)


def test_k3_free_realization_exists(square_h):
    sigma = parse_determination_string("1:{a} 1:{b} 1:{d} 1:{c}")
    r = realization_from_string(square_h, sigma)
    assert is_f_free(r.graph, [complete(3)])
    bad = realization_from_string(square_h, parse_determination_string("1:{a,b} 1:{c,d}"))
    assert not is_f_free(bad.graph, [complete(3)])


@settings(max_examples=40, deadline=None)
@given(rungless_pathographs(max_vertices=4, max_urpaths=2))
def test_enumerated_realizations_check_out(h):
    for r in enumerate_realizations(h, 2):
        assert is_realization(r.graph, h, r.internal_paths)
