import pytest
from hypothesis import given, settings

from core.utils import PreconditionError
from helpers import graphs, pathographs
from oracles import has_induced_subgraph
from pathograph.inclusion import (
    Inclusion,
    compose,
    contains,
    find_inclusion,
    identity_inclusion,
    inclusion_violations,
)
from pathograph.model import Pathograph
from pathograph.paths import PathSub


def _theta_with_one_edge_path() -> Pathograph:
    return Pathograph.build(
        ["v1", "v2", "m"],
        [("v1", "m"), ("m", "v2")],
        [("u2", "v1", "v2"), ("u3", "v1", "v2")],
    )


def test_theta_in_k23_not_in_c5(theta, k23, c5):
    (th,) = theta
    phi = find_inclusion(th, k23)
    assert phi is not None
    assert inclusion_violations(phi) == []
    assert contains(k23, th)
    assert not contains(c5, th)


def test_image_of_is_oriented_from_left_end(theta, k23):
    (th,) = theta
    phi = find_inclusion(th, k23)
    for u in th.urpaths:
        assert phi.image_of(u.name).first == phi.vertex_map[u.left]


def test_identity_inclusion_is_valid(square_h, theta):
    for p in [square_h, *theta]:
        assert inclusion_violations(identity_inclusion(p)) == []


def test_composition_is_an_inclusion(theta, k23):
    (th,) = theta
    x = _theta_with_one_edge_path()
    phi = find_inclusion(th, x)
    psi = find_inclusion(x, k23)
    assert phi is not None and psi is not None
    xi = compose(phi, psi)
    assert xi.source == th and xi.target == k23
    assert inclusion_violations(xi) == []


def test_identity_is_neutral_for_composition(theta, k23):
    (th,) = theta
    phi = find_inclusion(th, k23)
    xi = compose(identity_inclusion(th), phi)
    assert xi.vertex_map == phi.vertex_map
    assert xi.urpath_map == phi.urpath_map


def test_compose_needs_matching_ends(theta, k23):
    (th,) = theta
    phi = find_inclusion(th, k23)
    with pytest.raises(PreconditionError):
        compose(phi, phi)


def test_contains_wants_a_graph_host(square_h, k1):
    with pytest.raises(PreconditionError):
        contains(square_h, k1)


def test_larger_source_is_never_included(k2, k3):
    assert find_inclusion(k3, k2) is None


def test_wheel_members_in_wheel5(wheels, wheel5):
    w1, w2 = wheels
    assert not contains(wheel5, w1)
    assert contains(wheel5, w2)


def test_violations_for_a_broken_map(theta, k23):
    (th,) = theta
    phi = find_inclusion(th, k23)
    bad_vm = dict(phi.vertex_map)
    bad_vm["v2"] = bad_vm["v1"]
    broken = Inclusion(th, k23, bad_vm, phi.urpath_map)
    assert "vertex map not injective" in inclusion_violations(broken)


def test_short_image_is_rejected(k2):
    f = Pathograph.build(["x", "y"], urpaths=[("u", "x", "y")])
    phi = Inclusion(f, k2, {"x": "k1", "y": "k2"}, {"u": PathSub(("k1", "k2"), (None,))})
    assert any("fewer than three vertices" in v for v in inclusion_violations(phi))


@settings(max_examples=60, deadline=None)
@given(graphs(max_vertices=4), graphs(max_vertices=6))
def test_graph_inclusion_is_induced_subgraph(f, g):
    assert (find_inclusion(f, g) is not None) == has_induced_subgraph(g.to_networkx(), f.to_networkx())


@settings(max_examples=40, deadline=None)
@given(pathographs(max_vertices=3, max_urpaths=2), graphs(min_vertices=3, max_vertices=6))
def test_found_inclusions_satisfy_every_invariant(f, g):
    phi = find_inclusion(f, g)
    if phi is not None:
        assert inclusion_violations(phi) == []
