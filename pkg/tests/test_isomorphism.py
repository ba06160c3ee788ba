import networkx as nx
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import complete, path, pathographs
from pathograph.isomorphism import canonical_key, dedupe, is_isomorphic, key_set
from pathograph.model import Pathograph


def test_prism_members(prism):
    pr1, pr2, pr3, _ = prism
    assert is_isomorphic(pr1, Pathograph.from_networkx(nx.circular_ladder_graph(3)))
    assert not is_isomorphic(pr2, pr3)


def test_orientation_and_index_order_do_not_matter():
    p = Pathograph.build(["a", "b", "c"], [("a", "b")], [("u", "a", "c"), ("w", "b", "c")], [("b", "u")])
    q = Pathograph.build(["a", "b", "c"], [("a", "b")], [("w", "c", "b"), ("u", "c", "a")], [("b", "u")])
    assert is_isomorphic(p, q)
    assert canonical_key(p) == canonical_key(q)


def test_urpath_is_not_an_edge(k2):
    p = Pathograph.build(["k1", "k2"], urpaths=[("u", "k1", "k2")])
    assert not is_isomorphic(p, k2)


def test_dedupe_and_key_set():
    k3 = complete(3)
    twin = k3.relabel({"k1": "x", "k2": "y", "k3": "z"})
    family = dedupe([k3, path(3), twin])
    assert len(family) == 2
    assert key_set([k3, path(3)]) == key_set(family)


@settings(max_examples=60, deadline=None)
@given(pathographs(with_rungs=True), st.randoms(use_true_random=False))
def test_key_survives_relabelling(p, rnd):
    names = list(p.vertices)
    shuffled = names[:]
    rnd.shuffle(shuffled)
    q = p.relabel({a: f"r{b}" for a, b in zip(names, shuffled)})
    assert is_isomorphic(p, q)
    assert canonical_key(p) == canonical_key(q)


@settings(max_examples=80, deadline=None)
@given(pathographs(max_vertices=4), pathographs(max_vertices=4))
def test_key_equality_matches_isomorphism(p, q):
    assert (canonical_key(p) == canonical_key(q)) == is_isomorphic(p, q)
