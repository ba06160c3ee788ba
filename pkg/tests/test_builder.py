import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from automaton.builder import alphabet, build_decision_dfa, build_illformed, build_mphi, search_machines
from automaton.machines import Alphabet, determinize, equivalent, is_empty
from automaton.partial import strip_urpaths
from automaton.regex import regex_to_nfa
from containment.truemper import truemper
from core.utils import PreconditionError
from helpers import (
    all_words,
    complete,
    graphs,
    path,
    pathographs,
    rungless_pathographs,
    two_urpaths_with_rung,
    wheel_trace,
    words,
)
from pathograph.model import Pathograph
from realization.realization import enumerate_realizations, is_f_free
from realization.strings import determination_string, is_well_formed, parse_determination_string


def _single_urpath() -> Pathograph:
    return Pathograph.build(["a", "b"], urpaths=[("u", "a", "b")])


def test_alphabet_size(square_h):
    symbols = alphabet(square_h)
    assert len(symbols) == 16
    assert symbols[0].render() == "1:{}"


def test_rungs_are_rejected():
    with pytest.raises(PreconditionError):
        alphabet(two_urpaths_with_rung())
    with pytest.raises(PreconditionError):
        build_decision_dfa(two_urpaths_with_rung(), [complete(3)])


@pytest.mark.parametrize(
    "text, accepted",
    [
        ("1:{b}", True),
        ("", True),
        ("1:{a,b} 1:{c,d}", False),
        ("1:{a,b,c,d}", False),
        ("1:{a} 1:{c}", True),
        ("1:{a,b,c} 1:{d}", True),
    ],
)
def test_illformed_on_square(square_h, text, accepted):
    assert build_illformed(square_h).accepts(parse_determination_string(text)) == accepted


def test_illformed_without_urpaths_rejects_only_the_empty_string(k1):
    assert not build_illformed(k1).accepts(parse_determination_string(""))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_illformed_is_the_complement_of_well_formed(data):
    h = data.draw(rungless_pathographs(max_vertices=4))
    assume(h.K >= 1)
    machine = build_illformed(h)
    sigma = data.draw(words(Alphabet.of(h), max_size=4))
    assert machine.accepts(sigma) == (not is_well_formed(h, sigma))


def test_mphi_reads_the_wheel_trace(square_h, wheels):
    w1, _ = wheels
    machine = build_mphi(wheel_trace(w1, strip_urpaths(square_h)), w1, square_h)
    assert machine.accepts(parse_determination_string("1:{b,d} 1:{b,c} 1:{d}"))
    assert not machine.accepts(parse_determination_string("1:{b} 1:{c} 1:{b}"))


def test_search_machines_are_deduplicated(square_h, theta):
    machines = search_machines(square_h, theta)
    assert machines
    assert len(search_machines(square_h, theta + theta)) == len(machines)


def test_decision_agrees_with_enumeration(square_h):
    family = [complete(3)]
    dfa = build_decision_dfa(square_h, family)
    realizations = list(enumerate_realizations(square_h, 2))
    assert len(realizations) == 10
    for r in realizations:
        assert dfa.accepts(determination_string(r)) == is_f_free(r.graph, family)


SMALL_MEMBERS = st.one_of(graphs(max_vertices=3), pathographs(max_vertices=3, max_urpaths=1))


def _agrees_with_enumeration(h, family, bound):
    dfa = build_decision_dfa(h, family)
    for r in enumerate_realizations(h, bound):
        assert dfa.accepts(determination_string(r)) == is_f_free(r.graph, family), r.graph.describe()


@settings(max_examples=20, deadline=None)
@given(rungless_pathographs(max_vertices=4, max_urpaths=1), st.lists(SMALL_MEMBERS, min_size=1, max_size=2))
def test_random_decisions_agree_with_enumeration(h, family):
    _agrees_with_enumeration(h, family, 2)


@pytest.mark.slow
@settings(max_examples=200, deadline=None)
@given(
    rungless_pathographs(max_vertices=4, max_urpaths=2),
    st.lists(SMALL_MEMBERS, max_size=2),
    st.lists(st.sampled_from(["theta", "pyramid", "prism", "wheel"]), max_size=1),
)
def test_random_decisions_agree_with_enumeration_at_scale(h, members, kinds):
    family = members + [m for kind in kinds for m in truemper(kind)]
    _agrees_with_enumeration(h, family, 3)


def test_triangle_free_single_urpath_accepts_every_well_formed_string():
    h = _single_urpath()
    dfa = build_decision_dfa(h, [complete(3)])
    for w in all_words(Alphabet.of(h), 3):
        assert dfa.accepts(w) == is_well_formed(h, w)


def test_forbidding_a_short_path_leaves_nothing():
    assert is_empty(build_decision_dfa(_single_urpath(), [path(3)]))


@pytest.mark.slow
def test_theta_and_wheel_free_realizations_of_square(square_h, theta_wheel):
    dfa = build_decision_dfa(square_h, theta_wheel)
    expected = regex_to_nfa("(1:{a,b} 1:{}* 1:{c,d}) | (1:{a,d} 1:{}* 1:{c,b})", Alphabet.of(square_h))
    assert equivalent(dfa, determinize(expected))
    verdict = is_empty(dfa)
    assert verdict.witness.render() in ("1:{a,b} 1:{c,d}", "1:{a,d} 1:{b,c}")


@pytest.mark.slow
def test_every_realization_of_square_has_a_truemper_configuration(square_h, theta_prism_wheel):
    assert is_empty(build_decision_dfa(square_h, theta_prism_wheel))
