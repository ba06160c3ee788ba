import pytest
from hypothesis import given, settings

from automaton.machines import determinize, equivalent
from automaton.regex import parse_regex, regex_from_dfa, regex_to_nfa, retokenize, tokenize
from core.utils import AlphabetMismatchError, RegexParseError
from helpers import SMALL_ALPHABET, nfas
from realization.strings import parse_determination_string


@pytest.mark.parametrize(
    "text, position",
    [
        ("1:{a} |", 7),
        ("(1:{a}", 6),
        ("1:{a} ?", 6),
        ("", 0),
        ("1:{a} )", 6),
    ],
)
def test_parse_errors_carry_positions(text, position):
    with pytest.raises(RegexParseError) as exc:
        parse_regex(text)
    assert exc.value.position == position


def test_tokenize():
    kinds = [kind for kind, _, _ in tokenize("(1:{a,b} | ε)* ∅")]
    assert kinds == ["lparen", "symbol", "bar", "eps", "rparen", "star", "empty"]


def test_tree_shapes():
    assert parse_regex("1:{a}")[0] == "sym"
    assert parse_regex("1:{a} 2:{}")[0] == "cat"
    assert parse_regex("1:{a} | 2:{}")[0] == "alt"
    assert parse_regex("1:{a}**") == ("star", ("star", parse_regex("1:{a}")))


@pytest.mark.parametrize(
    "regex, word, accepted",
    [
        ("1:{a} 2:{}*", "1:{a}", True),
        ("1:{a} 2:{}*", "1:{a} 2:{} 2:{}", True),
        ("1:{a} 2:{}*", "2:{}", False),
        ("ε", "", True),
        ("ε", "1:{}", False),
        ("∅", "", False),
        ("(1:{a} | 1:{b}) 2:{a,b}", "1:{b} 2:{a,b}", True),
        ("(1:{a} | 1:{b}) 2:{a,b}", "1:{a,b} 2:{a,b}", False),
    ],
)
def test_regex_languages(regex, word, accepted):
    nfa = regex_to_nfa(regex, SMALL_ALPHABET)
    assert nfa.accepts(parse_determination_string(word)) == accepted
    assert determinize(nfa).accepts(parse_determination_string(word)) == accepted


@pytest.mark.parametrize("regex", ["3:{a}", "1:{z}"])
def test_symbols_outside_the_alphabet(regex):
    with pytest.raises(AlphabetMismatchError):
        regex_to_nfa(regex, SMALL_ALPHABET)


def test_retokenize():
    assert retokenize("{a} {b}* | ({})", 1) == "1:{a} 1:{b}* | (1:{})"
    assert retokenize("2:{a} {b}", 1) == "2:{a} 1:{b}"


def test_empty_language_renders_as_empty_set():
    assert regex_from_dfa(determinize(regex_to_nfa("∅", SMALL_ALPHABET))) == "∅"


def test_long_regex_is_dropped():
    dfa = determinize(regex_to_nfa("1:{a} 2:{b} 1:{a,b}", SMALL_ALPHABET))
    assert regex_from_dfa(dfa, max_length=5) is None
    assert regex_from_dfa(dfa) == "1:{a} 2:{b} 1:{a,b}"


@settings(max_examples=40, deadline=None)
@given(nfas(max_states=3))
def test_state_elimination_keeps_the_language(nfa):
    dfa = determinize(nfa)
    text = regex_from_dfa(dfa)
    assert equivalent(determinize(regex_to_nfa(text, SMALL_ALPHABET)), dfa)
