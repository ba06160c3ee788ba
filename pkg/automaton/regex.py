"""
Regular Expressions over Determination-String Symbols

Grammar (whitespace separates tokens and is otherwise ignored):

    expr   := term ('|' term)*
    term   := factor factor*
    factor := atom '*'*
    atom   := k:{v,...} | 'ε' | '∅' | '(' expr ')'

regex_to_nfa compiles text with the Thompson construction; regex_from_dfa
goes back by state elimination.
"""

import itertools
import logging
import re
from typing import Dict, List, Optional, Tuple

from core.utils import FormatParseError, RegexParseError
from automaton.machines import Alphabet, Dfa, Nfa, live_states, reachable_states
from realization.strings import parse_symbol

logger = logging.getLogger(__name__)

_SYMBOL = re.compile(r"\d+:\{[^{}]*\}")
_SINGLE = {"(": "lparen", ")": "rparen", "|": "bar", "*": "star", "ε": "eps", "∅": "empty"}

Token = Tuple[str, str, int]
Node = Tuple


def tokenize(text: str) -> List[Token]:
    """(kind, text, position) triples; position is the 0-based character offset."""
    tokens: List[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _SINGLE:
            tokens.append((_SINGLE[ch], ch, i))
            i += 1
        else:
            match = _SYMBOL.match(text, i)
            if not match:
                raise RegexParseError(f"unexpected character {ch!r}", i)
            tokens.append(("symbol", match.group(), i))
            i = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def where(self) -> int:
        tok = self.peek()
        return tok[2] if tok else len(self.text)

    def parse(self) -> Node:
        if not self.tokens:
            raise RegexParseError("empty expression", 0)
        node = self.expr()
        if self.peek() is not None:
            raise RegexParseError(f"unexpected {self.peek()[1]!r}", self.where())
        return node

    def expr(self) -> Node:
        parts = [self.term()]
        while self.peek() and self.peek()[0] == "bar":
            self.pos += 1
            parts.append(self.term())
        return parts[0] if len(parts) == 1 else ("alt", tuple(parts))

    def term(self) -> Node:
        parts = []
        while self.peek() and self.peek()[0] not in ("bar", "rparen"):
            parts.append(self.factor())
        if not parts:
            raise RegexParseError("expected a symbol, 'ε' or '('", self.where())
        return parts[0] if len(parts) == 1 else ("cat", tuple(parts))

    def factor(self) -> Node:
        node = self.atom()
        while self.peek() and self.peek()[0] == "star":
            self.pos += 1
            node = ("star", node)
        return node

    def atom(self) -> Node:
        tok = self.peek()
        if tok is None:
            raise RegexParseError("unexpected end of expression", len(self.text))
        kind, value, position = tok
        self.pos += 1
        if kind == "symbol":
            try:
                return ("sym", parse_symbol(value))
            except FormatParseError as e:
                raise RegexParseError(str(e), position)
        if kind == "eps":
            return ("eps",)
        if kind == "empty":
            return ("empty",)
        if kind == "lparen":
            node = self.expr()
            if not self.peek() or self.peek()[0] != "rparen":
                raise RegexParseError("missing ')'", self.where())
            self.pos += 1
            return node
        raise RegexParseError(f"unexpected {value!r}", position)


def parse_regex(text: str) -> Node:
    """
    Parse regex text into a nested tuple tree.

    Raises:
        RegexParseError: With the offending character offset
    """
    return _Parser(text).parse()


def regex_to_nfa(text: str, alphabet: Alphabet) -> Nfa:
    """
    Thompson construction over the given alphabet.

    Raises:
        RegexParseError: On syntax errors
        AlphabetMismatchError: For symbols outside the alphabet
    """
    tree = parse_regex(text)
    counter = itertools.count()
    nfa = Nfa(alphabet, ("re", next(counter)), name="regex")

    def build(node: Node) -> Tuple[Tuple, Tuple]:
        start = nfa.add_state(("re", next(counter)))
        end = nfa.add_state(("re", next(counter)))
        kind = node[0]
        if kind == "sym":
            nfa.add_symbol_move(start, node[1], end)
        elif kind == "eps":
            nfa.add_epsilon(start, end)
        elif kind == "empty":
            pass
        elif kind == "cat":
            current = start
            for part in node[1]:
                s, e = build(part)
                nfa.add_epsilon(current, s)
                current = e
            nfa.add_epsilon(current, end)
        elif kind == "alt":
            for part in node[1]:
                s, e = build(part)
                nfa.add_epsilon(start, s)
                nfa.add_epsilon(e, end)
        elif kind == "star":
            s, e = build(node[1])
            nfa.add_epsilon(start, s)
            nfa.add_epsilon(e, s)
            nfa.add_epsilon(start, end)
            nfa.add_epsilon(e, end)
        return start, end

    s, e = build(tree)
    nfa.add_epsilon(nfa.start, s)
    nfa.add_state(e, accepting=True)
    logger.debug(f"Regex built with {nfa.num_states} states and {nfa.num_transitions} transitions")
    return nfa


def retokenize(text: str, index: int) -> str:
    """Give every bare `{..}` token of suppressed-index regex text the index `index`."""
    return re.sub(r"(?<!:)\{", f"{index}:{{", text)


# state elimination

_EMPTY: Node = ("empty",)
_EPS: Node = ("eps",)


def _render(node: Node) -> str:
    kind = node[0]
    if kind == "empty":
        return "∅"
    if kind == "eps":
        return "ε"
    if kind == "text":
        return node[1]
    if kind == "star":
        inner = node[1]
        body = _render(inner)
        return f"{body}*" if inner[0] == "text" else f"({body})*"
    if kind == "cat":
        return " ".join(f"({_render(p)})" if p[0] == "alt" else _render(p) for p in node[1])
    return "|".join(f"({_render(p)})" if p[0] in ("cat", "alt") else _render(p) for p in node[1])


def _union(a: Node, b: Node) -> Node:
    if a == _EMPTY:
        return b
    if b == _EMPTY or a == b:
        return a
    parts = set()
    for x in (a, b):
        parts.update(x[1] if x[0] == "alt" else (x,))
    ordered = tuple(sorted(parts, key=_render))
    return ordered[0] if len(ordered) == 1 else ("alt", ordered)


def _concat(*nodes: Node) -> Node:
    if any(n == _EMPTY for n in nodes):
        return _EMPTY
    parts: List[Node] = []
    for n in nodes:
        if n == _EPS:
            continue
        parts.extend(n[1] if n[0] == "cat" else (n,))
    if not parts:
        return _EPS
    return parts[0] if len(parts) == 1 else ("cat", tuple(parts))


def _star(a: Node) -> Node:
    if a in (_EMPTY, _EPS):
        return _EPS
    if a[0] == "star":
        return a
    return ("star", a)


def regex_from_dfa(dfa: Dfa, max_length: Optional[int] = None) -> Optional[str]:
    """
    Regex text for the machine's language by state elimination.

    Returns:
        The text, '∅' for the empty language, or None when it would be longer
        than max_length characters
    """
    live = live_states(dfa)
    states = [s for s in reachable_states(dfa) if s in live]
    if dfa.start not in live:
        return "∅"
    init, final = "init", "final"
    edges: Dict[Tuple, Node] = {(init, dfa.start): _EPS}
    for s in states:
        if s in dfa.accepting:
            edges[(s, final)] = _EPS
        for p, t in sorted(dfa.table[s].items()):
            if t in live:
                label = ("text", dfa.alphabet.render(dfa.alphabet.symbol_at(p)))
                edges[(s, t)] = _union(edges.get((s, t), _EMPTY), label)

    remaining = list(states)
    while remaining:
        def cost(s) -> Tuple[int, int]:
            ins = sum(1 for (p, q) in edges if q == s and p != s)
            outs = sum(1 for (p, q) in edges if p == s and q != s)
            return (ins * outs, s)

        s = min(remaining, key=cost)
        remaining.remove(s)
        loop = _star(edges.pop((s, s), _EMPTY))
        preds = [(p, r) for (p, q), r in edges.items() if q == s]
        succs = [(q, r) for (p, q), r in edges.items() if p == s]
        for p, _ in preds:
            del edges[(p, s)]
        for q, _ in succs:
            del edges[(s, q)]
        for p, into in preds:
            for q, out in succs:
                edges[(p, q)] = _union(edges.get((p, q), _EMPTY), _concat(into, loop, out))

    text = _render(edges.get((init, final), _EMPTY))
    if max_length is not None and len(text) > max_length:
        logger.debug(f"Regex of {len(text)} characters exceeds {max_length}")
        return None
    return text
