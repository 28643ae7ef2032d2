"""A small regular-expression front end producing :class:`Nfa` values.

Syntax: literals are single symbols (``_pN`` names one fresh generator),
``|`` alternation, juxtaposition, postfix ``*``, ``+`` and ``?``,
parentheses, and ``()`` for ε.  Whitespace is ignored.
"""

from __future__ import annotations

from .. import symbols
from .automata import Nfa


class RegexError(ValueError):
    pass


def _tokens(text: str):
    word = symbols.parse_word("".join(text.split()))
    for c in word:
        yield c


class _Builder:
    def __init__(self):
        self.n = 0
        self.trans = []

    def state(self):
        self.n += 1
        return self.n - 1


def parse_regex(text: str, alphabet=None) -> Nfa:
    toks = list(_tokens(text))
    pos = 0
    b = _Builder()

    def peek():
        return toks[pos] if pos < len(toks) else None

    def atom():
        nonlocal pos
        c = peek()
        if c is None or c in "|)*+?":
            raise RegexError(f"unexpected {c!r} at token {pos}")
        pos += 1
        if c == "(":
            if peek() == ")":
                pos += 1
                s = b.state()
                return s, s
            frag = alternation()
            if peek() != ")":
                raise RegexError("missing ')'")
            pos += 1
            return frag
        s, t = b.state(), b.state()
        b.trans.append((s, c, t))
        return s, t

    def postfix():
        nonlocal pos
        s, t = atom()
        while peek() in ("*", "+", "?"):
            op = peek()
            pos += 1
            s2, t2 = b.state(), b.state()
            b.trans += [(s2, None, s), (t, None, t2)]
            if op in "*+":
                b.trans.append((t, None, s))
            if op in "*?":
                b.trans.append((s2, None, t2))
            s, t = s2, t2
        return s, t

    def sequence():
        if peek() in (None, "|", ")"):
            s = b.state()
            return s, s
        s, t = postfix()
        while peek() not in (None, "|", ")"):
            s2, t2 = postfix()
            b.trans.append((t, None, s2))
            t = t2
        return s, t

    def alternation():
        nonlocal pos
        frags = [sequence()]
        while peek() == "|":
            pos += 1
            frags.append(sequence())
        if len(frags) == 1:
            return frags[0]
        s, t = b.state(), b.state()
        for fs, ft in frags:
            b.trans += [(s, None, fs), (ft, None, t)]
        return s, t

    s, t = alternation()
    if pos != len(toks):
        raise RegexError(f"trailing input at token {pos}")
    letters = {a for _, a, _ in b.trans if a is not None}
    if alphabet is not None:
        extra = letters - set(alphabet)
        if extra:
            raise RegexError(f"symbols outside the alphabet: {sorted(map(symbols.render, extra))}")
        letters = set(alphabet)
    return Nfa(b.n, frozenset(letters), tuple(b.trans), frozenset({s}), frozenset({t}))
