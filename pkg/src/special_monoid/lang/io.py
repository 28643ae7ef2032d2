"""Text format for grammars.

::

    start: S
    terminals: '(' ')'
    S -> '(' S ')' S |

Terminals are quoted external symbol names (``'b1'``, ``'_p0'``, ``'#'``);
nonterminals are bare identifiers; an empty alternative is ε.  The
``terminals:`` line is optional and only needed for terminals that occur in
no production.  Lines whose first non-blank character is ``#`` are comments.
"""

from __future__ import annotations

import re

from .. import symbols
from .grammar import Grammar, build


class GrammarSyntaxError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


_TOKEN = re.compile(r"\s*(?:(->)|(\|)|'((?:[^'\\]|\\.)*)'|([A-Za-z_][A-Za-z0-9_]*))")


def _quote(sym: str) -> str:
    name = symbols.render(sym)
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _unquote(body: str) -> str:
    return symbols.parse_name(re.sub(r"\\(.)", r"\1", body))


def _lex(text: str, lineno: int):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise GrammarSyntaxError(f"unexpected character {text[pos:].strip()[:1]!r}", lineno)
        if m.group(1):
            out.append(("arrow", None))
        elif m.group(2):
            out.append(("bar", None))
        elif m.group(3) is not None:
            try:
                out.append(("t", _unquote(m.group(3))))
            except ValueError as e:
                raise GrammarSyntaxError(str(e), lineno) from None
        else:
            out.append(("nt", m.group(4)))
        pos = m.end()
    return out


def parse_grammar(text: str, label: str = "file") -> Grammar:
    start = None
    terminals = set()
    prods: dict[str, list] = {}
    first_use: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("start:"):
            if start is not None:
                raise GrammarSyntaxError("second start line", lineno)
            name = line[len("start:"):].strip()
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise GrammarSyntaxError(f"bad start symbol {name!r}", lineno)
            start = name
            continue
        if start is None:
            raise GrammarSyntaxError("first line must be 'start: <Nonterminal>'", lineno)
        if line.startswith("terminals:"):
            for kind, val in _lex(line[len("terminals:"):], lineno):
                if kind != "t":
                    raise GrammarSyntaxError("terminals line takes quoted symbols only", lineno)
                terminals.add(val)
            continue
        toks = _lex(line, lineno)
        if len(toks) < 2 or toks[0][0] != "nt" or toks[1][0] != "arrow":
            raise GrammarSyntaxError("expected '<Nonterminal> -> ...'", lineno)
        head = toks[0][1]
        alts = [[]]
        for kind, val in toks[2:]:
            if kind == "bar":
                alts.append([])
            elif kind == "arrow":
                raise GrammarSyntaxError("unexpected '->'", lineno)
            elif kind == "t":
                alts[-1].append(val)
                terminals.add(val)
            else:
                alts[-1].append(("nt", val))
                first_use.setdefault(val, lineno)
        prods.setdefault(head, []).extend(tuple(a) for a in alts)
    if start is None:
        raise GrammarSyntaxError("missing 'start:' line")
    for nt, lineno in first_use.items():
        if nt not in prods and nt != start:
            raise GrammarSyntaxError(f"nonterminal {nt} is used but never defined", lineno)
    keyed = {("nt", a): bodies for a, bodies in prods.items()}
    return build(("nt", start), keyed, terminals, label, trim=False)


def serialize_grammar(g: Grammar) -> str:
    name = {a: f"N{i}" for i, a in enumerate([g.start] + [a for a in g.productions if a != g.start])}
    lines = [f"start: {name[g.start]}"]
    used = {x for bodies in g.productions.values() for b in bodies for x in b if isinstance(x, str)}
    extra = sorted(g.terminals - used)
    if extra:
        lines.append("terminals: " + " ".join(_quote(t) for t in extra))
    dead = {a for a, bodies in g.productions.items() if not bodies}
    for a in name:
        # a body through a production-less nonterminal derives nothing
        alts = [" ".join(_quote(x) if isinstance(x, str) else name[x] for x in b)
                for b in g.productions[a] if not any(x in dead for x in b if not isinstance(x, str))]
        if alts:
            lines.append(f"{name[a]} -> " + " | ".join(alts))
    return "\n".join(l.rstrip() for l in lines) + "\n"
