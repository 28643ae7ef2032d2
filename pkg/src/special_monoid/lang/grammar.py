"""Context-free grammar values.

Terminals are one-character ``str`` symbols; nonterminals are ``int``.  A
body is a tuple mixing both, so ``isinstance(x, str)`` tells them apart.
Grammars are treated as immutable; derived data (CNF tables, nullable sets)
is memoized on the instance.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Hashable, Iterable, Mapping


class Grammar:
    __slots__ = ("start", "productions", "terminals", "label", "_memo")

    def __init__(self, start: int, productions: Mapping[int, tuple], terminals: Iterable[str], label: str = ""):
        self.start = start
        self.productions = {a: tuple(tuple(b) for b in bodies) for a, bodies in productions.items()}
        self.terminals = frozenset(terminals)
        self.label = label
        self._memo = {}
        if start not in self.productions:
            raise ValueError("start symbol has no production entry")
        for a, bodies in self.productions.items():
            for body in bodies:
                for x in body:
                    if isinstance(x, str):
                        if x not in self.terminals:
                            raise ValueError(f"undeclared terminal {x!r} in production of {a}")
                    elif x not in self.productions:
                        raise ValueError(f"undeclared nonterminal {x!r} in production of {a}")

    # construction helpers ------------------------------------------------

    @classmethod
    def empty(cls, terminals=(), label="empty") -> "Grammar":
        return cls(0, {0: ()}, terminals, label)

    @classmethod
    def epsilon(cls, terminals=(), label="epsilon") -> "Grammar":
        return cls(0, {0: ((),)}, terminals, label)

    @classmethod
    def from_words(cls, words: Iterable[str], terminals=None, label="finite") -> "Grammar":
        words = list(dict.fromkeys(words))
        terms = set(terminals) if terminals is not None else set("".join(words))
        return cls(0, {0: tuple(tuple(w) for w in words)}, terms, label)

    @property
    def nonterminals(self):
        return self.productions.keys()

    @property
    def size(self) -> int:
        return sum(len(b) + 1 for bodies in self.productions.values() for b in bodies)

    def memo(self, key, compute):
        if key not in self._memo:
            self._memo[key] = compute()
        return self._memo[key]

    def nullable(self) -> frozenset:
        return self.memo("nullable", lambda: _nullable(self.productions))

    def accepts_empty(self) -> bool:
        return self.start in self.nullable()

    def relabel(self, label: str) -> "Grammar":
        g = Grammar.__new__(Grammar)
        g.start, g.productions, g.terminals, g.label, g._memo = (
            self.start, self.productions, self.terminals, label, self._memo)
        return g

    def with_terminals(self, terminals) -> "Grammar":
        return Grammar(self.start, self.productions, self.terminals | frozenset(terminals), self.label)

    def __repr__(self):
        return (f"Grammar({self.label or '?'}: {len(self.productions)} nonterminals, "
                f"{sum(map(len, self.productions.values()))} productions)")


def _nullable(productions) -> frozenset:
    null = set()
    changed = True
    while changed:
        changed = False
        for a, bodies in productions.items():
            if a in null:
                continue
            if any(all((not isinstance(x, str)) and x in null for x in b) for b in bodies):
                null.add(a)
                changed = True
    return frozenset(null)


def productive_set(productions) -> set:
    """Nonterminals deriving at least one terminal word (worklist, linear)."""
    users = defaultdict(list)        # nonterminal -> [(head, body index)]
    missing = {}
    done = set()
    queue = []
    for a, bodies in productions.items():
        for j, body in enumerate(bodies):
            nts = {x for x in body if not isinstance(x, str)}
            missing[(a, j)] = len(nts)
            for x in nts:
                users[x].append((a, j))
            if not nts and a not in done:
                done.add(a)
                queue.append(a)
    while queue:
        x = queue.pop()
        for key in users[x]:
            missing[key] -= 1
            if missing[key] == 0 and key[0] not in done:
                done.add(key[0])
                queue.append(key[0])
    return done


def build(start: Hashable, productions: Mapping[Hashable, Iterable], terminals, label: str = "",
          trim: bool = True) -> Grammar:
    """Make a :class:`Grammar` from arbitrary hashable nonterminal keys.

    Keys are renumbered to ints (start becomes 0); duplicate bodies are
    dropped.  With ``trim`` useless nonterminals are removed.
    """
    prods = {a: list(dict.fromkeys(tuple(b) for b in bodies)) for a, bodies in productions.items()}
    prods.setdefault(start, [])
    if trim:
        good = productive_set(prods)
        if start not in good:
            return Grammar.empty(terminals, label)
        prods = {a: [b for b in bodies if all(isinstance(x, str) or x in good for x in b)]
                 for a, bodies in prods.items() if a in good}
        seen = {start}
        stack = [start]
        while stack:
            a = stack.pop()
            for b in prods[a]:
                for x in b:
                    if not isinstance(x, str) and x not in seen:
                        seen.add(x)
                        stack.append(x)
        order = [start] + [a for a in prods if a in seen and a != start]
    else:
        for bodies in list(prods.values()):
            for b in bodies:
                for x in b:
                    if not isinstance(x, str):
                        prods.setdefault(x, [])
        order = [start] + [a for a in prods if a != start]
    index = {a: i for i, a in enumerate(order)}
    out = {index[a]: tuple(tuple(x if isinstance(x, str) else index[x] for x in b) for b in prods[a])
           for a in order}
    return Grammar(0, out, terminals, label)


def trim(g: Grammar) -> Grammar:
    return build(g.start, g.productions, g.terminals, g.label)


def is_empty(g: Grammar) -> bool:
    return g.start not in productive_set(g.productions)


def language_slice(g: Grammar, n: int) -> frozenset:
    """All words of ``L(g)`` of length at most ``n`` (least fixpoint).

    Independent of CNF and CYK, so tests use it as a second opinion.
    """
    words = {a: set() for a in g.productions}
    changed = True
    while changed:
        changed = False
        for a, bodies in g.productions.items():
            acc = words[a]
            before = len(acc)
            for body in bodies:
                partial = {""}
                for x in body:
                    if isinstance(x, str):
                        partial = {w + x for w in partial if len(w) < n}
                    else:
                        partial = {w + v for w in partial for v in words[x] if len(w) + len(v) <= n}
                    if not partial:
                        break
                acc |= partial
            if len(acc) != before:
                changed = True
    return frozenset(words[g.start])


def all_words(alphabet, n: int):
    """Every word over ``alphabet`` of length ``<= n``, shortest first."""
    import itertools
    alphabet = sorted(alphabet)
    for k in range(n + 1):
        for t in itertools.product(alphabet, repeat=k):
            yield "".join(t)


def shortest_word(g: Grammar) -> str | None:
    """A shortest word of ``L(g)``, or ``None`` when the language is empty."""
    best: dict = {}
    changed = True
    while changed:
        changed = False
        for a, bodies in g.productions.items():
            for body in bodies:
                if all(isinstance(x, str) or x in best for x in body):
                    w = "".join(x if isinstance(x, str) else best[x] for x in body)
                    if a not in best or len(w) < len(best[a]):
                        best[a] = w
                        changed = True
    return best.get(g.start)
