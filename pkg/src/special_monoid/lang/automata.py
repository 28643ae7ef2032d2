"""Finite automata and rational transducers (integer states)."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class Nfa:
    """``transitions`` holds ``(p, symbol or None, q)``; ``None`` is an ε-move."""

    n_states: int
    alphabet: frozenset
    transitions: tuple
    initial: frozenset
    accepting: frozenset

    def __post_init__(self):
        for p, a, q in self.transitions:
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise ValueError("transition endpoint out of range")
            if a is not None and a not in self.alphabet:
                raise ValueError(f"symbol {a!r} not in alphabet")
        if any(not 0 <= s < self.n_states for s in self.initial | self.accepting):
            raise ValueError("initial/accepting state out of range")

    def _eps(self):
        eps = defaultdict(set)
        for p, a, q in self.transitions:
            if a is None:
                eps[p].add(q)
        return eps

    def closure(self, states, eps=None) -> set:
        eps = self._eps() if eps is None else eps
        out = set(states)
        stack = list(states)
        while stack:
            p = stack.pop()
            for q in eps[p]:
                if q not in out:
                    out.add(q)
                    stack.append(q)
        return out

    def accepts(self, word: str) -> bool:
        eps = self._eps()
        delta = defaultdict(set)
        for p, a, q in self.transitions:
            if a is not None:
                delta[p, a].add(q)
        cur = self.closure(self.initial, eps)
        for c in word:
            cur = self.closure({q for p in cur for q in delta[p, c]}, eps)
            if not cur:
                return False
        return bool(cur & self.accepting)

    def without_epsilon(self) -> "Nfa":
        if all(a is not None for _, a, _ in self.transitions):
            return self
        eps = self._eps()
        closures = [self.closure({p}, eps) for p in range(self.n_states)]
        trans = {(p, a, q) for p in range(self.n_states) for r in closures[p]
                 for (r2, a, q) in self.transitions if r2 == r and a is not None}
        accepting = {p for p in range(self.n_states) if closures[p] & self.accepting}
        return Nfa(self.n_states, self.alphabet, tuple(sorted(trans, key=repr)), self.initial, frozenset(accepting))

    # builders ------------------------------------------------------------

    @classmethod
    def pattern(cls, parts, alphabet=None) -> "Nfa":
        """Concatenation of ``(symbols, starred)`` blocks.

        ``Nfa.pattern([(A, True), ("#", False), ("c", False)])`` accepts
        ``A*#c``.  Each block is a set of single symbols.
        """
        trans = []
        state = 0
        letters = set()
        for syms, starred in parts:
            syms = set(syms)
            letters |= syms
            if starred:
                trans.append((state, None, state + 1))
                trans += [(state + 1, a, state + 1) for a in syms]
            else:
                trans += [(state, a, state + 1) for a in syms]
            state += 1
        return cls(state + 1, frozenset(alphabet if alphabet is not None else letters),
                   tuple(trans), frozenset({0}), frozenset({state}))

    @classmethod
    def word(cls, w: str, alphabet=None) -> "Nfa":
        return cls.pattern([({c}, False) for c in w], alphabet if alphabet is not None else set(w))

    @classmethod
    def universal(cls, alphabet) -> "Nfa":
        return cls.pattern([(set(alphabet), True)], alphabet)

    @classmethod
    def excluding(cls, excluded, alphabet) -> "Nfa":
        """``Σ*`` minus a finite set, as a trie with an accepting overflow sink."""
        excluded = set(excluded)
        prefixes = sorted({w[:k] for w in excluded for k in range(len(w) + 1)}, key=lambda w: (len(w), w))
        index = {w: i for i, w in enumerate(prefixes)}
        sink = len(prefixes)
        trans = [(sink, a, sink) for a in alphabet]
        for w in prefixes:
            for a in alphabet:
                trans.append((index[w], a, index.get(w + a, sink)))
        accepting = {index[w] for w in prefixes if w not in excluded} | {sink}
        return cls(sink + 1, frozenset(alphabet), tuple(trans), frozenset({0}), frozenset(accepting))

    @classmethod
    def star_of(cls, words, alphabet=None) -> "Nfa":
        """``W*`` for a finite set ``W`` of nonempty words."""
        trans = []
        n = 1
        for w in words:
            prev = 0
            for i, c in enumerate(w):
                nxt = 0 if i == len(w) - 1 else n
                if nxt:
                    n += 1
                trans.append((prev, c, nxt))
                prev = nxt
        letters = set("".join(words)) if alphabet is None else set(alphabet)
        return cls(n, frozenset(letters), tuple(trans), frozenset({0}), frozenset({0}))

    @classmethod
    def nothing(cls, alphabet=()) -> "Nfa":
        return cls(1, frozenset(alphabet), (), frozenset({0}), frozenset())

    def concat(self, other: "Nfa") -> "Nfa":
        k = self.n_states
        trans = list(self.transitions) + [(p + k, a, q + k) for p, a, q in other.transitions]
        trans += [(f, None, i + k) for f in self.accepting for i in other.initial]
        return Nfa(k + other.n_states, self.alphabet | other.alphabet, tuple(trans),
                   self.initial, frozenset(f + k for f in other.accepting))

    def reverse(self) -> "Nfa":
        return Nfa(self.n_states, self.alphabet, tuple((q, a, p) for p, a, q in self.transitions),
                   self.accepting, self.initial)

    def rename(self, mapping) -> "Nfa":
        """Apply a letter-to-letter renaming to every transition label."""
        trans = tuple((p, a if a is None else mapping.get(a, a), q) for p, a, q in self.transitions)
        return Nfa(self.n_states, frozenset(mapping.get(a, a) for a in self.alphabet), trans,
                   self.initial, self.accepting)


@dataclass(frozen=True)
class Transducer:
    """Transitions ``(p, input symbol or None, output word, q)``."""

    n_states: int
    inputs: frozenset
    outputs: frozenset
    transitions: tuple
    initial: frozenset
    accepting: frozenset

    def __post_init__(self):
        for p, a, out, q in self.transitions:
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise ValueError("transition endpoint out of range")
            if a is not None and a not in self.inputs:
                raise ValueError(f"input symbol {a!r} not declared")
            if any(c not in self.outputs for c in out):
                raise ValueError(f"output word {out!r} uses undeclared symbols")

    @classmethod
    def homomorphism(cls, mapping: dict, outputs: Iterable[str] | None = None) -> "Transducer":
        """One state; each input letter ``a`` emits ``mapping[a]``."""
        outs = set("".join(mapping.values())) if outputs is None else set(outputs)
        trans = tuple((0, a, w, 0) for a, w in mapping.items())
        return cls(1, frozenset(mapping), frozenset(outs), trans, frozenset({0}), frozenset({0}))

    @classmethod
    def identity(cls, alphabet) -> "Transducer":
        return cls.homomorphism({a: a for a in alphabet})

    def inverse(self) -> "Transducer":
        """Swap input and output; multi-letter outputs become state chains."""
        trans = []
        n = self.n_states
        for p, a, out, q in self.transitions:
            emit = "" if a is None else a
            if not out:
                trans.append((p, None, emit, q))
                continue
            prev = p
            for i, c in enumerate(out):
                last = i == len(out) - 1
                nxt = q if last else n
                if not last:
                    n += 1
                trans.append((prev, c, emit if i == 0 else "", nxt))
                prev = nxt
        return Transducer(n, self.outputs, self.inputs, tuple(trans), self.initial, self.accepting)

    def run(self, word: str, max_outputs: int = 10_000) -> set:
        """All outputs for ``word`` (bounded; ε-cycles are cut by a visit set)."""
        results = set()
        stack = [(s, 0, "") for s in self.initial]
        seen = set(stack)
        while stack and len(results) < max_outputs:
            p, i, out = stack.pop()
            if i == len(word) and p in self.accepting:
                results.add(out)
            for p0, a, o, q in self.transitions:
                if p0 != p:
                    continue
                if a is None:
                    nxt = (q, i, out + o)
                elif i < len(word) and word[i] == a:
                    nxt = (q, i + 1, out + o)
                else:
                    continue
                if nxt not in seen and len(nxt[2]) <= 4 * len(word) + 16:
                    seen.add(nxt)
                    stack.append(nxt)
        return results
