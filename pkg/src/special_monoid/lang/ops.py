"""Closure operations on grammars.

Every result is trimmed.  ``intersect_regular`` and ``rational_transduce``
share one generalized Bar-Hillel product: nonterminals of the result are
triples ``(p, A, q)`` over a CNF form of the input, and only triples that
are productive (found by a worklist) are ever materialized.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping

from .automata import Nfa, Transducer
from .cnf import to_cnf
from .grammar import Grammar, build


def combine(g1: Grammar, g2: Grammar, kind: str = "union") -> Grammar:
    prods = {}
    for tag, g in (("l", g1), ("r", g2)):
        for a, bodies in g.productions.items():
            prods[(tag, a)] = [tuple(x if isinstance(x, str) else (tag, x) for x in b) for b in bodies]
    s1, s2 = ("l", g1.start), ("r", g2.start)
    if kind == "union":
        prods[("S",)] = [(s1,), (s2,)]
    elif kind in ("concatenation", "concat"):
        prods[("S",)] = [(s1, s2)]
    else:
        raise ValueError(f"unknown combine kind {kind!r}")
    return build(("S",), prods, g1.terminals | g2.terminals, f"{kind}({g1.label},{g2.label})")


def union(*grammars: Grammar) -> Grammar:
    if not grammars:
        return Grammar.empty()
    prods = {}
    starts = []
    terms = set()
    for k, g in enumerate(grammars):
        for a, bodies in g.productions.items():
            prods[(k, a)] = [tuple(x if isinstance(x, str) else (k, x) for x in b) for b in bodies]
        starts.append(((k, g.start),))
        terms |= g.terminals
    prods[("S",)] = starts
    return build(("S",), prods, terms, "union")


def concat(*grammars: Grammar) -> Grammar:
    prods = {}
    body = []
    terms = set()
    for k, g in enumerate(grammars):
        for a, bodies in g.productions.items():
            prods[(k, a)] = [tuple(x if isinstance(x, str) else (k, x) for x in b) for b in bodies]
        body.append((k, g.start))
        terms |= g.terminals
    prods[("S",)] = [tuple(body)]
    return build(("S",), prods, terms, "concat")


def star(g: Grammar) -> Grammar:
    prods = {("g", a): [tuple(x if isinstance(x, str) else ("g", x) for x in b) for b in bodies]
             for a, bodies in g.productions.items()}
    prods[("S",)] = [(), (("g", g.start), ("S",))]
    return build(("S",), prods, g.terminals, f"star({g.label})")


def reverse(g: Grammar) -> Grammar:
    prods = {a: [tuple(reversed(b)) for b in bodies] for a, bodies in g.productions.items()}
    return build(g.start, prods, g.terminals, f"rev({g.label})")


def _as_grammar(image) -> Grammar:
    if isinstance(image, Grammar):
        return image
    return Grammar.from_words(list(image))


def substitute_terminals(g: Grammar, sub: Mapping[str, object], label: str | None = None) -> Grammar:
    """Replace every terminal ``t`` by the language ``sub[t]``.

    Images are grammars or finite word collections (a string image is read
    as a one-word set).  Single-letter images are inlined.
    """
    used = {x for bodies in g.productions.values() for b in bodies for x in b if isinstance(x, str)}
    missing = used - set(sub)
    if missing:
        raise ValueError(f"no image for terminal(s) {sorted(missing)!r}")
    prods = {("g", a): [] for a in g.productions}
    inline = {}
    terms = set()
    for t in used:
        image = sub[t]
        if isinstance(image, str):
            image = [image]
        if not isinstance(image, Grammar):
            words = list(dict.fromkeys(image))
            terms |= set("".join(words))
            if len(words) == 1 and len(words[0]) == 1:
                inline[t] = words[0]
                continue
            image = Grammar.from_words(words)
        terms |= image.terminals
        for a, bodies in image.productions.items():
            prods[("t", t, a)] = [tuple(x if isinstance(x, str) else ("t", t, x) for x in b) for b in bodies]
        inline[t] = ("t", t, image.start)
    for a, bodies in g.productions.items():
        prods[("g", a)] = [tuple(inline[x] if isinstance(x, str) else ("g", x) for x in b) for b in bodies]
    return build(("g", g.start), prods, terms, label or f"subst({g.label})")


# -- Bar-Hillel product ------------------------------------------------------

def _product(g: Grammar, n_states: int, term_trans, eps_trans, initial, accepting, out_terms, label):
    """Generalized triple construction.

    ``term_trans[a]`` lists ``(p, q, out)`` for reading terminal ``a``;
    ``eps_trans`` lists ``(p, q, out)`` moves that read nothing.
    """
    cnf, nullable = to_cnf(g)
    reach = [{p} for p in range(n_states)]
    if eps_trans:
        adj = defaultdict(set)
        for p, q, _ in eps_trans:
            adj[p].add(q)
        for p in range(n_states):
            stack = [p]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in reach[p]:
                        reach[p].add(y)
                        stack.append(y)
    back = [set() for _ in range(n_states)]
    for p in range(n_states):
        for q in reach[p]:
            back[q].add(p)

    def eps(p, q):
        return () if not eps_trans else (("E", p, q),)

    prods = defaultdict(list)
    left_of = defaultdict(list)    # B -> [(A, C)]
    right_of = defaultdict(list)   # C -> [(A, B)]
    queue = []
    queued = set()

    def push(t):
        if t not in queued:
            queued.add(t)
            queue.append(t)

    for a, bodies in cnf.productions.items():
        for b in bodies:
            if len(b) == 2:
                left_of[b[0]].append((a, b[1]))
                right_of[b[1]].append((a, b[0]))
            elif len(b) == 1:
                for p1, q1, out in term_trans.get(b[0], ()):
                    for p in back[p1]:
                        for q in reach[q1]:
                            t = ("T", p, a, q)
                            prods[t].append(eps(p, p1) + tuple(out) + eps(q1, q))
                            push(t)
    ends = defaultdict(list)     # (p, B) -> [r]
    starts = defaultdict(list)   # (B, r) -> [p]
    while queue:
        t = queue.pop()
        _, p, b, r = t
        ends[(p, b)].append(r)
        starts[(b, r)].append(p)
        for a, c in left_of[b]:
            for q in ends.get((r, c), ()):
                head = ("T", p, a, q)
                prods[head].append((t, ("T", r, c, q)))
                push(head)
        for a, b0 in right_of[b]:
            for p0 in starts.get((b0, p), ()):
                head = ("T", p0, a, r)
                prods[head].append((("T", p0, b0, p), t))
                push(head)
    if eps_trans:
        for p, q, out in eps_trans:
            for f in range(n_states):
                if f in reach[q]:
                    prods[("E", p, f)].append(tuple(out) + (("E", q, f),))
        for p in range(n_states):
            prods[("E", p, p)].append(())
    start = ("S",)
    prods[start] = []
    for i in initial:
        for f in accepting:
            if ("T", i, cnf.start, f) in queued:
                prods[start].append((("T", i, cnf.start, f),))
            if nullable and f in reach[i]:
                prods[start].append(eps(i, f))
    return build(start, prods, out_terms, label)


def intersect_regular(g: Grammar, n: Nfa) -> Grammar:
    n = n.without_epsilon()
    term_trans = defaultdict(list)
    for p, a, q in n.transitions:
        term_trans[a].append((p, q, a))
    return _product(g, n.n_states, term_trans, [], n.initial, n.accepting, g.terminals,
                    f"({g.label})∩reg")


def _used_terminals(g: Grammar) -> set:
    return {x for bodies in g.productions.values() for b in bodies for x in b if isinstance(x, str)}


def rational_transduce(g: Grammar, t: Transducer, direction: str = "image") -> Grammar:
    if direction == "preimage":
        if not _used_terminals(g) <= t.outputs:
            raise ValueError("grammar terminals are not covered by the transducer outputs")
        t = t.inverse()
    elif direction == "image":
        if not _used_terminals(g) <= t.inputs:
            raise ValueError("grammar terminals are not covered by the transducer inputs")
    else:
        raise ValueError(f"unknown direction {direction!r}")
    term_trans = defaultdict(list)
    eps_trans = []
    for p, a, out, q in t.transitions:
        if a is None:
            eps_trans.append((p, q, out))
        else:
            term_trans[a].append((p, q, out))
    return _product(g, t.n_states, term_trans, eps_trans, t.initial, t.accepting, t.outputs,
                    f"{direction}({g.label})")


def homomorphic_image(g: Grammar, mapping: Mapping[str, str]) -> Grammar:
    """Image under a (possibly erasing) homomorphism, by direct substitution."""
    return substitute_terminals(g, {a: [w] for a, w in mapping.items()}, f"hom({g.label})")


def finite_language(words: Iterable[str], terminals=None) -> Grammar:
    return Grammar.from_words(words, terminals)
