"""Chomsky normal form (START, TERM, BIN, DEL, UNIT) and compact rule tables."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .grammar import Grammar, build


def _convert(g: Grammar):
    prods = defaultdict(list)
    nullable_start = g.accepts_empty()
    # START
    prods[("S0",)].append((g.start,))
    # TERM + BIN
    for a, bodies in g.productions.items():
        for j, body in enumerate(bodies):
            if len(body) >= 2:
                body = tuple(("T", x) if isinstance(x, str) else x for x in body)
                for x in body:
                    if isinstance(x, tuple) and x[0] == "T":
                        prods[x] = [(x[1],)]
            head = a
            k = 0
            while len(body) > 2:
                nxt = ("B", a, j, k)
                prods[head].append((body[0], nxt))
                head, body, k = nxt, body[1:], k + 1
            prods[head].append(body)
    # DEL
    null = set()
    changed = True
    while changed:
        changed = False
        for a, bodies in prods.items():
            if a not in null and any(all(not isinstance(x, str) and x in null for x in b) for b in bodies):
                null.add(a)
                changed = True
    for a in list(prods):
        out = []
        for b in prods[a]:
            if len(b) == 2:
                x, y = b
                out.append(b)
                if not isinstance(x, str) and x in null:
                    out.append((y,))
                if not isinstance(y, str) and y in null:
                    out.append((x,))
            elif b:
                out.append(b)
        prods[a] = list(dict.fromkeys(out))
    # UNIT
    unit = {a: {b[0] for b in bodies if len(b) == 1 and not isinstance(b[0], str)} for a, bodies in prods.items()}
    final = {}
    for a in prods:
        reach = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            for y in unit.get(x, ()):
                if y not in reach:
                    reach.add(y)
                    stack.append(y)
        final[a] = [b for x in reach for b in prods.get(x, ())
                    if not (len(b) == 1 and not isinstance(b[0], str))]
    cnf = build(("S0",), final, g.terminals, (g.label + "/cnf") if g.label else "cnf")
    return cnf, nullable_start


def to_cnf(g: Grammar) -> tuple[Grammar, bool]:
    """Return a CNF grammar for ``L(g) \\ {ε}`` and whether ``ε ∈ L(g)``."""
    return g.memo("cnf", lambda: _convert(g))


@dataclass(frozen=True)
class CnfTables:
    """Integer-coded CNF rules: ``unary[t]`` lists heads of ``A -> t``;
    binary rules are grouped by their first body symbol (CSR layout)."""

    n_nonterminals: int
    start: int
    nullable: bool
    terminal_index: dict
    unary_ptr: np.ndarray
    unary_heads: np.ndarray
    rule_ptr: np.ndarray      # by B
    rule_c: np.ndarray
    rule_a: np.ndarray
    rules: np.ndarray         # (R, 3): A, B, C in the same order


def _tables(g: Grammar) -> CnfTables:
    cnf, nullable = to_cnf(g)
    n = len(cnf.productions)
    terms = sorted(cnf.terminals)
    tindex = {t: i for i, t in enumerate(terms)}
    unary = [[] for _ in terms]
    binary = []
    for a, bodies in cnf.productions.items():
        for b in bodies:
            if len(b) == 1:
                unary[tindex[b[0]]].append(a)
            elif len(b) == 2:
                binary.append((a, b[0], b[1]))
    uptr = np.zeros(len(terms) + 1, np.int64)
    for i, heads in enumerate(unary):
        uptr[i + 1] = uptr[i] + len(heads)
    uheads = np.array([h for heads in unary for h in heads], np.int64)
    binary.sort(key=lambda r: (r[1], r[2], r[0]))
    rules = np.array(binary, np.int64).reshape(-1, 3)
    rptr = np.zeros(n + 1, np.int64)
    if len(rules):
        counts = np.bincount(rules[:, 1], minlength=n)
        rptr[1:] = np.cumsum(counts)
    return CnfTables(n, cnf.start, nullable, tindex, uptr, uheads, rptr,
                     rules[:, 2].copy(), rules[:, 0].copy(), rules)


def cnf_tables(g: Grammar) -> CnfTables:
    return g.memo("cnf_tables", lambda: _tables(g))
