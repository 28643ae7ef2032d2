"""CYK membership on top of memoized CNF tables."""

from __future__ import annotations

from ._kernels import cyk_run
from .cnf import cnf_tables
from .grammar import Grammar


def cyk_member(g: Grammar, w: str, backend: str | None = None) -> bool:
    """``w ∈ L(g)``; symbols outside the grammar's terminals give ``False``."""
    t = cnf_tables(g)
    if not w:
        return t.nullable
    try:
        codes = [t.terminal_index[c] for c in w]
    except KeyError:
        return False
    if t.n_nonterminals == 0:
        return False
    return cyk_run(codes, t, backend)
