"""=-monadic rewriting systems and their ancestor grammars."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .grammar import Grammar, build, language_slice
from .ops import union


class MonadicSpecError(ValueError):
    pass


@dataclass(frozen=True)
class RuleFamily:
    """Left-hand sides ``lhs`` all rewriting to ``rhs`` (a letter or ``""``)."""

    rhs: str
    lhs: Grammar | frozenset
    allow_length_preserving: bool = True

    def grammar(self) -> Grammar:
        if isinstance(self.lhs, Grammar):
            return self.lhs
        return Grammar.from_words(sorted(self.lhs))


@dataclass(frozen=True)
class MonadicSystemSpec:
    alphabet: frozenset
    families: tuple = field(default=())

    def __post_init__(self):
        for fam in self.families:
            if len(fam.rhs) > 1:
                raise MonadicSpecError(f"right-hand side {fam.rhs!r} is longer than one letter")
            g = fam.grammar()
            short = language_slice(g, 1)
            if "" in short:
                raise MonadicSpecError(f"left-hand-side language for {fam.rhs!r} contains ε")
            if fam.rhs and not fam.allow_length_preserving and short:
                raise MonadicSpecError(f"length-preserving rule {sorted(short)[0]!r} -> {fam.rhs!r} "
                                       "in a strictly monadic family")

    @classmethod
    def of(cls, alphabet, rules: Iterable[tuple[str, str]]) -> "MonadicSystemSpec":
        """Finite system from ``(lhs, rhs)`` word pairs."""
        by_rhs = defaultdict(set)
        for lhs, rhs in rules:
            by_rhs[rhs].add(lhs)
        fams = tuple(RuleFamily(r, frozenset(ls)) for r, ls in by_rhs.items())
        return cls(frozenset(alphabet), fams)

    def merged(self) -> dict:
        """One LHS grammar per right-hand side (unions of the families)."""
        by_rhs = defaultdict(list)
        for fam in self.families:
            by_rhs[fam.rhs].append(fam.grammar())
        return {r: gs[0] if len(gs) == 1 else union(*gs) for r, gs in by_rhs.items()}


def ancestors(seed: Grammar | Iterable[str], sys: MonadicSystemSpec, label: str = "ancestors") -> Grammar:
    """Grammar for every word that rewrites into ``L(seed)`` under ``sys``.

    One nonterminal ``N_a`` per letter with ``N_a -> Z (Ĝ_a | a) Z`` and
    ``Z -> Z Ĝ_ε Z | ε``, where ``Ĝ_x`` is the LHS grammar for ``x`` with
    each terminal ``b`` replaced by ``N_b``.  ``Z`` and ``N_a`` are left
    out when they would be trivial.
    """
    if not isinstance(seed, Grammar):
        seed = Grammar.from_words(list(seed))
    lhs = sys.merged()
    for r, g in lhs.items():
        if g.accepts_empty():
            raise MonadicSpecError(f"left-hand-side language for {r!r} contains ε")
    letters = set(sys.alphabet) | set(seed.terminals)
    for g in lhs.values():
        letters |= g.terminals
    has_z = "" in lhs
    prods = {}

    def n_sym(b):
        if b in lhs or has_z:
            return ("N", b)
        return b

    for r, g in lhs.items():
        for a, bodies in g.productions.items():
            prods[("L", r, a)] = [tuple(n_sym(x) if isinstance(x, str) else ("L", r, x) for x in b)
                                  for b in bodies]
    z = (("Z",),) if has_z else ()
    if has_z:
        prods[("Z",)] = [(), (("Z",), ("L", "", lhs[""].start), ("Z",))]
    for b in letters:
        if n_sym(b) == b:
            continue
        alts = [z + (b,) + z]
        if b in lhs:
            alts.append(z + (("L", b, lhs[b].start),) + z)
        prods[("N", b)] = alts
    for a, bodies in seed.productions.items():
        prods[("seed", a)] = [tuple(n_sym(x) if isinstance(x, str) else ("seed", x) for x in b)
                              for b in bodies]
    prods[("S",)] = [(("seed", seed.start),)]
    if has_z and seed.accepts_empty():
        prods[("S",)].append((("Z",),))
    return build(("S",), prods, letters, label)
