"""Context-free grammar and finite-automaton engine."""

from .automata import Nfa, Transducer
from .cnf import to_cnf
from .cyk import cyk_member
from .grammar import Grammar, all_words, build, is_empty, language_slice, shortest_word, trim
from .io import GrammarSyntaxError, parse_grammar, serialize_grammar
from .monadic import MonadicSpecError, MonadicSystemSpec, RuleFamily, ancestors
from .ops import (combine, concat, homomorphic_image, intersect_regular, rational_transduce,
                  reverse, star, substitute_terminals, union)
from .regex import RegexError, parse_regex

__all__ = [
    "Grammar", "Nfa", "Transducer", "MonadicSystemSpec", "RuleFamily", "MonadicSpecError",
    "GrammarSyntaxError", "RegexError",
    "build", "trim", "is_empty", "language_slice", "all_words", "shortest_word",
    "combine", "union", "concat", "star", "reverse", "substitute_terminals", "homomorphic_image",
    "intersect_regular", "rational_transduce", "to_cnf", "cyk_member", "ancestors",
    "parse_grammar", "serialize_grammar", "parse_regex",
]
