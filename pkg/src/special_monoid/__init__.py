"""Word problems of finitely presented special monoids via context-free grammars."""

__version__ = "0.1.0"

from .oracle import Budget, class_enum, equal, normal_form, orient
from .pieces import compute_pieces, factorize_relators, find_bicyclic, invertibility, normalize, units_presentation
from .pipeline import classify_regular, decide, rational_member, rep_word_grammar, synthesize
from .presentation import SpecialPresentation, parse_presentation, serialize_presentation, validate

__all__ = [
    "SpecialPresentation", "parse_presentation", "serialize_presentation", "validate",
    "Budget", "equal", "class_enum", "normal_form", "orient",
    "invertibility", "factorize_relators", "compute_pieces", "units_presentation", "normalize",
    "find_bicyclic",
    "synthesize", "decide", "rep_word_grammar", "rational_member", "classify_regular",
]
