"""Special monoid presentations: parsing, serialization, validation.

File format (``#`` starts a comment)::

    generators: a b c
    relator: aabbacc
    relator: (ab)(ac)(ab)

A parenthesized relator carries a factorization into invertible pieces
which is trusted by :mod:`special_monoid.pieces`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import re

from . import symbols


class PresentationError(ValueError):
    """Malformed presentation text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class SpecialPresentation:
    alphabet: tuple[str, ...]
    relators: tuple[str, ...]
    annotations: tuple[tuple[str, ...] | None, ...] | None = field(default=None)

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise PresentationError("duplicate generator")
        if not self.relators:
            raise PresentationError("a presentation needs at least one relator")
        letters = set(self.alphabet)
        for i, r in enumerate(self.relators):
            if not r:
                raise PresentationError(f"relator {i + 1} is empty")
            bad = set(r) - letters
            if bad:
                names = ", ".join(sorted(symbols.render(c) for c in bad))
                raise PresentationError(f"relator {i + 1} uses undeclared symbol(s) {names}")
        if self.annotations is not None:
            if len(self.annotations) != len(self.relators):
                raise PresentationError("annotation count differs from relator count")
            for i, (r, factors) in enumerate(zip(self.relators, self.annotations)):
                if factors is not None and "".join(factors) != r:
                    raise PresentationError(f"annotation of relator {i + 1} does not spell the relator")
                if factors is not None and any(not f for f in factors):
                    raise PresentationError(f"relator {i + 1} has an empty factor")

    @classmethod
    def of(cls, alphabet, *relators: str) -> "SpecialPresentation":
        """Convenience constructor: ``SpecialPresentation.of("bc", "bc")``."""
        return cls(tuple(alphabet), tuple(relators))

    def annotation(self, i: int) -> tuple[str, ...] | None:
        if self.annotations is None:
            return None
        return self.annotations[i]

    @property
    def max_relator_length(self) -> int:
        return max(len(r) for r in self.relators)

    def render(self) -> str:
        rel = ", ".join(symbols.render_word(r) + "=1" for r in self.relators)
        return f"⟨{' '.join(symbols.render(a) for a in self.alphabet)} | {rel}⟩"


_KEY_RE = re.compile(r"\s*(generators|relator)\s*:(.*)$")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _parse_relator(body: str, lineno: int, col0: int):
    text = body.strip()
    col = col0 + (len(body) - len(body.lstrip()))
    if not text:
        raise PresentationError("empty relator", lineno, col)
    if "(" not in text and ")" not in text:
        if any(c.isspace() for c in text):
            raise PresentationError("whitespace inside relator word", lineno, col)
        return symbols.parse_word(text), None
    factors = []
    i = 0
    while i < len(text):
        if text[i] != "(":
            raise PresentationError("expected '(' in annotated relator", lineno, col + i)
        j = text.find(")", i)
        if j < 0:
            raise PresentationError("unclosed '('", lineno, col + i)
        inner = text[i + 1:j]
        if not inner or "(" in inner:
            raise PresentationError("empty or nested factor", lineno, col + i)
        factors.append(symbols.parse_word(inner))
        i = j + 1
    return "".join(factors), tuple(factors)


def parse_presentation(text: str) -> SpecialPresentation:
    alphabet: list[str] | None = None
    relators: list[str] = []
    annotations: list[tuple[str, ...] | None] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _KEY_RE.match(line)
        if m is None:
            raise PresentationError("expected 'generators:' or 'relator:'", lineno, 1)
        key, body = m.group(1), m.group(2)
        col0 = m.start(2) + 1
        if key == "generators":
            if alphabet is not None:
                raise PresentationError("second 'generators:' line", lineno, 1)
            if relators:
                raise PresentationError("'generators:' must precede relators", lineno, 1)
            alphabet = []
            for tok in body.split():
                sym = symbols.parse_word(tok)
                if len(sym) != 1:
                    raise PresentationError(f"generator {tok!r} is not a single symbol", lineno, col0)
                if sym in symbols.RESERVED_CHARS or (symbols.is_synthetic(sym) and not symbols.is_fresh(sym)):
                    raise PresentationError(f"reserved symbol {tok!r}", lineno, col0)
                if sym in alphabet:
                    raise PresentationError(f"duplicate generator {tok!r}", lineno, col0)
                alphabet.append(sym)
        else:
            if alphabet is None:
                raise PresentationError("relator before 'generators:' line", lineno, 1)
            word, factors = _parse_relator(body, lineno, col0)
            bad = [c for c in word if c not in alphabet]
            if bad:
                raise PresentationError(f"undeclared symbol {symbols.render(bad[0])!r}", lineno, col0)
            relators.append(word)
            annotations.append(factors)
    if alphabet is None:
        raise PresentationError("missing 'generators:' line")
    if not relators:
        raise PresentationError("no relators")
    ann = tuple(annotations) if any(a is not None for a in annotations) else None
    return SpecialPresentation(tuple(alphabet), tuple(relators), ann)


def serialize_presentation(p: SpecialPresentation) -> str:
    lines = ["generators: " + " ".join(symbols.render(a) for a in p.alphabet)]
    for i, r in enumerate(p.relators):
        factors = p.annotation(i)
        if factors is None:
            lines.append("relator: " + symbols.render_word(r))
        else:
            lines.append("relator: " + "".join(f"({symbols.render_word(f)})" for f in factors))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Diagnostic:
    level: str          # "error" | "warning" | "info"
    message: str

    def __str__(self):
        return f"{self.level}: {self.message}"


def validate(p: SpecialPresentation, budget=None) -> list[Diagnostic]:
    """Structural checks plus a search for trivial proper subwords of relators.

    A proper nonempty subword ``u`` of a relator with ``u =_M 1`` is reported
    as a warning; such relators are better split before computing pieces.
    """
    from . import oracle

    out: list[Diagnostic] = []
    used = set("".join(p.relators))
    for a in p.alphabet:
        if a not in used:
            out.append(Diagnostic("info", f"generator {symbols.render(a)} occurs in no relator (free factor)"))
    seen = set()
    for i, r in enumerate(p.relators):
        if r in seen:
            out.append(Diagnostic("info", f"relator {i + 1} repeats an earlier relator"))
        seen.add(r)
    for i, r in enumerate(p.relators):
        found = []
        for length in range(len(r) - 1, 0, -1):
            for s in range(len(r) - length + 1):
                u = r[s:s + length]
                if u in found or any(u in f for f in found):
                    continue
                if oracle.equal(p, u, "", budget).is_equal:
                    found.append(u)
        for u in found:
            out.append(Diagnostic(
                "warning",
                f"relator {symbols.render_word(r)} contains proper subword {symbols.render_word(u)} =_M 1"))
    return out
