"""Invertible pieces, the units presentation and piece-in-piece normalization.

Invertibility is decided with oracle help.  One fact does most of the work:
if ``t·w =_M 1`` then ``w`` is right invertible iff ``w·t =_M 1`` (any right
inverse ``s`` would give ``t = t·w·s = s``).  So once a one-sided inverse is
known, the other side reduces to a single oracle equality, which is exact
whenever the oracle is certified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from . import oracle, symbols
from .errors import BudgetExhausted
from .oracle import Budget, Verdict
from .presentation import SpecialPresentation


class Status(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Invertibility:
    status: Status
    witness: str | None = None   # an inverse on the requested side(s)
    reason: str = ""

    def __bool__(self):
        return self.status is Status.YES


def _candidates(p: SpecialPresentation, w: str):
    """Guesses for an inverse of ``w`` read off relator powers.

    If ``w`` sits at offset ``i`` of ``r^m`` the guess is the rest of the
    rotated power.  Guesses are always checked by the oracle.
    """
    seen = set()
    for r in p.relators:
        m = -(-len(w) // len(r))
        text = r * (m + 1)
        for i in range(len(r)):
            if text.startswith(w, i):
                s = text[i + len(w):i + m * len(r)]
                if s not in seen:
                    seen.add(s)
                    yield s


def _eq(p, u, v, budget) -> Verdict:
    return oracle.equal(p, u, v, budget).verdict


@lru_cache(maxsize=64)
def _unit_grammars(p: SpecialPresentation, max_rules: int):
    """``(Pref, Suf)`` grammars of the words equal to 1, or ``None``.

    Available when the certified system is monadic (every right-hand side
    has length at most one), since then the class of 1 is the ancestor
    language of ε.
    """
    cert = oracle._certified(p, max_rules)
    if cert is None or any(len(r) > 1 for _, r in cert.rules):
        return None
    from .lang import MonadicSystemSpec, Transducer, ancestors, rational_transduce

    anc = ancestors([""], MonadicSystemSpec.of(p.alphabet, cert.rules), "class(1)")
    letters = set(p.alphabet)
    trans = [(0, a, a, 0) for a in letters] + [(0, None, "", 1)] + [(1, a, "", 1) for a in letters]
    prefix = Transducer(2, frozenset(letters), frozenset(letters), tuple(trans), frozenset({0}), frozenset({1}))
    trans = [(0, a, "", 0) for a in letters] + [(0, None, "", 1)] + [(1, a, a, 1) for a in letters]
    suffix = Transducer(2, frozenset(letters), frozenset(letters), tuple(trans), frozenset({0}), frozenset({1}))
    return anc, rational_transduce(anc, prefix), rational_transduce(anc, suffix)


def _grammar_witness(anc, w: str, side: str, alphabet) -> str | None:
    from .lang import Nfa, intersect_regular, shortest_word

    if side == "right":
        n = Nfa.pattern([(set(c), False) for c in w] + [(set(alphabet), True)], alphabet)
    else:
        n = Nfa.pattern([(set(alphabet), True)] + [(set(c), False) for c in w], alphabet)
    word = shortest_word(intersect_regular(anc, n))
    if word is None:
        return None
    return word[len(w):] if side == "right" else word[:len(word) - len(w)]


def invertibility(p: SpecialPresentation, w: str, side: str = "both", budget: Budget | None = None) -> Invertibility:
    """Is ``w`` right, left or two-sided invertible in ``M``?"""
    if side not in ("left", "right", "both"):
        raise ValueError(f"bad side {side!r}")
    if not w:
        return Invertibility(Status.YES, "", "identity")
    used = set("".join(p.relators))
    if any(c not in used for c in w):
        return Invertibility(Status.NO, None, "contains a letter that occurs in no relator")
    cert = oracle.certified_system(p, budget)
    base = oracle.normal_form(cert.rules, w) if cert is not None else w
    if not base:
        return Invertibility(Status.YES, "", "equal to 1")

    right = left = None
    for s in _candidates(p, base):
        if right is None and _eq(p, base + s, "", budget) is Verdict.EQUAL:
            right = s
        if left is None and _eq(p, s + base, "", budget) is Verdict.EQUAL:
            left = s
        if right is not None and left is not None:
            break
    if right is None and left is None:
        grams = _unit_grammars(p, (budget or oracle.DEFAULT_BUDGET).max_rules)
        if grams is not None:
            from .lang import cyk_member

            anc, pref, suf = grams
            if side in ("right", "both"):
                if not cyk_member(pref, base):
                    return Invertibility(Status.NO, None, "not a prefix of any word equal to 1")
                right = _grammar_witness(anc, base, "right", p.alphabet)
            if side in ("left", "both") and right is None:
                if not cyk_member(suf, base):
                    return Invertibility(Status.NO, None, "not a suffix of any word equal to 1")
                left = _grammar_witness(anc, base, "left", p.alphabet)
        else:
            return _search(p, base, side, budget)

    one_sided = right if right is not None else left
    if side == "right" and right is not None:
        return Invertibility(Status.YES, right, "right witness")
    if side == "left" and left is not None:
        return Invertibility(Status.YES, left, "left witness")
    # an inverse on one side decides the other side exactly
    if right is not None and left is not None:
        return Invertibility(Status.YES, right, "two-sided witness")
    t = one_sided
    other = _eq(p, t + base, "", budget) if right is not None else _eq(p, base + t, "", budget)
    if other is Verdict.EQUAL:
        return Invertibility(Status.YES, t, "one-sided witness is two-sided")
    if other is Verdict.NOT_EQUAL:
        return Invertibility(Status.NO, None, "one-sided inverse is not two-sided")
    return Invertibility(Status.UNKNOWN, None, "could not compare the one-sided inverse")


def _search(p, w, side, budget) -> Invertibility:
    """Fallback: look for ``w`` as a prefix/suffix inside the class of 1."""
    budget = budget or oracle.DEFAULT_BUDGET
    cap = budget.length_cap(p, w)
    words = oracle.class_enum(p, "", cap, budget)
    right = next((u[len(w):] for u in words if u.startswith(w)), None)
    left = next((u[:len(u) - len(w)] for u in words if u.endswith(w)), None)
    if side == "right" and right is not None:
        return Invertibility(Status.YES, right, "found in class of 1")
    if side == "left" and left is not None:
        return Invertibility(Status.YES, left, "found in class of 1")
    t = right if right is not None else left
    if side == "both" and t is not None:
        u, v = (w + t, t + w) if right is not None else (t + w, w + t)
        if _eq(p, v, "", budget) is Verdict.EQUAL:
            return Invertibility(Status.YES, t, "found in class of 1")
        if _eq(p, v, "", budget) is Verdict.NOT_EQUAL:
            return Invertibility(Status.NO, None, "one-sided inverse is not two-sided")
    return Invertibility(Status.UNKNOWN, None, "budget exhausted")


# -- factorization and pieces ------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    factors: tuple[tuple[str, ...], ...]
    sources: tuple[str, ...]          # per relator: "computed" | "annotation"


def factorize_relators(p: SpecialPresentation, budget: Budget | None = None) -> Factorization:
    """Cut each relator into minimal invertible factors.

    With accumulated prefix ``x`` and remainder ``q·r``, the word ``r·x`` is
    a right inverse of ``q``; so ``q`` is invertible iff ``r·x·q =_M 1``.
    """
    out, sources = [], []
    for i, rel in enumerate(p.relators):
        ann = p.annotation(i)
        if ann is not None:
            out.append(tuple(ann))
            sources.append("annotation")
            continue
        factors = []
        x, rem = "", rel
        while rem:
            for k in range(1, len(rem) + 1):
                q, r = rem[:k], rem[k:]
                if not r:
                    break
                v = _eq(p, r + x + q, "", budget)
                if v is Verdict.EQUAL:
                    break
                if v is Verdict.UNKNOWN:
                    raise BudgetExhausted(
                        f"cannot decide invertibility of prefix {symbols.render_word(x + q)} "
                        f"of relator {symbols.render_word(rel)}; annotate the factorization")
            factors.append(q)
            x += q
            rem = r
        out.append(tuple(factors))
        sources.append("computed")
    return Factorization(tuple(out), tuple(sources))


def _is_biprefix(words) -> bool:
    ws = list(words)
    for u in ws:
        for v in ws:
            if u != v and (v.startswith(u) or v.endswith(u)):
                return False
    return True


@dataclass(frozen=True)
class PieceData:
    presentation: SpecialPresentation
    factorizations: tuple[tuple[str, ...], ...]
    pieces: tuple[str, ...]
    partition: tuple[tuple[str, ...], ...]
    units_alphabet: tuple[str, ...]
    phi: dict
    inverses: dict                      # piece -> tuple of pieces spelling an inverse
    certification: dict = field(default_factory=dict)   # decision -> "certified" | "budget-limited" | "annotation"

    @property
    def budget_limited(self) -> bool:
        return any(v == "budget-limited" for v in self.certification.values())

    def parse(self, w: str) -> tuple[str, ...] | None:
        """Unique factorization of ``w`` over Δ, or ``None`` if ``w ∉ Δ*``."""
        out = []
        i = 0
        while i < len(w):
            hit = next((d for d in self.pieces if w.startswith(d, i)), None)
            if hit is None:
                return None
            out.append(hit)
            i += len(hit)
        return tuple(out)

    def phi_word(self, w: str) -> str | None:
        parts = self.parse(w)
        if parts is None:
            return None
        return "".join(self.phi[d] for d in parts)

    def inverse_word(self, w: str) -> tuple[str, ...] | None:
        """Pieces of an inverse of ``w ∈ Δ*``: reversed product of piece inverses."""
        parts = self.parse(w)
        if parts is None:
            return None
        return tuple(x for d in reversed(parts) for x in self.inverses[d])

    def table(self) -> list[tuple[str, str]]:
        return [(d, self.phi[d]) for d in self.pieces]


def _minimal(p, v, right_of_prefix, budget) -> bool | None:
    """No nonempty proper prefix of invertible ``v`` is invertible.

    ``right_of_prefix(k)`` gives a right inverse of ``v[:k]``.
    """
    for k in range(1, len(v)):
        verdict = _eq(p, right_of_prefix(k) + v[:k], "", budget)
        if verdict is Verdict.EQUAL:
            return False
        if verdict is Verdict.UNKNOWN:
            return None
    return True


def compute_pieces(p: SpecialPresentation, factorization: Factorization | None = None,
                   budget: Budget | None = None) -> PieceData:
    if factorization is None:
        factorization = factorize_relators(p, budget)
    facts = factorization.factors
    cert: dict = {}
    inverses: dict = {}
    order: list[str] = []
    for i, fs in enumerate(facts):
        for j, f in enumerate(fs):
            if f not in inverses:
                inverses[f] = fs[j + 1:] + fs[:j]
                order.append(f)
        cert[f"factorization {i + 1}"] = "annotation" if factorization.sources[i] == "annotation" else "certified"
    factors = list(order)
    for f in factors:
        slice_ = oracle.class_enum(p, f, len(f), budget)
        cert[f"class of {symbols.render_word(f)}"] = "certified" if slice_.complete else "budget-limited"
        f_inv = "".join(inverses[f])
        for v in slice_:
            if v in inverses or not v:
                continue
            minimal = _minimal(p, v, lambda k: v[k:] + f_inv, budget)
            if minimal is None:
                cert[f"minimality of {symbols.render_word(v)}"] = "budget-limited"
                continue
            if minimal:
                inverses[v] = inverses[f]
                order.append(v)
    classes: list[list[str]] = []
    for d in order:
        for cls in classes:
            verdict = _eq(p, cls[0], d, budget)
            if verdict is Verdict.EQUAL:
                cls.append(d)
                break
            if verdict is Verdict.UNKNOWN:
                cert[f"{symbols.render_word(cls[0])} vs {symbols.render_word(d)}"] = "budget-limited"
        else:
            classes.append([d])
    units = tuple(symbols.units(i + 1) for i in range(len(classes)))
    phi = {d: units[k] for k, cls in enumerate(classes) for d in cls}
    if not _is_biprefix(order):
        cert["biprefix"] = "budget-limited"
    return PieceData(p, facts, tuple(order), tuple(tuple(c) for c in classes), units, phi, inverses, cert)


@dataclass(frozen=True)
class UnitsPresentation:
    alphabet: tuple[str, ...]
    relators: tuple[str, ...]
    piece_data: PieceData

    def render(self) -> str:
        rel = ", ".join(symbols.render_word(r) + "=1" for r in self.relators)
        return f"⟨{', '.join(symbols.render(b) for b in self.alphabet)} | {rel}⟩"


def units_presentation(pd: PieceData, p: SpecialPresentation | None = None) -> UnitsPresentation:
    rels = tuple("".join(pd.phi[f] for f in fs) for fs in pd.factorizations)
    return UnitsPresentation(pd.units_alphabet, rels, pd)


# -- piece-in-piece normalization -------------------------------------------

@dataclass(frozen=True)
class Violation:
    piece: str
    h1: str
    w: str
    h2: str


def violations(pd: PieceData) -> list[Violation]:
    """Per piece (Δ order), the longest-then-leftmost Δ*-subword strictly inside it of length > 1."""
    out = []
    for d in pd.pieces:
        found = None
        for length in range(len(d) - 2, 1, -1):
            for s in range(1, len(d) - length):
                w = d[s:s + length]
                if pd.parse(w) is not None:
                    found = Violation(d, d[:s], w, d[s + length:])
                    break
            if found:
                break
        if found:
            out.append(found)
    return out


def is_normalized(pd: PieceData) -> bool:
    return not violations(pd)


def sigma(pd: PieceData) -> int:
    return sum(len(d) - 1 for d in pd.pieces)


@dataclass(frozen=True)
class NormalizationStep:
    generator: str
    piece: str
    replaced: str
    inverse: str


@dataclass(frozen=True)
class Normalized:
    presentation: SpecialPresentation
    piece_data: PieceData
    steps: tuple[NormalizationStep, ...]

    @property
    def new_generators(self) -> tuple[str, ...]:
        return tuple(s.generator for s in self.steps)


def normalize(p: SpecialPresentation, budget: Budget | None = None, max_rounds: int = 64) -> Normalized:
    steps = []
    pd = compute_pieces(p, None, budget)
    for _ in range(max_rounds):
        found = violations(pd)
        if not found:
            ann = tuple(fs for fs in pd.factorizations)
            final = SpecialPresentation(p.alphabet, p.relators, ann)
            return Normalized(final, pd, tuple(steps))
        v = found[0]
        k = sum(1 for a in p.alphabet if symbols.is_fresh(a))
        g = symbols.fresh(k)
        w_inv = pd.inverse_word(v.w)
        inv_word = "".join(w_inv)
        for a, b in ((v.w + inv_word, ""), (inv_word + v.w, "")):
            if _eq(p, a, b, budget) is not Verdict.EQUAL:
                raise BudgetExhausted(f"could not verify an inverse of {symbols.render_word(v.w)}")
        facts = [list(fs) for fs in pd.factorizations]
        if not any(v.piece in fs for fs in facts):
            # a congruent non-factor piece: add a Tietze copy of a relator
            # in which a congruent factor is swapped for it
            cls = next(c for c in pd.partition if v.piece in c)
            for fs in pd.factorizations:
                hit = next((j for j, f in enumerate(fs) if f in cls), None)
                if hit is not None:
                    facts.append(list(fs[:hit]) + [v.piece] + list(fs[hit + 1:]))
                    break
        facts.append([g] + list(w_inv))
        facts.append(list(w_inv) + [g])
        replacement = v.h1 + g + v.h2
        new_facts = [[replacement if f == v.piece else f for f in fs] for fs in facts]
        rels = tuple("".join(fs) for fs in new_facts)
        p = SpecialPresentation(p.alphabet + (g,), rels)
        steps.append(NormalizationStep(g, v.piece, v.w, inv_word))
        pd = compute_pieces(p, None, budget)
    raise BudgetExhausted("normalization did not finish within the round limit")


# -- bicyclic witness -------------------------------------------------------

@dataclass(frozen=True)
class BicyclicWitness:
    u: str
    w1: str
    status: Status

    @property
    def pair(self) -> tuple[str, str]:
        return self.u, self.w1


def find_bicyclic(p: SpecialPresentation, pd: PieceData, budget: Budget | None = None) -> BicyclicWitness | None:
    """``(u, w1)`` with ``w1·u =_M 1 ≠_M u·w1``, from the shortest piece longer than one letter."""
    long_pieces = [d for d in pd.pieces if len(d) > 1]
    if not long_pieces:
        return None
    w = min(long_pieces, key=len)
    w1, w2 = w[0], w[1:]
    u = w2 + "".join(pd.inverse_word(w))
    if _eq(p, w1 + u, "", budget) is not Verdict.EQUAL:
        return BicyclicWitness(u, w1, Status.UNKNOWN)
    verdict = _eq(p, u + w1, "", budget)
    if verdict is Verdict.NOT_EQUAL:
        return BicyclicWitness(u, w1, Status.YES)
    if verdict is Verdict.EQUAL:
        return BicyclicWitness(u, w1, Status.NO)
    return BicyclicWitness(u, w1, Status.UNKNOWN)
