"""Word-problem grammars for a normalized special presentation.

Stages, each a grammar built from the previous ones:

* ``WP_B``         word problem of the group of units (from a units spec)
* ``Rep_B(b)``     words over B equal in U(M) to a letter or to 1
* ``RepΔ(δ)``      pull-back of ``Rep_B(φ(δ))`` along b_i ↦ Δ_i
* ``R_Δ``          monadic system ``RepΔ(p) \\ {p, ε} → p`` for |p| ≤ 1
* ``Rep(δ)``       ancestors of ``RepΔ(δ)`` under ``R_Δ``: every word equal to δ
* ``InvP``         ``{u#v^rev : u, v invertible, u =_M v}``
* ``WP``           ancestors of ``#`` under ``(InvP \\ {#}) ∪ {a#a} → #``

The context-free class is the only one shipped; every language operation
goes through :class:`LanguageClass` so that another class with the same
closure properties could be swapped in.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import oracle, symbols
from .errors import PresentationNotNormalized, UnitsSpecError
from .lang import (Grammar, MonadicSystemSpec, Nfa, RuleFamily, Transducer, ancestors, cyk_member,
                   intersect_regular, is_empty, parse_regex, rational_transduce, reverse,
                   substitute_terminals)
from .pieces import PieceData, Status, compute_pieces, invertibility, is_normalized, units_presentation
from .presentation import SpecialPresentation
from .symbols import HASH
from .units import UnitsWpSpec, units_wp_grammar

log = logging.getLogger(__name__)


class LanguageClass:
    """The seam between the constructions and a concrete language class."""

    name = "context-free"

    def intersect_regular(self, g, nfa):
        return intersect_regular(g, nfa)

    def transduce(self, g, t, direction):
        return rational_transduce(g, t, direction)

    def substitute(self, g, sub, label=None):
        return substitute_terminals(g, sub, label)

    def reverse(self, g):
        return reverse(g)

    def ancestors(self, seed, sys, label):
        return ancestors(seed, sys, label)

    def member(self, g, w):
        return cyk_member(g, w)


CONTEXT_FREE = LanguageClass()


def _erase_marked_suffix(g: Grammar, alphabet, lc: LanguageClass = CONTEXT_FREE, label: str = "") -> Grammar:
    """``{u : u#x ∈ L(g)}``, by priming letters after ``#`` and erasing them.

    The primed copy ``A′`` is disjoint from ``A ∪ {#}``; the unpriming
    homomorphism's preimage gives every priming, intersecting with
    ``A*#A′*`` keeps the one that primes exactly the suffix.
    """
    alphabet = tuple(alphabet)
    primes = {a: symbols.primed(i) for i, a in enumerate(alphabet)}
    unprime = {a: a for a in alphabet}
    unprime[HASH] = HASH
    unprime.update({primes[a]: a for a in alphabet})
    t = Transducer.homomorphism(unprime, outputs=set(alphabet) | {HASH})
    pre = lc.transduce(g, t, "preimage")
    shaped = lc.intersect_regular(pre, Nfa.pattern([(set(alphabet), True), ({HASH}, False),
                                                    (set(primes.values()), True)]))
    erase = {a: a for a in alphabet}
    erase[HASH] = ""
    erase.update({p: "" for p in primes.values()})
    return lc.substitute(shaped, erase, label).with_terminals(alphabet)


def rep_units(wp_b: Grammar, B, target: str, lc: LanguageClass = CONTEXT_FREE) -> Grammar:
    """``{u ∈ B* : u =_U target}`` for a letter of B or ε."""
    B = tuple(B)
    n = Nfa.pattern([(set(B), True), ({HASH}, False)] + [({c}, False) for c in reversed(target)],
                    set(B) | {HASH})
    return _erase_marked_suffix(lc.intersect_regular(wp_b, n), B, lc,
                                f"Rep_B({symbols.render_word(target) or 'ε'})")


def rep_delta(pd: PieceData, reps_units: dict, target: str, lc: LanguageClass = CONTEXT_FREE) -> Grammar:
    """``RepΔ(target) = φ^{-1}(Rep_B(φ(target)))`` by the finite substitution b_i ↦ Δ_i."""
    b = pd.phi[target] if target else ""
    sub = {pd.units_alphabet[k]: list(cls) for k, cls in enumerate(pd.partition)}
    out = lc.substitute(reps_units[b], sub, f"RepΔ({symbols.render_word(target) or 'ε'})")
    return out.with_terminals(pd.presentation.alphabet)


def build_r_delta(pd: PieceData, rep_delta_of: dict) -> MonadicSystemSpec:
    """Rule families ``RepΔ(p) \\ {p, ε} → p`` for ``p ∈ Δ ∪ {ε}`` with ``|p| ≤ 1``."""
    alphabet = tuple(pd.presentation.alphabet)
    fams = []
    for p in [""] + [d for d in pd.pieces if len(d) == 1]:
        lhs = intersect_regular(rep_delta_of[p], Nfa.excluding({p, ""}, alphabet))
        if not is_empty(lhs):
            fams.append(RuleFamily(p, lhs, allow_length_preserving=True))
    return MonadicSystemSpec(frozenset(alphabet), tuple(fams))


@dataclass
class PipelineArtifacts:
    presentation: SpecialPresentation
    piece_data: PieceData
    units_wp: Grammar | None = None
    rep_units: dict = field(default_factory=dict)
    rep_delta: dict = field(default_factory=dict)
    r_delta: MonadicSystemSpec | None = None
    rep_piece: dict = field(default_factory=dict)
    hearts: dict = field(default_factory=dict)        # δ -> (♥_δ, ♥̃_δ)
    rho: dict = field(default_factory=dict)           # marker -> word over B ∪ {#}
    t: Grammar | None = None
    invp: Grammar | None = None
    wp: Grammar | None = None
    provenance: dict = field(default_factory=dict)
    lc: LanguageClass = CONTEXT_FREE
    _invertible: Grammar | None = None

    @property
    def alphabet(self):
        return self.presentation.alphabet

    @property
    def budget_limited(self) -> bool:
        return bool(self.provenance.get("budget_limited"))

    @property
    def invertible_language(self) -> Grammar:
        if self._invertible is None:
            self._invertible = invertible_words_grammar(self)
        return self._invertible


def _check_units(pd: PieceData, wp_b: Grammar, budget=None):
    """Reject a units spec that contradicts the presentation.

    The relators of the units presentation must be trivial; and for
    generators ``b_i, b_j`` (and ``b_i`` vs 1) the spec must not call equal
    what the oracle proves different on piece representatives, or the
    reverse.  This catches a spec whose group is a proper quotient of U(M)
    on the generators, though not in general.
    """
    up = units_presentation(pd)
    for r in up.relators:
        if not cyk_member(wp_b, r + HASH):
            raise UnitsSpecError(f"units relator {symbols.render_word(r)} is not the identity "
                                 "under the supplied units spec")
    p = pd.presentation
    reps = [("", "")] + [(b, cls[0]) for b, cls in zip(pd.units_alphabet, pd.partition)]
    for i, (bi, di) in enumerate(reps):
        for bj, dj in reps[i + 1:]:
            spec_says = cyk_member(wp_b, bi + HASH + bj[::-1])
            verdict = oracle.equal(p, di, dj, budget).verdict
            if verdict is oracle.Verdict.UNKNOWN or spec_says == (verdict is oracle.Verdict.EQUAL):
                continue
            raise UnitsSpecError(
                f"units spec says {symbols.render_word(bi) or '1'} {'=' if spec_says else '≠'} "
                f"{symbols.render_word(bj) or '1'}, but the oracle proves "
                f"{symbols.render_word(di) or 'ε'} {'≠' if spec_says else '='} {symbols.render_word(dj) or 'ε'}")


def synthesize(p: SpecialPresentation, spec: UnitsWpSpec | Grammar, budget=None,
               pd: PieceData | None = None, lc: LanguageClass = CONTEXT_FREE) -> PipelineArtifacts:
    """Build every grammar for ``p``; ``p`` must already be normalized."""
    pd = pd or compute_pieces(p, None, budget)
    if not is_normalized(pd):
        raise PresentationNotNormalized(
            "some piece contains an invertible subword longer than one letter; run normalize first")
    arts = PipelineArtifacts(p, pd, lc=lc)
    arts.provenance = {"language_class": lc.name, "pieces": dict(pd.certification),
                       "budget_limited": pd.budget_limited}
    if pd.budget_limited:
        log.warning("piece data is budget-limited; decisions carry a warning flag")
    B = pd.units_alphabet
    wp_b = spec if isinstance(spec, Grammar) else units_wp_grammar(spec, B)
    arts.provenance["units"] = "grammar" if isinstance(spec, Grammar) else spec.kind
    _check_units(pd, wp_b, budget)
    arts.units_wp = wp_b
    for target in ("",) + tuple(B):
        arts.rep_units[target] = rep_units(wp_b, B, target, lc)
    for d in ("",) + pd.pieces:
        arts.rep_delta[d] = rep_delta(pd, arts.rep_units, d, lc)
    arts.r_delta = build_r_delta(pd, arts.rep_delta)
    for d in pd.pieces:
        arts.rep_piece[d] = lc.ancestors(arts.rep_delta[d], arts.r_delta, f"Rep({symbols.render_word(d)})")
    arts.invp = invp_grammar(arts)
    arts.wp = wp_grammar(arts.invp, p.alphabet, lc)
    return arts


def invp_grammar(arts: PipelineArtifacts) -> Grammar:
    """``InvP`` via ``T = ϱ^{-1}(WP_B) ∩ ♥*#♥̃*``.

    ``T`` is then mapped by the substitution ``♥_δ ↦ Rep(δ)``,
    ``♥̃_δ ↦ Rep(δ)^rev``, which is what the ancestor step over the marker
    rules computes once the markers themselves are discarded.
    """
    pd, lc = arts.piece_data, arts.lc
    if not is_normalized(pd):
        raise PresentationNotNormalized("InvP needs a normalized presentation")
    hearts, rho = {}, {HASH: HASH}
    for k, d in enumerate(pd.pieces):
        h, hr = symbols.heart(k), symbols.heart_rev(k)
        hearts[d] = (h, hr)
        rho[h] = pd.phi[d]
        rho[hr] = pd.phi[d]
    arts.hearts, arts.rho = hearts, rho
    t = Transducer.homomorphism(rho, outputs=set(pd.units_alphabet) | {HASH})
    pre = lc.transduce(arts.units_wp, t, "preimage")
    fwd = {h for h, _ in hearts.values()}
    bwd = {hr for _, hr in hearts.values()}
    arts.t = lc.intersect_regular(pre, Nfa.pattern([(fwd, True), ({HASH}, False), (bwd, True)]))
    sub = {HASH: HASH}
    for d, (h, hr) in hearts.items():
        sub[h] = arts.rep_piece[d]
        sub[hr] = lc.reverse(arts.rep_piece[d])
    out = lc.substitute(arts.t, sub, "InvP")
    return out.with_terminals(set(pd.presentation.alphabet) | {HASH})


def wp_grammar(invp: Grammar, alphabet, lc: LanguageClass = CONTEXT_FREE) -> Grammar:
    """``WP = ⟨#⟩`` under ``{u#v^rev → #} ∪ {a#a → #}``; the identity rule ``# → #`` is left out."""
    alphabet = tuple(alphabet)
    letters = set(alphabet) | {HASH}
    lhs_invp = intersect_regular(invp, Nfa.excluding({HASH}, letters))
    mirror = Grammar.from_words([a + HASH + a for a in alphabet], letters)
    sys = MonadicSystemSpec(frozenset(letters), (RuleFamily(HASH, lhs_invp), RuleFamily(HASH, mirror)))
    return lc.ancestors([HASH], sys, "WP").with_terminals(letters)


# -- queries ---------------------------------------------------------------

def _check_word(arts, w, what="word"):
    bad = [c for c in w if c not in arts.alphabet]
    if bad:
        raise ValueError(f"{what} uses symbol(s) outside the alphabet: "
                         + ", ".join(sorted(set(map(symbols.render, bad)))))


def decide(arts: PipelineArtifacts, u: str, v: str) -> bool:
    _check_word(arts, u, "u")
    _check_word(arts, v, "v")
    if arts.budget_limited:
        log.warning("deciding with budget-limited artifacts")
    return arts.lc.member(arts.wp, u + HASH + v[::-1])


def rep_word_grammar(arts: PipelineArtifacts, w: str) -> Grammar:
    """The congruence class of ``w`` as a grammar over A."""
    _check_word(arts, w)
    A = arts.alphabet
    n = Nfa.pattern([(set(A), True), ({HASH}, False)] + [({c}, False) for c in reversed(w)],
                    set(A) | {HASH})
    return _erase_marked_suffix(arts.lc.intersect_regular(arts.wp, n), A, arts.lc,
                                f"Rep({symbols.render_word(w) or 'ε'})")


def rational_preimage(arts: PipelineArtifacts, k: Nfa) -> Grammar:
    """``π^{-1}(π(K))``: all words equal in M to some member of ``K``."""
    A = arts.alphabet
    krev = k.reverse().without_epsilon()
    shape = Nfa.pattern([(set(A), True), ({HASH}, False)], set(A) | {HASH}).concat(
        Nfa(krev.n_states, frozenset(set(A) | {HASH}), krev.transitions, krev.initial, krev.accepting))
    return _erase_marked_suffix(arts.lc.intersect_regular(arts.wp, shape), A, arts.lc, "π⁻¹π(K)")


def rational_member(arts: PipelineArtifacts, w: str, k: Nfa | str) -> bool:
    _check_word(arts, w)
    if isinstance(k, str):
        k = parse_regex(k, arts.alphabet)
    return arts.lc.member(rational_preimage(arts, k), w)


def invertible_words_grammar(arts: PipelineArtifacts) -> Grammar:
    """The invertible words, as ``π^{-1}(π(Δ*))``."""
    k = Nfa.star_of(arts.piece_data.pieces, arts.alphabet)
    return rational_preimage(arts, k).relabel("invertible words")


def is_invertible_cf(arts: PipelineArtifacts, w: str) -> bool:
    _check_word(arts, w)
    return arts.lc.member(arts.invertible_language, w)


# -- finiteness diagnostic --------------------------------------------------

class Classification:
    FINITE_GROUP = "FiniteGroup"
    NOT_FINITE_GROUP = "NotFiniteGroup"
    UNKNOWN = "Unknown"


def _irreducibles_finite(rules, alphabet) -> bool:
    """Is the set of words avoiding every left-hand side finite?

    Aho-Corasick automaton over the left-hand sides; the language is infinite
    iff a cycle of live states is reachable from the root.
    """
    goto = [{}]
    dead = [False]
    for lhs, _ in rules:
        s = 0
        for c in lhs:
            if c not in goto[s]:
                goto.append({})
                dead.append(False)
                goto[s][c] = len(goto) - 1
            s = goto[s][c]
        dead[s] = True
    fail = [0] * len(goto)
    order = []
    queue = list(goto[0].values())
    while queue:
        s = queue.pop(0)
        order.append(s)
        for c, t in goto[s].items():
            f = fail[s]
            while f and c not in goto[f]:
                f = fail[f]
            fail[t] = goto[f][c] if c in goto[f] and goto[f][c] != t else 0
            dead[t] = dead[t] or dead[fail[t]]
            queue.append(t)

    def step(s, c):
        while s and c not in goto[s]:
            s = fail[s]
        return goto[s].get(c, 0)

    colour = [0] * len(goto)   # 0 new, 1 on stack, 2 done
    stack = [(0, iter(alphabet))]
    colour[0] = 1
    while stack:
        s, it = stack[-1]
        c = next(it, None)
        if c is None:
            colour[s] = 2
            stack.pop()
            continue
        t = step(s, c)
        if dead[t]:
            continue
        if colour[t] == 1:
            return False
        if colour[t] == 0:
            colour[t] = 1
            stack.append((t, iter(alphabet)))
    return True


def classify_regular(p: SpecialPresentation, pd: PieceData | None = None, budget=None) -> str:
    """Diagnostic: is M a finite group (equivalently, is its word problem regular)?"""
    statuses = [invertibility(p, a, "both", budget).status for a in p.alphabet]
    if Status.NO in statuses:
        return Classification.NOT_FINITE_GROUP
    cert = oracle.certified_system(p, budget)
    if cert is None:
        return Classification.UNKNOWN
    finite = _irreducibles_finite(cert.rules, p.alphabet)
    if not finite:
        return Classification.NOT_FINITE_GROUP
    if all(s is Status.YES for s in statuses):
        return Classification.FINITE_GROUP
    return Classification.UNKNOWN
