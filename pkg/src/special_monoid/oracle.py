"""Ground-truth word equality for small special monoids.

Three routes, tried in order:

1. the special system ``{w_i -> ε}`` is itself confluent: compare normal forms;
2. a bounded shortlex completion of it succeeds: compare normal forms in the
   completed (still length non-increasing) system;
3. bidirectional breadth-first search over the Thue congruence with an
   intermediate-length cap.

Only routes 1 and 2 may answer ``NOT_EQUAL``.  Every ``EQUAL`` verdict
carries a trace of words that :func:`replay` checks step by step.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
import itertools

from .presentation import SpecialPresentation

Rule = tuple[str, str]


@dataclass(frozen=True)
class Budget:
    """Search limits.  ``max_length=None`` selects the default formula."""

    max_length: int | None = None
    max_states: int = 2_000_000
    max_rules: int = 256

    def length_cap(self, p: SpecialPresentation, *words: str) -> int:
        if self.max_length is not None:
            return self.max_length
        longest = max((len(w) for w in words), default=0)
        return max(16, 2 * p.max_relator_length + longest)


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class SpecialRewritingSystem:
    rules: tuple[Rule, ...]
    presentation: SpecialPresentation


def orient(p: SpecialPresentation) -> SpecialRewritingSystem:
    return SpecialRewritingSystem(tuple((r, "") for r in p.relators), p)


# -- rewriting ---------------------------------------------------------------

def _step(w: str, rules) -> tuple[int, Rule] | None:
    """Leftmost redex; among rules matching there, the shortest one."""
    best = None
    for rule in rules:
        i = w.find(rule[0])
        if i < 0:
            continue
        if best is None or (i, len(rule[0])) < (best[0], len(best[1][0])):
            best = (i, rule)
    return best


def _normal_form_trace(w: str, rules) -> list[str]:
    trace = [w]
    while True:
        hit = _step(w, rules)
        if hit is None:
            return trace
        i, (lhs, rhs) = hit
        w = w[:i] + rhs + w[i + len(lhs):]
        trace.append(w)


def _reduce(w: str, rules) -> str:
    return _normal_form_trace(w, rules)[-1]


def normal_form(rs: SpecialRewritingSystem | tuple, w: str) -> str:
    rules = rs.rules if isinstance(rs, SpecialRewritingSystem) else rs
    return _reduce(w, rules)


def _critical_pairs(rules):
    for (l1, r1), (l2, r2) in itertools.product(rules, repeat=2):
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] == l2[:k]:
                yield (l1 + l2[k:],
                       r1 + l2[k:],
                       l1[:-k] + r2)
        if l1 != l2:
            i = l1.find(l2)
            while i >= 0:
                yield l1, r1, l1[:i] + r2 + l1[i + len(l2):]
                i = l1.find(l2, i + 1)


class Confluence(Enum):
    CONFLUENT = "confluent"
    NOT_CONFLUENT = "not_confluent"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ConfluenceResult:
    status: Confluence
    witness: tuple[str, str, str] | None = None   # (overlap word, nf one way, nf other way)

    def __bool__(self):
        return self.status is Confluence.CONFLUENT


def is_confluent(rs: SpecialRewritingSystem | tuple) -> ConfluenceResult:
    """Critical-pair test; the systems handled here are terminating."""
    rules = rs.rules if isinstance(rs, SpecialRewritingSystem) else rs
    for word, a, b in _critical_pairs(rules):
        na, nb = _reduce(a, rules), _reduce(b, rules)
        if na != nb:
            return ConfluenceResult(Confluence.NOT_CONFLUENT, (word, na, nb))
    return ConfluenceResult(Confluence.CONFLUENT)


# -- completion --------------------------------------------------------------

def _shortlex_key(order):
    rank = {a: i for i, a in enumerate(order)}
    return lambda w: (len(w), [rank[c] for c in w])


def complete(p: SpecialPresentation, max_rules: int = 256) -> tuple[Rule, ...] | None:
    """Bounded shortlex completion of ``{w_i -> ε}``.

    Returns an interreduced confluent system, or ``None`` when more than
    ``max_rules`` rules would be needed.  Rules never increase length.
    """
    return _complete(p, max_rules)


@lru_cache(maxsize=256)
def _complete(p: SpecialPresentation, max_rules: int):
    key = _shortlex_key(p.alphabet)

    def orient_pair(u, v):
        return (u, v) if key(u) > key(v) else (v, u)

    rules: list[Rule] = []
    pending = [(r, "") for r in p.relators]
    for _ in range(10_000):
        while pending:
            u, v = pending.pop()
            u, v = _reduce(u, rules), _reduce(v, rules)
            if u == v:
                continue
            new = orient_pair(u, v)
            kept = []
            for lhs, rhs in rules:
                if new[0] in lhs:
                    pending.append((lhs, rhs))
                else:
                    kept.append((lhs, rhs))
            rules = [(lhs, _reduce(rhs, kept + [new])) for lhs, rhs in kept] + [new]
            if len(rules) > max_rules:
                return None
        joined = True
        for _, a, b in _critical_pairs(rules):
            na, nb = _reduce(a, rules), _reduce(b, rules)
            if na != nb:
                pending.append((na, nb))
                joined = False
        if joined:
            rules.sort(key=lambda r: key(r[0]))
            return tuple(rules)
    return None


@dataclass(frozen=True)
class CertifiedSystem:
    """A confluent, length non-increasing system defining the monoid."""

    rules: tuple[Rule, ...]
    method: str     # "confluent" | "completion"


@lru_cache(maxsize=256)
def _certified(p: SpecialPresentation, max_rules: int) -> CertifiedSystem | None:
    rs = orient(p)
    if is_confluent(rs):
        return CertifiedSystem(rs.rules, "confluent")
    rules = _complete(p, max_rules)
    if rules is None:
        return None
    return CertifiedSystem(rules, "completion")


def certified_system(p: SpecialPresentation, budget: Budget | None = None) -> CertifiedSystem | None:
    budget = budget or DEFAULT_BUDGET
    return _certified(p, budget.max_rules)


# -- verdicts ----------------------------------------------------------------

class Verdict(Enum):
    EQUAL = "equal"
    NOT_EQUAL = "not_equal"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class OracleVerdict:
    verdict: Verdict
    trace: tuple[str, ...] | None = None
    rules: tuple[Rule, ...] = ()
    method: str = ""

    @property
    def is_equal(self) -> bool:
        return self.verdict is Verdict.EQUAL

    @property
    def is_not_equal(self) -> bool:
        return self.verdict is Verdict.NOT_EQUAL

    @property
    def is_unknown(self) -> bool:
        return self.verdict is Verdict.UNKNOWN


def _one_step(x: str, y: str, rules) -> bool:
    """Is ``x -> y`` or ``y -> x`` a single application of some rule?"""
    for lhs, rhs in rules:
        for a, b in ((x, y), (y, x)):
            if len(a) - len(lhs) != len(b) - len(rhs):
                continue
            i = a.find(lhs)
            while i >= 0:
                if a[:i] + rhs + a[i + len(lhs):] == b:
                    return True
                i = a.find(lhs, i + 1)
    return False


def replay(trace, rules) -> bool:
    """Check that consecutive trace words differ by one rule application."""
    return all(_one_step(x, y, rules) for x, y in zip(trace, trace[1:]))


def _neighbours(x: str, relators, cap: int):
    for r in relators:
        i = x.find(r)
        while i >= 0:
            yield x[:i] + x[i + len(r):]
            i = x.find(r, i + 1)
    for r in relators:
        if len(x) + len(r) <= cap:
            for i in range(len(x) + 1):
                yield x[:i] + r + x[i:]


def _bfs_equal(relators, u: str, v: str, cap: int, max_states: int):
    """Bidirectional BFS; returns a trace u..v or None."""
    if u == v:
        return (u,)
    parents = ({u: None}, {v: None})
    frontiers = (deque([u]), deque([v]))
    visited = 2
    while frontiers[0] and frontiers[1]:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        frontier, mine, other = frontiers[side], parents[side], parents[1 - side]
        for _ in range(len(frontier)):
            x = frontier.popleft()
            for y in _neighbours(x, relators, cap):
                if y in mine:
                    continue
                mine[y] = x
                if y in other:
                    return _join(parents, y)
                frontier.append(y)
                visited += 1
                if visited > max_states:
                    return None
    return None


def _join(parents, meet):
    def path(par, x):
        out = []
        while x is not None:
            out.append(x)
            x = par[x]
        return out
    left = path(parents[0], meet)[::-1]
    right = path(parents[1], meet)
    return tuple(left + right[1:])


def equal(p: SpecialPresentation, u: str, v: str, budget: Budget | None = None) -> OracleVerdict:
    budget = budget or DEFAULT_BUDGET
    if u == v:
        return OracleVerdict(Verdict.EQUAL, (u,), orient(p).rules, "reflexive")
    cert = _certified(p, budget.max_rules)
    if cert is not None:
        tu = _normal_form_trace(u, cert.rules)
        tv = _normal_form_trace(v, cert.rules)
        if tu[-1] != tv[-1]:
            return OracleVerdict(Verdict.NOT_EQUAL, None, cert.rules, cert.method)
        return OracleVerdict(Verdict.EQUAL, tuple(tu + tv[-2::-1]), cert.rules, cert.method)
    cap = budget.length_cap(p, u, v)
    trace = _bfs_equal(p.relators, u, v, cap, budget.max_states)
    rules = orient(p).rules
    if trace is None:
        return OracleVerdict(Verdict.UNKNOWN, None, rules, "bfs")
    return OracleVerdict(Verdict.EQUAL, trace, rules, "bfs")


@dataclass(frozen=True)
class ClassSlice:
    words: frozenset
    complete: bool

    def __iter__(self):
        return iter(sorted(self.words, key=lambda w: (len(w), w)))

    def __contains__(self, w):
        return w in self.words

    def __len__(self):
        return len(self.words)


def _reverse_closure(start: str, rules, maxlen: int, max_states: int):
    """All ``x`` with ``x ->* start`` and ``|x| <= maxlen``."""
    seen = {start}
    queue = deque([start])
    while queue:
        y = queue.popleft()
        for lhs, rhs in rules:
            if len(y) - len(rhs) + len(lhs) > maxlen:
                continue
            if rhs:
                positions = []
                i = y.find(rhs)
                while i >= 0:
                    positions.append(i)
                    i = y.find(rhs, i + 1)
            else:
                positions = range(len(y) + 1)
            for i in positions:
                x = y[:i] + lhs + y[i + len(rhs):]
                if x not in seen:
                    seen.add(x)
                    queue.append(x)
                    if len(seen) > max_states:
                        return seen, False
    return seen, True


def class_enum(p: SpecialPresentation, w: str, maxlen: int, budget: Budget | None = None) -> ClassSlice:
    """Words of length ``<= maxlen`` congruent to ``w``."""
    budget = budget or DEFAULT_BUDGET
    cert = _certified(p, budget.max_rules)
    if cert is not None:
        nf = _reduce(w, cert.rules)
        if len(nf) > maxlen:
            return ClassSlice(frozenset(), True)
        seen, finished = _reverse_closure(nf, cert.rules, maxlen, budget.max_states)
        return ClassSlice(frozenset(seen), finished)
    cap = max(budget.length_cap(p, w), maxlen)
    seen = {w}
    queue = deque([w])
    while queue and len(seen) <= budget.max_states:
        x = queue.popleft()
        for y in _neighbours(x, p.relators, cap):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return ClassSlice(frozenset(x for x in seen if len(x) <= maxlen), False)
