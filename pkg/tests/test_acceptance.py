"""Acceptance criteria 1-9, one PASS/FAIL line each (see the terminal summary)."""

import random
import time

import pytest

from special_monoid import oracle, symbols
from special_monoid.lang import Nfa, all_words, cyk_member, language_slice
from special_monoid.pieces import (Status, compute_pieces, factorize_relators, find_bicyclic, invertibility,
                                   normalize, sigma, violations)
from special_monoid.pipeline import (Classification, classify_regular, decide, rational_preimage, rep_word_grammar,
                                     synthesize)
from special_monoid.symbols import fresh
from special_monoid.units import cyclic, finite, free, load_units_spec, trivial

import test_ancestors
import test_lang
from conftest import ABC_B2, ACCEPTANCE, BICYCLIC, CYCLIC3, DATA, EX1, EX2, FREE1
from lang_fixtures import GRAMMARS

b1, b2 = symbols.units(1), symbols.units(2)


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[n] = line
    print(line)
    assert ok, line


def fresh_caches():
    oracle._certified.cache_clear()


def dyck(w):
    d = 0
    for ch in w:
        d += 1 if ch == "b" else -1
        if d < 0:
            return False
    return d == 0


def test_1_factorization_goldens():
    details, ok = [], True
    for p, fac, delta in [(EX1, (("aabbacc",), ("ab", "ac", "ab")), {"aabbacc", "ab", "ac"}),
                          (EX2, (("aaabccc",), ("aabcc", "abc", "aabcc")), {"aaabccc", "aabcc", "abc"})]:
        fresh_caches()
        t = time.perf_counter()
        f = factorize_relators(p)
        pd = compute_pieces(p, f)
        dt = time.perf_counter() - t
        good = f.factors == fac and set(pd.pieces) == delta and dt < 10
        ok &= good
        details.append(f"{'ok' if good else 'bad'} {dt:.2f}s")
    record(1, ok, "factorizations and Δ of both examples; " + ", ".join(details) + " (limit 10 s)")


def test_2_normalization_goldens():
    p0, p1 = fresh(0), fresh(1)
    n1, n2 = normalize(EX1), normalize(EX2)
    ok1 = set(n1.piece_data.pieces) == {p0, p1, "ab", "ac", "a" + p0 + "b" + p1 + "c"} and sigma(n1.piece_data) == 6
    apc, aqc, abc = "a" + p0 + "c", "a" + p1 + "c", "abc"
    six = {apc, aqc + abc + aqc, p0 + abc + aqc, abc + aqc + p0, p1 + aqc + aqc, aqc + aqc + p1}
    ok2 = set(n2.presentation.relators) == six and sigma(n2.piece_data) == 6
    clean = not violations(n1.piece_data) and not violations(n2.piece_data)
    record(2, ok1 and ok2 and clean,
           f"example 1 pieces/Σ=6 {ok1}, example 2 six relators/Σ=6 {ok2}, piece-in-piece check {clean}")


@pytest.fixture(scope="module")
def bicyclic_arts():
    return synthesize(BICYCLIC, trivial())


def test_3_bicyclic_end_to_end(bicyclic_arts):
    a = bicyclic_arts
    rs = oracle.orient(BICYCLIC)
    assert oracle.is_confluent(rs)
    nf = lambda w: oracle.normal_form(rs, w)                              # noqa: E731
    ws = list(all_words("bc", 8))
    pairs = [(u, v) for u in ws for v in ws if len(u) + len(v) <= 8]
    rng = random.Random(2024)
    for _ in range(10_000):
        n = rng.choice((9, 10))
        k = rng.randint(0, n)
        u = "".join(rng.choice("bc") for _ in range(k))
        v = "".join(rng.choice("bc") for _ in range(n - k))
        pairs.append((u, v))
    bad = sum(decide(a, u, v) != (nf(u) == nf(v)) for u, v in pairs)
    dyck_ok = language_slice(rep_word_grammar(a, ""), 10) == {w for w in all_words("bc", 10) if dyck(w)}
    record(3, bad == 0 and dyck_ok,
           f"{len(pairs)} pairs, {bad} mismatches vs confluent oracle; Rep(ε) ∩ Σ^≤10 = Dyck: {dyck_ok}")


def test_4_finite_group():
    a = synthesize(CYCLIC3, load_units_spec(DATA / "z3.us"))
    ws = list(all_words("a", 12))
    bad = sum(decide(a, u, v) != ((len(u) - len(v)) % 3 == 0 and oracle.equal(CYCLIC3, u, v).is_equal)
              for u in ws for v in ws if len(u) + len(v) <= 12)
    cls = classify_regular(CYCLIC3)
    record(4, bad == 0 and cls == Classification.FINITE_GROUP,
           f"all |u|+|v| ≤ 12: {bad} mismatches; classify_regular = {cls}")


def test_5_group_case():
    a = synthesize(FREE1, load_units_spec(DATA / "free1.us"))
    powers = all(decide(a, "a" * n + "b" * n, "") and decide(a, "b" * n + "a" * n, "") for n in range(7))
    ab_ba = decide(a, "ab", "ba")
    a_b = decide(a, "a", "b")
    record(5, powers and ab_ba and not a_b,
           f"aⁿbⁿ=bⁿaⁿ=ε for n ≤ 6: {powers}; ab=ba: {ab_ba}; a=b: {a_b}")


def _run(fn, *args):
    try:
        fn(*args)
        return True
    except AssertionError:
        return False


def test_6_ancestors_engine():
    results = [_run(test_ancestors.test_random_monadic_systems, s) for s in range(25)]
    golden = _run(test_ancestors.test_dyck_golden)
    record(6, all(results) and golden,
           f"{sum(results)}/25 random =-monadic systems match brute force on Σ^≤8; Dyck golden {golden}")


def test_7_closure_operations():
    names = sorted(GRAMMARS)
    checks = {
        "union/concat": [(test_lang.test_union_and_concat, x, y) for x in names for y in names],
        "star/reverse": [(test_lang.test_star_and_reverse, x) for x in names],
        "substitution": [(test_lang.test_substitution, x) for x in names],
        "intersect_regular": [(test_lang.test_intersect_regular, x, n) for x in names for n in test_lang.NFAS],
        "rational_transduce": [(test_lang.test_rational_transduce, x) for x in names],
        "bar-hillel golden": [(test_lang.test_bar_hillel_dyck_golden,)],
    }
    summary = {k: all(_run(*c) for c in v) for k, v in checks.items()}
    record(7, all(summary.values()), ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in summary.items())
           + " (exhaustive on Σ^≤8 over 7 fixture grammars)")


def test_8_rational_subset(bicyclic_arts):
    g = rational_preimage(bicyclic_arts, Nfa.star_of(["bc"], "bc"))
    bad_closed = bad_oracle = 0
    for w in all_words("bc", 8):
        member = cyk_member(g, w)
        bad_closed += member != dyck(w)
        st = invertibility(BICYCLIC, w).status
        bad_oracle += st is Status.UNKNOWN or member != (st is Status.YES)
    wit = find_bicyclic(BICYCLIC, compute_pieces(BICYCLIC))
    u, w1 = wit.pair
    lall = (u, w1) == ("c", "b") and oracle.equal(BICYCLIC, w1 + u, "").is_equal \
        and oracle.equal(BICYCLIC, u + w1, "").is_not_equal
    record(8, bad_closed == 0 and bad_oracle == 0 and lall,
           f"K=(bc)* on |w| ≤ 8: {bad_closed} closed-form and {bad_oracle} oracle mismatches; "
           f"witness (c, b) with bc=1, cb≠1: {lall}")


def test_9_performance(bicyclic_arts):
    u, v = "b" * 50 + "c" * 50, "bc" * 50
    t = time.perf_counter()
    ans = decide(bicyclic_arts, u, v)
    t_decide = time.perf_counter() - t
    fixtures = {
        "bicyclic": (BICYCLIC, trivial()),
        "cyclic3": (CYCLIC3, cyclic(3, {b1: 1})),
        "free1": (FREE1, free({b1: b2})),
        "abc_b2": (ABC_B2, finite(["e", "x"], "e", [["e", "x"], ["x", "e"]], {b1: "e", b2: "x"})),
        "example1": (EX1, load_units_spec(DATA / "z_example.us")),
        "example2": (EX2, load_units_spec(DATA / "z_example.us")),
    }
    times = {}
    for name, (p, spec) in fixtures.items():
        fresh_caches()
        t = time.perf_counter()
        n = normalize(p)
        synthesize(n.presentation, spec, pd=n.piece_data)
        times[name] = time.perf_counter() - t
    ok = ans and t_decide < 5 and all(x < 60 for x in times.values())
    record(9, ok, f"decide at length 200: {t_decide:.3f}s (limit 5 s, answer {ans}); synthesis "
           + ", ".join(f"{k} {x:.1f}s" for k, x in times.items()) + " (limit 60 s)")
