import itertools
import os
import random
import subprocess
import sys

import pytest

from special_monoid.lang import (Grammar, Nfa, Transducer, all_words, build, concat, cyk_member, intersect_regular,
                                 is_empty, language_slice, parse_grammar, parse_regex, rational_transduce, reverse,
                                 serialize_grammar, shortest_word, star, substitute_terminals, to_cnf, union)
from special_monoid.lang.io import GrammarSyntaxError
from special_monoid.lang.regex import RegexError

from conftest import DATA
from lang_fixtures import AB, GRAMMARS

N = 8
WORDS = list(all_words(AB, N))
NAMES = sorted(GRAMMARS)


def lang(name, n=N):
    g, pred = GRAMMARS[name]
    return {w for w in all_words(AB, n) if pred(w)}


@pytest.mark.parametrize("name", NAMES)
def test_slice_matches_predicate(name):
    g, _ = GRAMMARS[name]
    assert language_slice(g, N) == lang(name)


@pytest.mark.parametrize("name", NAMES)
def test_cyk_backends_agree(name):
    g, _ = GRAMMARS[name]
    expect = lang(name)
    for w in WORDS:
        a = cyk_member(g, w, backend="numba")
        b = cyk_member(g, w, backend="numpy")
        assert a == b == (w in expect), w


@pytest.mark.parametrize("name", NAMES)
def test_cnf_preserves_language(name):
    g, _ = GRAMMARS[name]
    cnf, nullable = to_cnf(g)
    assert nullable == ("" in lang(name))
    for bodies in cnf.productions.values():
        for b in bodies:
            assert (len(b) == 1 and isinstance(b[0], str)) or (len(b) == 2 and not any(isinstance(x, str) for x in b))
    assert language_slice(cnf, N) == lang(name) - {""}


@pytest.mark.parametrize("x, y", list(itertools.combinations_with_replacement(NAMES, 2)))
def test_union_and_concat(x, y):
    gx, gy = GRAMMARS[x][0], GRAMMARS[y][0]
    lx, ly = lang(x), lang(y)
    assert language_slice(union(gx, gy), N) == lx | ly
    assert language_slice(concat(gx, gy), N) == {u + v for u in lx for v in ly if len(u + v) <= N}


def _star(ws, n):
    out = {""}
    frontier = {""}
    while frontier:
        frontier = {u + v for u in frontier for v in ws if v and len(u + v) <= n} - out
        out |= frontier
    return out


@pytest.mark.parametrize("name", NAMES)
def test_star_and_reverse(name):
    g = GRAMMARS[name][0]
    assert language_slice(star(g), N) == _star(lang(name), N)
    assert language_slice(reverse(g), N) == {w[::-1] for w in lang(name)}


@pytest.mark.parametrize("name", NAMES)
def test_substitution(name):
    g = GRAMMARS[name][0]
    # non-erasing images keep every preimage within length N
    nonempty = intersect_regular(GRAMMARS["anbn"][0], Nfa.excluding({""}, AB))
    sub = substitute_terminals(g, {"a": ["x", "yy"], "b": nonempty})
    imgs = {"a": ["x", "yy"], "b": sorted(lang("anbn") - {""})}
    expect = set()
    for w in lang(name):
        for pick in itertools.product(*(imgs[c] for c in w)):
            s = "".join(pick)
            if len(s) <= N:
                expect.add(s)
    assert language_slice(sub, N) == expect


def test_substitution_missing_image():
    with pytest.raises(ValueError):
        substitute_terminals(GRAMMARS["dyck"][0], {"a": "a"})


NFAS = {
    "a*b*": Nfa.pattern([({"a"}, True), ({"b"}, True)], AB),
    "(ab)*": Nfa.star_of(["ab"], AB),
    "excl": Nfa.excluding({"", "ab", "ba"}, AB),
    "regex": parse_regex("(a|bb)*a?", AB),
    "nothing": Nfa.nothing(AB),
}


@pytest.mark.parametrize("name, nfa", list(itertools.product(NAMES, NFAS)))
def test_intersect_regular(name, nfa):
    g = GRAMMARS[name][0]
    n = NFAS[nfa]
    assert language_slice(intersect_regular(g, n), N) == {w for w in lang(name) if n.accepts(w)}


# non-erasing on consumed input, with one ε-input insertion
T1 = Transducer(2, frozenset(AB), frozenset(AB), (
    (0, "a", "a", 0), (0, "a", "b", 1), (0, "b", "b", 0),
    (1, "a", "aa", 1), (1, "b", "a", 0), (1, None, "b", 0),
), frozenset({0}), frozenset({0, 1}))


@pytest.mark.parametrize("name", NAMES)
def test_rational_transduce(name):
    g = GRAMMARS[name][0]
    src = lang(name)
    image = {o for w in src for o in T1.run(w) if len(o) <= N}
    assert language_slice(rational_transduce(g, T1, "image"), N) == image
    pre = rational_transduce(g, T1, "preimage")
    expect = {w for w in WORDS if any(cyk_member(g, o) for o in T1.run(w))}
    assert language_slice(pre, N) == expect


def test_transduce_alphabet_checks():
    t = Transducer.homomorphism({"a": "a"})
    with pytest.raises(ValueError):
        rational_transduce(GRAMMARS["dyck"][0], t, "image")
    with pytest.raises(ValueError):
        rational_transduce(GRAMMARS["dyck"][0], t, "sideways")


def test_bar_hillel_dyck_golden():
    dyck = parse_grammar((DATA / "dyck.cfg").read_text())
    got = intersect_regular(dyck, Nfa.pattern([({"("}, True), ({")"}, True)], {"(", ")"}))
    assert language_slice(got, 12) == {"(" * k + ")" * k for k in range(7)}
    assert not is_empty(got)


def test_emptiness_and_shortest():
    assert is_empty(GRAMMARS["empty"][0])
    assert shortest_word(GRAMMARS["empty"][0]) is None
    assert shortest_word(GRAMMARS["finite"][0]) in {"ab", "ba"}
    assert shortest_word(intersect_regular(GRAMMARS["dyck"][0], Nfa.excluding({""}, AB))) == "ab"


@pytest.mark.parametrize("name", NAMES)
def test_io_round_trip(name):
    g = GRAMMARS[name][0]
    text = serialize_grammar(g)
    back = parse_grammar(text)
    assert language_slice(back, N) == language_slice(g, N)
    assert serialize_grammar(back) == text


def test_io_errors():
    for text in ("S -> 'a'\n", "start: S\nS -> T\n", "start: S\nS -> 'a' | 'b' -> 'c'\n", "start: S\nS -> 'a\n", "start: S\nS 'a'\n"):
        with pytest.raises(GrammarSyntaxError):
            parse_grammar(text)


def test_regex():
    n = parse_regex("a(b|c)*d+e?", "abcde")
    for w, ok in [("ad", True), ("abccbdd", True), ("ade", True), ("a", False), ("ae", False), ("adee", False)]:
        assert n.accepts(w) == ok
    for bad in ("(a", "a|*", "a)"):
        with pytest.raises(RegexError):
            parse_regex(bad, "a")


def test_random_grammars_cyk_vs_slice():
    rng = random.Random(11)
    for _ in range(30):
        prods = {}
        for a in range(3):
            prods[a] = [tuple(rng.choice(["a", "b", 0, 1, 2]) for _ in range(rng.randint(0, 3)))
                        for _ in range(rng.randint(1, 3))]
        g = build(0, prods, AB)
        sl = language_slice(g, 6)
        for w in all_words(AB, 6):
            assert cyk_member(g, w, "numba") == cyk_member(g, w, "numpy") == (w in sl)


def test_env_flag_selects_numpy():
    code = ("from special_monoid.lang import _kernels; import sys; "
            "sys.exit(0 if not _kernels.USE_NUMBA else 1)")
    env = dict(os.environ, SPECIAL_MONOID_NO_NUMBA="1")
    assert subprocess.run([sys.executable, "-c", code], env=env).returncode == 0
