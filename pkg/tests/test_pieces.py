import itertools

import pytest

from special_monoid import SpecialPresentation, oracle
from special_monoid.errors import BudgetExhausted
from special_monoid.lang import all_words
from special_monoid.oracle import Budget
from special_monoid.pieces import (Status, compute_pieces, factorize_relators, find_bicyclic, invertibility,
                                   is_normalized, normalize, sigma, units_presentation, violations)
from special_monoid.symbols import fresh

from conftest import ABC_B2, BICYCLIC, CYCLIC3, EX1, EX2, FREE1

FIXTURES = [BICYCLIC, CYCLIC3, FREE1, EX1, EX2, ABC_B2]


class TestInvertibility:
    def test_examples(self):
        assert invertibility(BICYCLIC, "bc").status is Status.YES
        assert invertibility(BICYCLIC, "b").status is Status.NO
        assert invertibility(BICYCLIC, "c").status is Status.NO
        assert invertibility(BICYCLIC, "b", "right").status is Status.YES
        assert invertibility(BICYCLIC, "c", "left").status is Status.YES
        for p in FIXTURES:
            assert invertibility(p, "").status is Status.YES

    def test_witnesses_verify(self):
        for p in FIXTURES:
            for w in all_words(p.alphabet, 3):
                res = invertibility(p, w)
                if res.status is Status.YES:
                    assert oracle.equal(p, w + res.witness, "").is_equal
                    assert oracle.equal(p, res.witness + w, "").is_equal

    def test_bicyclic_closed_form(self):
        # invertible iff equal to some (bc)^k, i.e. a Dyck word in b, c
        def dyck(w):
            d = 0
            for ch in w:
                d += 1 if ch == "b" else -1
                if d < 0:
                    return False
            return d == 0
        for w in all_words("bc", 8):
            st = invertibility(BICYCLIC, w).status
            assert st is (Status.YES if dyck(w) else Status.NO), w

    def test_letter_outside_relators(self):
        p = SpecialPresentation.of("abz", "ab", "ba")
        assert invertibility(p, "az").status is Status.NO


class TestFactorization:
    def test_goldens(self):
        assert factorize_relators(EX1).factors == (("aabbacc",), ("ab", "ac", "ab"))
        assert factorize_relators(EX2).factors == (("aaabccc",), ("aabcc", "abc", "aabcc"))
        assert factorize_relators(CYCLIC3).factors == (("a", "a", "a"),)
        assert factorize_relators(BICYCLIC).factors == (("bc",),)

    def test_annotation_trusted(self):
        p = SpecialPresentation(EX1.alphabet, EX1.relators, (None, ("ab", "ac", "ab")))
        f = factorize_relators(p)
        assert f.factors[1] == ("ab", "ac", "ab")
        assert f.sources[1] == "annotation"

    def test_minimality_and_right_inverses(self):
        for p in FIXTURES:
            f = factorize_relators(p)
            for r, factors in zip(p.relators, f.factors):
                assert "".join(factors) == r
                x = ""
                for q in factors:
                    for k in range(1, len(q)):
                        assert invertibility(p, q[:k]).status is not Status.YES
                    rest = r[len(x) + len(q):]
                    assert oracle.equal(p, q + rest + x, "").is_equal
                    x += q

    def test_budget_exhausted(self):
        with pytest.raises(BudgetExhausted):
            factorize_relators(EX1, Budget(max_rules=1, max_states=10))


class TestPieces:
    def test_goldens(self):
        pd = compute_pieces(EX1)
        assert set(pd.pieces) == {"aabbacc", "ab", "ac"}
        assert len(pd.partition) == 3
        assert compute_pieces(BICYCLIC).pieces == ("bc",)
        fp = compute_pieces(FREE1)
        assert set(fp.pieces) == {"a", "b"} and len(fp.partition) == 2
        abc = compute_pieces(ABC_B2)
        assert set(abc.pieces) == {"abc", "b"}

    @pytest.mark.parametrize("p", FIXTURES, ids=lambda p: p.render())
    def test_invariants(self, p):
        pd = compute_pieces(p)
        for x, y in itertools.permutations(pd.pieces, 2):
            assert not y.startswith(x) and not y.endswith(x)
        factors = {f for fs in pd.factorizations for f in fs}
        assert factors <= set(pd.pieces)
        for d in pd.pieces:
            assert any(len(d) <= len(f) and oracle.equal(p, d, f).is_equal for f in factors)
        for cls in pd.partition:
            for x, y in itertools.combinations(cls, 2):
                assert oracle.equal(p, x, y).is_equal
        for c1, c2 in itertools.combinations(pd.partition, 2):
            assert not oracle.equal(p, c1[0], c2[0]).is_equal
        for d in pd.pieces:
            assert pd.parse(d) == (d,)
            inv = "".join(pd.inverse_word(d))
            assert oracle.equal(p, d + inv, "").is_equal and oracle.equal(p, inv + d, "").is_equal
        assert not pd.budget_limited

    def test_units_presentations(self):
        up = units_presentation(compute_pieces(BICYCLIC))
        (b1,) = up.alphabet
        assert up.relators == (b1,)
        up = units_presentation(compute_pieces(CYCLIC3))
        assert up.relators == (up.alphabet[0] * 3,)
        up = units_presentation(compute_pieces(FREE1))
        b1, b2 = up.alphabet
        assert up.relators == (b1 + b2, b2 + b1)
        for p in FIXTURES:
            assert len(units_presentation(compute_pieces(p)).relators) == len(p.relators)


class TestNormalize:
    def test_example1(self):
        n = normalize(EX1)
        p0, p1 = fresh(0), fresh(1)
        assert set(n.piece_data.pieces) == {p0, p1, "ab", "ac", "a" + p0 + "b" + p1 + "c"}
        assert sigma(n.piece_data) == 6
        assert is_normalized(n.piece_data) and not violations(n.piece_data)

    def test_example2(self):
        n = normalize(EX2)
        p, q = fresh(0), fresh(1)
        apc, aqc, abc = "a" + p + "c", "a" + q + "c", "abc"
        expect = {apc, aqc + abc + aqc, p + abc + aqc, abc + aqc + p, q + aqc + aqc, aqc + aqc + q}
        assert n.presentation.relators and set(n.presentation.relators) == expect
        assert sigma(n.piece_data) == 6
        assert is_normalized(n.piece_data)

    def test_already_normalized(self):
        for p in (BICYCLIC, CYCLIC3, FREE1):
            n = normalize(p)
            assert (n.presentation.alphabet, n.presentation.relators) == (p.alphabet, p.relators)
            assert not n.steps

    @pytest.mark.parametrize("p", [EX1, EX2, ABC_B2], ids=["ex1", "ex2", "abc_b2"])
    def test_preserves_monoid(self, p):
        q = normalize(p).presentation
        before = oracle.certified_system(p)
        after = oracle.certified_system(q)
        assert before and after
        nf_p = {w: oracle.normal_form(before.rules, w) for w in all_words(p.alphabet, 8)}
        nf_q = {w: oracle.normal_form(after.rules, w) for w in nf_p}
        # same partition of A^{≤8}, hence the same answers for every |u|+|v| ≤ 8
        by_p, by_q = {}, {}
        for w in nf_p:
            by_p.setdefault(nf_p[w], set()).add(w)
            by_q.setdefault(nf_q[w], set()).add(w)
        assert sorted(map(sorted, by_p.values())) == sorted(map(sorted, by_q.values()))


class TestBicyclic:
    def test_bicyclic(self):
        w = find_bicyclic(BICYCLIC, compute_pieces(BICYCLIC))
        assert w.pair == ("c", "b") and w.status is Status.YES

    def test_cyclic_has_none(self):
        assert find_bicyclic(CYCLIC3, compute_pieces(CYCLIC3)) is None

    def test_example1(self):
        w = find_bicyclic(EX1, compute_pieces(EX1))
        u, w1 = w.pair
        assert w1 == "a"
        assert oracle.equal(EX1, w1 + u, "").is_equal
        assert oracle.equal(EX1, u + w1, "").is_not_equal
