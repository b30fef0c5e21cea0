from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liftcert.terms import (Distribution, Leaf, Node, TermError, convex_combine, denote, format_term,
                            nary_to_binary, parse_term, pushforward, substitute, variables)
from strategies import probs, terms

x, y, z, a, b, c = (Leaf(v) for v in "xyzabc")


class TestNaryToBinary:
    def test_leading_weight_one(self):
        assert nary_to_binary([(1, "x1"), (0, "x2")]) == Leaf("x1")

    def test_two_halves(self):
        assert nary_to_binary([(F(1, 2), "x1"), (F(1, 2), "x2")]) == Node(F(1, 2), Leaf("x1"), Leaf("x2"))

    def test_three_entries_renormalise(self):
        t = nary_to_binary([(F(1, 2), "a"), (F(1, 4), "b"), (F(1, 4), "c")])
        assert t == Node(F(1, 2), a, Node(F(1, 2), b, c))
        assert denote(t) == Distribution({"a": F(1, 2), "b": F(1, 4), "c": F(1, 4)})

    def test_leading_zero_is_skipped(self):
        assert nary_to_binary([(0, "a"), (F(1, 3), "b"), (F(2, 3), "c")]) == Node(F(1, 3), b, c)

    @pytest.mark.parametrize("entries", [[], [(F(1, 2), "a")], [(F(3, 2), "a"), (F(-1, 2), "b")]])
    def test_rejects_bad_weights(self, entries):
        with pytest.raises(TermError):
            nary_to_binary(entries)

    @given(st.lists(st.tuples(st.integers(0, 5), st.sampled_from("abcd")), min_size=1, max_size=6)
           .filter(lambda es: sum(w for w, _ in es) > 0))
    def test_denotation_matches_direct_sum(self, raw):
        total = sum(w for w, _ in raw)
        entries = [(F(w, total), v) for w, v in raw]
        expected = {}
        for w, v in entries:
            expected[v] = expected.get(v, F(0)) + w
        assert denote(nary_to_binary(entries)) == Distribution(expected)


class TestDenote:
    def test_idempotent_node(self):
        assert denote(Node(F(1, 2), x, x)) == Distribution({"x": 1})

    def test_binary_node(self):
        assert denote(Node(F(1, 3), x, y)) == Distribution({"x": F(1, 3), "y": F(2, 3)})

    def test_repeated_variable_merges(self):
        assert denote(Node(F(1, 2), a, Node(F(1, 2), a, b))) == Distribution({"a": F(3, 4), "b": F(1, 4)})

    @given(terms())
    def test_total_mass_is_one(self, t):
        assert sum(denote(t).values()) == 1

    @given(probs, terms(), terms())
    def test_node_is_convex_combination(self, p, s, t):
        assert convex_combine(denote(s), denote(t), p) == denote(Node(p, s, t))

    @given(probs, terms())
    def test_invariant_under_idempotency(self, p, t):
        assert denote(Node(p, t, t)) == denote(t)

    @given(probs, terms(), terms())
    def test_invariant_under_skew_commutativity(self, p, s, t):
        assert denote(Node(p, s, t)) == denote(Node(1 - p, t, s))

    @given(probs, probs, terms(), terms(), terms())
    def test_invariant_under_skew_associativity(self, p, q, s, t, u):
        lhs = Node(q, Node(p, s, t), u)
        rhs = Node(p * q, s, Node((1 - p) * q / (1 - p * q), t, u))
        assert denote(lhs) == denote(rhs)


class TestConvexCombine:
    def test_idempotent(self):
        assert convex_combine(Distribution({"x": 1}), Distribution({"x": 1}), F(1, 2)) == Distribution({"x": 1})

    def test_diracs(self):
        assert convex_combine(Distribution.dirac("x"), Distribution.dirac("y"), F(1, 3)) == \
            Distribution({"x": F(1, 3), "y": F(2, 3)})

    def test_overlapping_supports(self):
        mu = Distribution({"a": F(1, 2), "b": F(1, 2)})
        assert convex_combine(mu, Distribution.dirac("b"), F(1, 2)) == Distribution({"a": F(1, 4), "b": F(3, 4)})

    @pytest.mark.parametrize("p", [0, 1, F(3, 2), -1])
    def test_rejects_closed_endpoints(self, p):
        with pytest.raises(TermError):
            convex_combine(Distribution.dirac("x"), Distribution.dirac("y"), p)


class TestSubstitute:
    def test_leaf_replacement(self):
        assert substitute(x, {"x": Node(F(1, 2), a, b)}) == Node(F(1, 2), a, b)

    @given(terms())
    def test_identity(self, t):
        assert substitute(t, {v: Leaf(v) for v in variables(t)}) == t

    def test_collapsing_substitution(self):
        assert denote(substitute(Node(F(1, 2), x, y), {"x": a, "y": a})) == Distribution({"a": 1})

    def test_unmapped_variable(self):
        with pytest.raises(TermError):
            substitute(Node(F(1, 2), x, y), {"x": a})

    @given(terms(), terms(("a", "b")), terms(("b", "c")), terms(("a", "c")))
    def test_denotation_is_pushforward(self, t, sx, sy, sz):
        sigma = {"x": sx, "y": sy, "z": sz}
        assert denote(substitute(t, sigma)) == pushforward(denote(t), sigma)


class TestDistribution:
    def test_rejects_non_normalised(self):
        with pytest.raises(TermError):
            Distribution({"a": F(1, 2)})

    def test_zero_weights_dropped_and_hashable(self):
        d1 = Distribution({"b": F(1), "a": F(0)})
        assert d1.support == ("b",)
        assert hash(d1) == hash(Distribution.dirac("b"))

    def test_json_round_trip(self):
        mu = Distribution({"a": F(1, 3), "b": F(2, 3)})
        assert Distribution.from_json(mu.to_json()) == mu
        assert mu.to_json() == {"a": "1/3", "b": "2/3"}

    def test_to_term_denotes_back(self):
        mu = Distribution({"a": F(1, 6), "b": F(1, 3), "c": F(1, 2)})
        assert denote(mu.to_term()) == mu


class TestSyntax:
    @given(terms())
    def test_format_parse_round_trip(self, t):
        assert parse_term(format_term(t)) == t

    def test_nary_syntax(self):
        assert parse_term("[1/2 a, 1/4 b, 1/4 c]") == Node(F(1, 2), a, Node(F(1, 2), b, c))

    def test_decimal_weights_are_exact(self):
        assert parse_term("(a +_{0.3} b)").p == F(3, 10)

    @pytest.mark.parametrize("text", ["(a +_{1/2} b", "(a b)", "a b", "(a +_{1} b)", "[1/2 a, 1/2]", ""])
    def test_malformed(self, text):
        with pytest.raises((TermError, ValueError)):
            parse_term(text)
