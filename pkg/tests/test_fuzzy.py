import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liftcert.fuzzy import (FuzzyError, FuzzyRelation, GuardExceeded, discrete, is_lipschitz, is_pseudometric,
                            lipschitz_maps, zero)
from liftcert.magnitude import Magnitude
from strategies import relations


def test_discrete_matrices():
    assert discrete(["a"]).dist == ((1,),)
    assert discrete(["a", "b"]).dist == ((1, 1), (1, 1))


def test_entries_are_validated():
    with pytest.raises(FuzzyError):
        FuzzyRelation(("a",), ((F(3, 2),),))
    with pytest.raises(FuzzyError):
        FuzzyRelation(("a", "b"), ((0, 1),))
    with pytest.raises(FuzzyError):
        FuzzyRelation(("a", "a"), ((0, 0), (0, 0)))
    with pytest.raises(TypeError):
        FuzzyRelation(("a",), ((0.5,),))


def test_no_metric_axioms_assumed(asym):
    assert asym("a1", "a1") == F(1, 2)
    assert asym("a1", "a2") == 1 and asym("a2", "a1") == F(3, 10)


class TestPseudometric:
    def test_discrete_fails_self_distance(self):
        assert not is_pseudometric(discrete("ab"))

    def test_asymmetric_example_fails(self, asym):
        assert not is_pseudometric(asym)

    def test_zero_passes(self):
        assert is_pseudometric(zero("ab"))

    def test_triangle_is_truncated_at_one(self):
        d = FuzzyRelation.from_entries("abc", {(u, u): 0 for u in "abc"} | {
            ("a", "b"): F(3, 5), ("b", "a"): F(3, 5), ("b", "c"): F(3, 5), ("c", "b"): F(3, 5)}, default=1)
        assert is_pseudometric(d)

    def test_triangle_violation(self):
        d = FuzzyRelation.from_entries("abc", {(u, u): 0 for u in "abc"} | {
            ("a", "b"): F(1, 5), ("b", "a"): F(1, 5), ("b", "c"): F(1, 5), ("c", "b"): F(1, 5)}, default=1)
        assert not is_pseudometric(d)


class TestLipschitzMaps:
    def test_discrete_source_admits_every_function(self):
        dst = FuzzyRelation.from_entries("pq", {("p", "q"): F(1, 2)}, default=0)
        maps = lipschitz_maps(discrete("abc"), dst)
        assert len(maps) == 2 ** 3

    def test_zero_entry_against_discrete_target_admits_nothing(self):
        src = FuzzyRelation.from_entries("ab", {("a", "b"): 0}, default=1)
        assert lipschitz_maps(src, discrete("pq")) == []

    @given(relations(max_size=3))
    def test_identity_always_present(self, d):
        ident = {v: v for v in d.carrier}
        assert ident in lipschitz_maps(d, d)

    @given(relations(max_size=3), relations(max_size=3))
    def test_matches_brute_force(self, src, dst):
        got = lipschitz_maps(src, dst)
        expected = []
        for img in itertools.product(dst.carrier, repeat=len(src)):
            f = dict(zip(src.carrier, img))
            if is_lipschitz(f, src, dst):
                expected.append(f)
        assert got == expected

    @given(relations(max_size=3), relations(max_size=3), st.data())
    def test_enlarging_source_never_removes_maps(self, src, dst, data):
        i = data.draw(st.integers(0, len(src) - 1))
        j = data.draw(st.integers(0, len(src) - 1))
        rows = [list(r) for r in src.dist]
        rows[i][j] = F(1)
        bigger = FuzzyRelation(src.carrier, tuple(map(tuple, rows)))
        small = lipschitz_maps(src, dst)
        assert all(f in lipschitz_maps(bigger, dst) for f in small)

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            lipschitz_maps(discrete("abcdefgh"), discrete("abcdefgh"), guard=1000)


def test_json_round_trip_with_roots():
    d = FuzzyRelation.from_entries("xy", {("x", "y"): Magnitude(F(1, 2), 2)}, default=F(1, 3))
    data = d.to_json()
    assert data["dist"][0][1] == "1/2^(1/2)"
    assert FuzzyRelation.from_json(data) == d
    assert not d.is_rational
    with pytest.raises(FuzzyError):
        is_pseudometric(d)


def test_malformed_json():
    with pytest.raises(FuzzyError):
        FuzzyRelation.from_json({"carrier": ["a"]})
