import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liftcert.fuzzy import FuzzyRelation, GuardExceeded, discrete
from liftcert.operators import ALL_FAMILIES, MAX, STANDARD, power
from liftcert.sampling import random_distribution, random_pseudometric
from liftcert.terms import Leaf, Node
from liftcert.theories import (LiftedAlgebra, QuantEquation, TableAlgebra, TheoryError,
                               check_operator_conditions, convex_algebra_equations, default_grid, ica_axiom,
                               interpretations, model_respects_finitary_rules, pseudometric_equations, satisfies,
                               symmetry_equation, two_zeros_model)
from strategies import relations

half = F(1, 2)


class TestEquations:
    def test_ica_axiom_shape(self):
        eq = ica_axiom(STANDARD, half, F(1, 5), F(2, 5))
        assert eq.bound_value() == F(3, 10)
        assert eq.context("x", "w") == F(1, 5) and eq.context("y", "z") == F(2, 5)
        assert eq.context("x", "y") == 1
        assert eq.lhs == Node(half, Leaf("x"), Leaf("y"))

    def test_ica_axiom_rejects_bad_parameters(self):
        with pytest.raises(TheoryError):
            ica_axiom(STANDARD, 1, 0, 0)
        with pytest.raises((TheoryError, ValueError)):
            ica_axiom(STANDARD, half, F(3, 2), 0)

    def test_variables_must_be_in_context(self):
        with pytest.raises(TheoryError):
            QuantEquation(discrete(["x"]), Leaf("x"), Leaf("y"))

    def test_json_round_trip(self):
        eq = ica_axiom(power(2), F(1, 3), F(1, 5), 1)
        back = QuantEquation.from_json(eq.to_json())
        assert back == eq and back.op == power(2)

    def test_json_bound_as_plain_rational(self):
        eq = QuantEquation.from_json({"context": symmetry_equation(half).context.to_json(),
                                      "lhs": "b2", "rhs": "b1", "bound": "1/2"})
        assert eq == symmetry_equation(half)


class TestSatisfies:
    def test_vacuous_when_no_interpretation(self):
        ctx = FuzzyRelation.from_entries("xy", {("x", "y"): 0}, default=1)
        model = TableAlgebra(discrete(["p", "q"]))
        eq = QuantEquation(ctx, Leaf("x"), Leaf("y"), None)
        assert list(interpretations(ctx, model)) == []
        assert satisfies(model, eq)

    def test_symmetry_fails_on_asymmetric_matrix(self, asym):
        assert not satisfies(TableAlgebra(asym), symmetry_equation(F(3, 10)))

    @given(relations(min_size=1, max_size=3))
    def test_symmetry_family_characterises_symmetric_relations(self, d):
        model = TableAlgebra(d)
        symmetric = all(d(u, v) == d(v, u) for u in d.carrier for v in d.carrier)
        assert all(satisfies(model, symmetry_equation(e)) for e in d.values()) == symmetric

    def test_pseudometric_equations_hold_on_pseudometrics(self):
        rng = random.Random(2)
        for _ in range(5):
            d = random_pseudometric(rng, n=3)
            model = TableAlgebra(d)
            assert all(satisfies(model, eq) for eq in pseudometric_equations(d.values()[:4]))

    def test_table_algebra_ops(self):
        rel = discrete(["u", "v"])
        data = rel.to_json() | {"ops": {"1/2": [["u", "u"], ["v", "v"]]}}
        model = TableAlgebra.from_json(data)
        x, y = Leaf("x"), Leaf("y")
        assert satisfies(model, QuantEquation(discrete(["x"]), Node(half, x, x), x))
        assert not satisfies(model, QuantEquation(discrete(["x", "y"]), Node(half, x, y), Node(half, y, x)))

    def test_missing_table_entry(self):
        model = TableAlgebra(discrete(["u"]))
        with pytest.raises(TheoryError):
            satisfies(model, convex_algebra_equations(half, half)[0])

    def test_guard(self):
        model = TableAlgebra(discrete(list("abcdefghij")))
        with pytest.raises(GuardExceeded):
            satisfies(model, QuantEquation(discrete(list("pqrstuvw")), Leaf("p"), Leaf("p")), guard=1000)


class TestLiftedModel:
    @pytest.mark.parametrize("op", [STANDARD, MAX, power(2)])
    def test_interpolative_axioms_hold(self, op):
        rng = random.Random(4)
        base = random_pseudometric(rng, n=3)
        elems = [random_distribution(rng, base.carrier, max_support=2) for _ in range(4)]
        model = LiftedAlgebra(op, base, elems)
        for _ in range(3):
            p = F(rng.randint(1, 9), 10)
            eps, delta = F(rng.randint(0, 10), 10), F(rng.randint(0, 10), 10)
            assert satisfies(model, ica_axiom(op, p, eps, delta))

    def test_convex_algebra_laws_hold(self):
        rng = random.Random(6)
        base = random_pseudometric(rng, n=3)
        elems = [random_distribution(rng, base.carrier) for _ in range(3)]
        model = LiftedAlgebra(STANDARD, base, elems)
        assert all(satisfies(model, eq) for eq in convex_algebra_equations(F(1, 3), F(2, 5)))


class TestTwoZeros:
    def test_displayed_clauses(self):
        m = two_zeros_model(default_grid(10))
        assert all(m.related("0", "0'", e) for e in m.grid)
        assert not m.related("0", "0'", F(0))
        assert m.related("1/4", "1/2", F(1, 4))
        assert m.related("0", "1/4", F(1, 4)) and not m.related("0", "1/4", F(1, 8))

    def test_report(self):
        report = model_respects_finitary_rules(two_zeros_model(default_grid(10)))
        assert report.finitary_rules_hold
        assert report.noncompactness_witness
        assert report.close_at == default_grid(10)[::-1]
        assert any("scope" in line for line in report.lines())

    def test_grid_validated(self):
        with pytest.raises(TheoryError):
            two_zeros_model([0])
        with pytest.raises(TheoryError):
            two_zeros_model([F(3, 2)])


class TestOperatorConditions:
    @pytest.mark.parametrize("op", ALL_FAMILIES)
    @given(data=st.data())
    def test_sampled_conditions(self, op, data):
        p, q = (F(data.draw(st.integers(1, 9)), 10) for _ in range(2))
        x, y, z = (F(data.draw(st.integers(0, 10)), 10) for _ in range(3))
        report = check_operator_conditions(op, p, q, x, y, z)
        assert report.ok, report.failures
