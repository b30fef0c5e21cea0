from fractions import Fraction as F

import pytest
from hypothesis import given

from liftcert.magnitude import Magnitude
from liftcert.operators import (ALL_FAMILIES, GEOMETRIC, MAX, STANDARD, Bound, LiftOperator, OperatorError,
                                claim_for, oplus, power)
from strategies import probs, unit


@pytest.mark.parametrize("token", ["standard", "max", "power:3", "geometric"])
def test_token_round_trip(token):
    assert LiftOperator.parse(token).token == token


@pytest.mark.parametrize("token", ["median", "power:0", "power:x", "power:"])
def test_bad_tokens(token):
    with pytest.raises(OperatorError):
        LiftOperator.parse(token)


def test_regimes():
    assert STANDARD.exact_regime and MAX.exact_regime and power(1).exact_regime
    assert not power(2).exact_regime and not GEOMETRIC.exact_regime


class TestBinary:
    def test_standard(self):
        assert oplus(STANDARD, F(1, 2), F(1, 5), F(2, 5)).exact == F(3, 10)

    def test_max_idempotent(self):
        assert oplus(MAX, F(1, 7), F(2, 3), F(2, 3)).exact == F(2, 3)

    def test_geometric_absorbs_zero(self):
        assert oplus(GEOMETRIC, F(1, 2), 0, 1).exact == 0

    def test_power_mean(self):
        v = oplus(power(2), F(1, 2), F(0), F(1))
        assert v.magnitude == Magnitude(F(1, 2), 2)
        assert v.regime == "approx" and v.width <= F(1, 10**12)
        assert v.lo <= Magnitude(F(1, 2), 2) <= v.hi

    def test_geometric_value(self):
        assert GEOMETRIC.oplus(F(1, 2), F(1, 4), F(1)) == F(1, 2)

    @pytest.mark.parametrize("op", ALL_FAMILIES)
    def test_one_plus_one(self, op):
        assert op.oplus(F(1, 3), 1, 1) == 1

    def test_arguments_out_of_range(self):
        with pytest.raises(OperatorError):
            oplus(STANDARD, F(1, 2), F(3, 2), 0)
        with pytest.raises(OperatorError):
            STANDARD.oplus(1, 0, 0)


class TestNary:
    def test_weights_validated(self):
        with pytest.raises(OperatorError):
            STANDARD.combine([(F(1, 2), F(1))])

    def test_irrational_inputs(self):
        r = Magnitude(F(1, 2), 2)
        assert power(2).combine([(F(1, 2), r), (F(1, 2), F(0))]) == Magnitude(F(1, 4), 2)
        assert MAX.combine([(F(1, 2), r), (F(1, 2), F(1, 2))]) == r
        assert GEOMETRIC.combine([(F(1, 2), r), (F(1, 2), F(1, 2))]) == Magnitude(F(1, 8), 4)
        with pytest.raises(OperatorError):
            STANDARD.combine([(F(1, 2), r), (F(1, 2), F(0))])

    @pytest.mark.parametrize("op", ALL_FAMILIES)
    @given(p=probs, q=probs, x=unit, y=unit, z=unit)
    def test_nary_agrees_with_nested_binary(self, op, p, q, x, y, z):
        nested = op.oplus(p, x, op.oplus(q, y, z))
        flat = op.combine([(p, x), ((1 - p) * q, y), ((1 - p) * (1 - q), z)])
        assert nested == flat


class TestBound:
    def test_flatten_and_value(self):
        b = Bound.mix(F(1, 2), Bound.const(F(1, 5)), Bound.mix(F(1, 2), Bound.const(0), Bound.const(F(2, 5))))
        assert sorted(b.flatten()) == [(F(1, 4), 0), (F(1, 4), F(2, 5)), (F(1, 2), F(1, 5))]
        assert b.value(STANDARD) == F(1, 5)
        assert b.value(MAX) == F(2, 5)

    def test_claim_not_part_of_identity(self):
        b = Bound.const(F(1, 4))
        assert b.with_claim(F(1, 2)) == b

    def test_json_round_trip(self):
        b = Bound.mix(F(1, 3), Bound.const(Magnitude(F(1, 2), 2)), Bound.const(1)).with_claim(F(3, 4))
        data = b.to_json()
        assert data["claim"] == "0.75"
        back = Bound.from_json(data)
        assert back == b and back.claim == F(3, 4)

    def test_claim_for_is_decimal_upper_bound(self):
        m = Magnitude(F(1, 2), 2)
        c = claim_for(m)
        assert m <= c <= m.enclosure(60)[1] + F(1, 10**12)
        assert (c * 10**12).denominator == 1
