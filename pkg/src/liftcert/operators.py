"""Convex-algebra structures on [0, 1] used to lift distances.

Four families are supported, each given by its binary operation ``x (+)_p y``
and the matching n-ary homomorphic formula:

=================  ===============================  ==============================
token              binary                           n-ary
=================  ===============================  ==============================
``standard``       ``p x + (1-p) y``                ``sum_i p_i x_i``
``max``            ``max(x, y)``                    ``max_i x_i``
``power:k``        ``(p x^k + (1-p) y^k)^(1/k)``    ``(sum_i p_i x_i^k)^(1/k)``
``geometric``      ``x^p y^(1-p)``                  ``prod_i x_i^(p_i)``
=================  ===============================  ==============================

Values are :class:`~liftcert.magnitude.Magnitude` objects so that every
comparison is exact.  ``standard`` and ``max`` (and ``power:1``) stay in the
rationals; the other two need one root at the very end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple, Union

from ._rational import (DEFAULT_PRECISION, RationalLike, bits_for_width, display, exact_decimal, format_fraction,
                        to_fraction)
from .magnitude import Magnitude, Real, format_real, power_of, to_real

_KINDS = ("standard", "max", "power", "geometric")


class OperatorError(ValueError):
    pass


@dataclass(frozen=True)
class LiftOperator:
    kind: str
    k: int = 1

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise OperatorError(f"unknown operator kind {self.kind!r}")
        if self.kind == "power":
            if not isinstance(self.k, int) or self.k < 1:
                raise OperatorError("power-mean order must be an integer >= 1")
        elif self.k != 1:
            raise OperatorError(f"{self.kind} takes no order parameter")

    @classmethod
    def parse(cls, token: str) -> "LiftOperator":
        """Parse ``standard | max | power:<k> | geometric``."""
        token = token.strip().lower()
        if token.startswith("power:"):
            try:
                k = int(token.split(":", 1)[1])
            except ValueError:
                raise OperatorError(f"bad power-mean order in {token!r}") from None
            return cls("power", k)
        if token in ("standard", "max", "geometric"):
            return cls(token)
        raise OperatorError(f"unknown operator token {token!r}")

    @property
    def token(self) -> str:
        return f"power:{self.k}" if self.kind == "power" else self.kind

    def __str__(self) -> str:
        return self.token

    @property
    def exact_regime(self) -> bool:
        """True when lifted values are always rational."""
        return self.kind in ("standard", "max") or (self.kind == "power" and self.k == 1)

    def combine(self, weighted: Iterable[Tuple[RationalLike, Union[RationalLike, Magnitude]]]) -> Magnitude:
        """n-ary ``(+)_i p_i x_i`` for ``x_i`` in [0, 1] and weights summing to 1.

        Values may be irrational roots where the result stays representable:
        ``x ** k`` rational for ``power:k``, any root for ``max`` and
        ``geometric``, rationals only for ``standard``.  Zero weights are
        ignored.
        """
        items = [(to_fraction(w), to_real(x)) for w, x in weighted]
        items = [(w, x) for w, x in items if w != 0]
        if not items:
            raise OperatorError("empty combination")
        if any(w < 0 for w, _ in items) or sum(w for w, _ in items) != 1:
            raise OperatorError("weights must be nonnegative and sum to 1")
        if any(not 0 <= x <= 1 for _, x in items):
            raise OperatorError("values must lie in [0, 1]")
        if self.kind == "max":
            return max(Magnitude.of(x) for _, x in items)
        if self.kind == "geometric":
            if any(x == 0 for _, x in items):
                return Magnitude(Fraction(0))
            mags = [(w / Magnitude.of(x).index, Magnitude.of(x).radicand) for w, x in items]
            D = math.lcm(*(e.denominator for e, _ in mags))
            prod = Fraction(1)
            for e, r in mags:
                prod *= r ** int(e * D)
            return Magnitude(prod, D)
        k = self.k if self.kind == "power" else 1
        total = Fraction(0)
        for w, x in items:
            xk = power_of(x, Fraction(k)).exact
            if xk is None:
                raise OperatorError(f"{self.token} cannot combine the irrational value {format_real(x)}")
            total += w * xk
        return Magnitude(total, k)

    def oplus(self, p: RationalLike, x: RationalLike, y: RationalLike) -> Magnitude:
        p = to_fraction(p)
        if not 0 < p < 1:
            raise OperatorError(f"p must lie in (0, 1), got {p}")
        return self.combine([(p, x), (1 - p, y)])

    def oplus_interval(self, p: RationalLike, xs: Tuple[Fraction, Fraction],
                       ys: Tuple[Fraction, Fraction], bits: int = 80) -> Tuple[Fraction, Fraction]:
        """Enclosure of ``x (+)_p y`` for ``x`` in ``xs`` and ``y`` in ``ys``.

        Valid because every supported operation is monotone in both arguments.
        """
        lo = self.oplus(p, _clamp(xs[0]), _clamp(ys[0])).enclosure(bits)[0]
        hi = self.oplus(p, _clamp(xs[1]), _clamp(ys[1])).enclosure(bits)[1]
        return lo, hi


def _clamp(x: Fraction) -> Fraction:
    return min(max(Fraction(x), Fraction(0)), Fraction(1))


STANDARD = LiftOperator("standard")
MAX = LiftOperator("max")
GEOMETRIC = LiftOperator("geometric")


def power(k: int) -> LiftOperator:
    return LiftOperator("power", k)


ALL_FAMILIES = (STANDARD, MAX, power(2), GEOMETRIC)


@dataclass(frozen=True)
class LiftValue:
    """A lifted distance: exact magnitude plus its rational enclosure.

    ``regime`` is ``"exact"`` for rational-valued operators and ``"approx"``
    otherwise; in the approx regime ``hi - lo`` is at most ``precision``.
    """

    magnitude: Magnitude
    lo: Fraction
    hi: Fraction
    regime: str
    precision: Fraction = DEFAULT_PRECISION

    @classmethod
    def of(cls, m: Magnitude, op: LiftOperator, precision: Fraction = DEFAULT_PRECISION) -> "LiftValue":
        lo, hi = m.interval(precision)
        return cls(m, lo, hi, "exact" if op.exact_regime else "approx", precision)

    @property
    def exact(self) -> Optional[Fraction]:
        return self.magnitude.exact

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __str__(self) -> str:
        return self.describe()

    def describe(self) -> str:
        if self.exact is not None:
            return display(self.exact)
        return f"~ {self.magnitude.decimal()} (enclosure width <= {format_fraction(self.precision)})"

    def to_json(self) -> dict:
        out = {"regime": self.regime, "lo": format_fraction(self.lo), "hi": format_fraction(self.hi)}
        if self.exact is not None:
            out["value"] = format_fraction(self.exact)
        else:
            out["radicand"] = format_fraction(self.magnitude.radicand)
            out["root"] = self.magnitude.index
        return out


def oplus(op: LiftOperator, p: RationalLike, x: RationalLike, y: RationalLike,
          precision: Fraction = DEFAULT_PRECISION) -> LiftValue:
    """Binary ``x (+)_p y`` as a :class:`LiftValue`."""
    x, y = to_fraction(x), to_fraction(y)
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise OperatorError("arguments must lie in [0, 1]")
    return LiftValue.of(op.oplus(p, x, y), op, precision)


# -- symbolic bounds -----------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: Real

    def __post_init__(self) -> None:
        v = to_real(self.value)
        if not 0 <= v <= 1:
            raise OperatorError(f"bound constant {v} outside [0, 1]")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True)
class Mix:
    p: Fraction
    left: "BoundTree"
    right: "BoundTree"

    def __post_init__(self) -> None:
        p = to_fraction(self.p)
        if not 0 < p < 1:
            raise OperatorError(f"mix weight must lie in (0, 1), got {p}")
        object.__setattr__(self, "p", p)


BoundTree = Union[Const, Mix]


@dataclass(frozen=True)
class Bound:
    """A symbolic ``(+)_p`` expression over constants (rationals or exact roots).

    ``claim`` optionally records a decimal upper bound for the expression's
    value; checkers verify it exactly.  Two bounds are the same bound when
    their trees agree; the claim is not part of that identity.
    """

    tree: BoundTree
    claim: Optional[Fraction] = field(default=None, compare=False)

    @classmethod
    def const(cls, value: Union[RationalLike, Magnitude]) -> "Bound":
        return cls(Const(to_real(value)))

    @classmethod
    def mix(cls, p: RationalLike, left: "Bound", right: "Bound") -> "Bound":
        return cls(Mix(to_fraction(p), left.tree, right.tree))

    def flatten(self) -> List[Tuple[Fraction, Real]]:
        """Leaves with their path weights (products of the mix weights)."""
        out = []
        stack = [(self.tree, Fraction(1))]
        while stack:
            node, w = stack.pop()
            if isinstance(node, Const):
                out.append((w, node.value))
            else:
                stack.append((node.right, w * (1 - node.p)))
                stack.append((node.left, w * node.p))
        return out

    def value(self, op: LiftOperator) -> Magnitude:
        return op.combine(self.flatten())

    def with_claim(self, claim: Optional[RationalLike]) -> "Bound":
        return Bound(self.tree, None if claim is None else to_fraction(claim))

    def to_json(self) -> dict:
        out = _tree_json(self.tree)
        if self.claim is not None:
            out = {"expr": out, "claim": exact_decimal(self.claim)}
        else:
            out = {"expr": out}
        return out

    @classmethod
    def from_json(cls, data) -> "Bound":
        try:
            claim = data.get("claim")
            return cls(_tree_from_json(data["expr"]), None if claim is None else to_fraction(claim))
        except (KeyError, TypeError, AttributeError) as exc:
            raise OperatorError(f"malformed bound: {exc}") from exc

    def __str__(self) -> str:
        text = _tree_text(self.tree)
        return text if self.claim is None else f"{text} <= {format_fraction(self.claim)}"


def _tree_json(node: BoundTree):
    if isinstance(node, Const):
        return {"const": format_real(node.value)}
    return {"mix": format_fraction(node.p), "left": _tree_json(node.left), "right": _tree_json(node.right)}


def _tree_from_json(data) -> BoundTree:
    if "const" in data:
        return Const(to_real(data["const"]))
    return Mix(to_fraction(data["mix"]), _tree_from_json(data["left"]), _tree_from_json(data["right"]))


def _tree_text(node: BoundTree) -> str:
    if isinstance(node, Const):
        return format_real(node.value)
    return f"({_tree_text(node.left)} (+)_{{{format_fraction(node.p)}}} {_tree_text(node.right)})"


def claim_for(m: Magnitude, digits: int = 12) -> Fraction:
    """Decimal upper bound of ``m`` with ``digits`` fractional digits."""
    if m.exact is not None and (m.exact * 10**digits).denominator == 1:
        return m.exact
    _, hi = m.enclosure(bits_for_width(Fraction(1, 10 ** (digits + 2))))
    return Fraction(math.ceil(hi * 10**digits), 10**digits)
