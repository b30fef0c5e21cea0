"""Quantitative equations, finite-model satisfaction and the two-zeros countermodel."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ._rational import RationalLike, format_fraction, to_fraction
from .fuzzy import ENUMERATION_GUARD, FuzzyRelation, GuardExceeded
from .lifting import lift
from .magnitude import Magnitude, Real, to_real
from .operators import Bound, LiftOperator, STANDARD
from .terms import Distribution, Leaf, Node, Term, convex_combine, format_term, parse_term, variables

ICA_VARIABLES = ("x", "y", "w", "z")


class TheoryError(ValueError):
    pass


@dataclass(frozen=True)
class QuantEquation:
    """``forall (B, d_B). lhs = rhs`` when ``bound`` is None, else ``lhs =_bound rhs``."""

    context: FuzzyRelation
    lhs: Term
    rhs: Term
    bound: Optional[Bound] = None
    op: LiftOperator = STANDARD

    def __post_init__(self) -> None:
        extra = (variables(self.lhs) | variables(self.rhs)) - set(self.context.carrier)
        if extra:
            raise TheoryError(f"variables {sorted(extra)} are not in the context")

    def bound_value(self) -> Optional[Magnitude]:
        return None if self.bound is None else self.bound.value(self.op)

    def __str__(self) -> str:
        rel = "=" if self.bound is None else f"=_{{{self.bound}}}"
        return f"forall {', '.join(self.context.carrier)}. {format_term(self.lhs)} {rel} {format_term(self.rhs)}"

    def to_json(self) -> dict:
        return {
            "context": self.context.to_json(),
            "lhs": format_term(self.lhs),
            "rhs": format_term(self.rhs),
            "bound": None if self.bound is None else self.bound.to_json(),
            "operator": self.op.token,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QuantEquation":
        """Accepts ``bound`` as null, a rational string, or a bound object."""
        raw = data.get("bound")
        if raw is None:
            bound = None
        elif isinstance(raw, (str, int)):
            bound = Bound.const(to_fraction(raw))
        else:
            bound = Bound.from_json(raw)
        op = LiftOperator.parse(data.get("operator", "standard"))
        return cls(FuzzyRelation.from_json(data["context"]), parse_term(data["lhs"]),
                   parse_term(data["rhs"]), bound, op)


def interpolative_context(eps: Real, delta: Real) -> FuzzyRelation:
    """Context over x, y, w, z with d(x,w)=eps, d(y,z)=delta and 1 elsewhere."""
    return FuzzyRelation.from_entries(ICA_VARIABLES, {("x", "w"): to_real(eps), ("y", "z"): to_real(delta)})


def ica_axiom(op: LiftOperator, p: RationalLike, eps: Real, delta: Real) -> QuantEquation:
    """Instance ``x +_p y =_{eps (+)_p delta} w +_p z`` of the interpolative scheme.

    ``eps`` and ``delta`` may be exact roots, so that chained instances keep
    the exact value of a power-mean or geometric tail.
    """
    p, eps, delta = to_fraction(p), to_real(eps), to_real(delta)
    if not 0 < p < 1:
        raise TheoryError("p must lie in (0, 1)")
    if not (0 <= eps <= 1 and 0 <= delta <= 1):
        raise TheoryError("eps and delta must lie in [0, 1]")
    return QuantEquation(
        interpolative_context(eps, delta),
        Node(p, Leaf("x"), Leaf("y")),
        Node(p, Leaf("w"), Leaf("z")),
        Bound.mix(p, Bound.const(eps), Bound.const(delta)),
        op,
    )


def convex_algebra_equations(p: RationalLike, q: RationalLike) -> List[QuantEquation]:
    """Idempotency, skew commutativity and skew associativity over discrete contexts."""
    from .fuzzy import discrete

    p, q = to_fraction(p), to_fraction(q)
    x, y, z = Leaf("x"), Leaf("y"), Leaf("z")
    return [
        QuantEquation(discrete(["x"]), Node(p, x, x), x),
        QuantEquation(discrete(["x", "y"]), Node(p, x, y), Node(1 - p, y, x)),
        QuantEquation(discrete(["x", "y", "z"]), Node(q, Node(p, x, y), z),
                      Node(p * q, x, Node((1 - p) * q / (1 - p * q), y, z))),
    ]


def symmetry_equation(eps: RationalLike) -> QuantEquation:
    """``phi_eps``: ``b2 =_eps b1`` under ``d(b1, b2) = eps``."""
    ctx = FuzzyRelation.from_entries(("b1", "b2"), {("b1", "b2"): to_fraction(eps)})
    return QuantEquation(ctx, Leaf("b2"), Leaf("b1"), Bound.const(eps))


def pseudometric_equations(eps_values: Iterable[RationalLike]) -> List[QuantEquation]:
    """Self-distance, symmetry and triangle instances of the pseudometric theory."""
    vals = [to_fraction(e) for e in eps_values]
    out = [QuantEquation(FuzzyRelation(("b",), ((1,),)), Leaf("b"), Leaf("b"), Bound.const(0))]
    out += [symmetry_equation(e) for e in vals]
    for e1, e2 in itertools.product(vals, repeat=2):
        ctx = FuzzyRelation.from_entries(("b1", "b2", "b3"), {("b1", "b2"): e1, ("b2", "b3"): e2})
        out.append(QuantEquation(ctx, Leaf("b1"), Leaf("b3"), Bound.const(min(Fraction(1), e1 + e2))))
    return out


# -- models --------------------------------------------------------------------

class TableAlgebra:
    """A finite quantitative algebra: a fuzzy relation plus ``+_p`` tables.

    ``ops[p][(a, b)]`` is the element ``a +_p b``.
    """

    def __init__(self, relation: FuzzyRelation, ops: Optional[Mapping[Fraction, Mapping[Tuple[str, str], str]]] = None):
        self.relation = relation
        self.ops = {to_fraction(p): dict(t) for p, t in (ops or {}).items()}

    @property
    def elements(self) -> Sequence[str]:
        return self.relation.carrier

    def distance(self, a: str, b: str) -> Magnitude:
        return Magnitude(self.relation(a, b))

    def mix(self, p: Fraction, a: str, b: str) -> str:
        try:
            return self.ops[p][(a, b)]
        except KeyError:
            raise TheoryError(f"model has no table entry for {a} +_{p} {b}") from None

    @classmethod
    def from_json(cls, data: Mapping) -> "TableAlgebra":
        rel = FuzzyRelation.from_json(data)
        ops = {}
        for p, rows in (data.get("ops") or {}).items():
            table = {}
            for i, a in enumerate(rel.carrier):
                for j, b in enumerate(rel.carrier):
                    table[(a, b)] = rows[i][j]
            ops[to_fraction(p)] = table
        return cls(rel, ops)


class LiftedAlgebra:
    """Distributions over a base fuzzy relation with the lifted distance.

    Interpretations range over the finite ``elements`` sample; mixtures are
    computed exactly in D(A) and may leave the sample.
    """

    def __init__(self, op: LiftOperator, base: FuzzyRelation, elements: Sequence[Distribution]):
        self.op = op
        self.base = base
        self.elements = list(elements)
        self._cache: Dict[Tuple[Distribution, Distribution], Magnitude] = {}

    def distance(self, mu: Distribution, nu: Distribution) -> Magnitude:
        key = (mu, nu)
        if key not in self._cache:
            self._cache[key] = lift(self.op, self.base, mu, nu).value.magnitude
        return self._cache[key]

    def mix(self, p: Fraction, mu: Distribution, nu: Distribution) -> Distribution:
        return convex_combine(mu, nu, p)


Model = Union[TableAlgebra, LiftedAlgebra]


def interpretations(context: FuzzyRelation, model: Model, guard: int = ENUMERATION_GUARD) -> Iterable[Dict[str, object]]:
    """Every 1-Lipschitz map from the whole context into the model's elements."""
    elems = list(model.elements)
    n, k = len(context), len(elems)
    if k ** n > guard:
        raise GuardExceeded(f"{k}^{n} candidate interpretations exceed the guard {guard}")
    S = context.dist
    dist = [[model.distance(a, b) for b in elems] for a in elems]
    choice = [0] * n

    def extend(i):
        if i == n:
            yield {context.carrier[v]: elems[choice[v]] for v in range(n)}
            return
        for c in range(k):
            if dist[c][c] > S[i][i]:
                continue
            if all(dist[choice[j]][c] <= S[j][i] and dist[c][choice[j]] <= S[i][j] for j in range(i)):
                choice[i] = c
                yield from extend(i + 1)

    yield from extend(0)


def interpret(t: Term, iota: Mapping[str, object], model: Model):
    if isinstance(t, Leaf):
        return iota[t.var]
    return model.mix(t.p, interpret(t.left, iota, model), interpret(t.right, iota, model))


def satisfies(model: Model, eq: QuantEquation, guard: int = ENUMERATION_GUARD) -> bool:
    """True iff every 1-Lipschitz interpretation of the context validates ``eq``."""
    bound = eq.bound_value()
    for iota in interpretations(eq.context, model, guard):
        s, t = interpret(eq.lhs, iota, model), interpret(eq.rhs, iota, model)
        if bound is None:
            if s != t:
                return False
        elif model.distance(s, t) > bound:
            return False
    return True


# -- the two-zeros countermodel ----------------------------------------------------

ZERO, ZERO_PRIME = "0", "0'"


@dataclass(frozen=True)
class RelationalModel:
    """Carrier ``{0, 0'}`` plus grid points, with relations ``R_eps`` for ``=_eps``.

    ``rel`` holds the relations at 0 and at each grid value; :meth:`related`
    evaluates the defining clauses at any ``eps`` in [0, 1].
    """

    carrier: Tuple[str, ...]
    grid: Tuple[Fraction, ...]
    rel: Mapping[Fraction, FrozenSet[Tuple[str, str]]]

    def point(self, name: str) -> Optional[Fraction]:
        return None if name in (ZERO, ZERO_PRIME) else to_fraction(name)

    def related(self, a: str, b: str, eps: Fraction) -> bool:
        if eps in self.rel:
            return (a, b) in self.rel[eps]
        return _two_zeros_related(self, a, b, eps)

    def relation(self, eps: Fraction) -> FrozenSet[Tuple[str, str]]:
        if eps in self.rel:
            return self.rel[eps]
        return frozenset((a, b) for a in self.carrier for b in self.carrier if _two_zeros_related(self, a, b, eps))

    def distance(self, a: str, b: str) -> Fraction:
        """The intended fuzzy relation on the carrier (1 between the zeros)."""
        pa, pb = self.point(a), self.point(b)
        if a == b:
            return Fraction(0)
        if pa is None and pb is None:
            return Fraction(1)
        if pa is None or pb is None:
            return pa if pb is None else pb
        return abs(pa - pb)


def _two_zeros_related(m: RelationalModel, a: str, b: str, eps: Fraction) -> bool:
    if a == b:
        return True
    if eps == 0:
        return False
    pa, pb = m.point(a), m.point(b)
    if pa is None and pb is None:
        return True
    if pa is None or pb is None:
        delta = pa if pb is None else pb
        return 0 < delta <= eps
    return abs(pa - pb) <= eps


def two_zeros_model(grid: Iterable[RationalLike]) -> RelationalModel:
    """Finite slice of the unit interval with two zeros."""
    values = sorted({to_fraction(g) for g in grid})
    if not values or any(not 0 < g <= 1 for g in values):
        raise TheoryError("grid values must lie in (0, 1]")
    carrier = (ZERO, ZERO_PRIME) + tuple(format_fraction(g) for g in values)
    proto = RelationalModel(carrier, tuple(values), {})
    rel = {Fraction(0): frozenset((a, a) for a in carrier)}
    for eps in values:
        rel[eps] = frozenset((a, b) for a in carrier for b in carrier if _two_zeros_related(proto, a, b, eps))
    return RelationalModel(carrier, tuple(values), rel)


def default_grid(levels: int = 10) -> List[Fraction]:
    return [Fraction(1, 2**i) for i in range(1, levels + 1)]


@dataclass
class FinitaryReport:
    """Findings of :func:`model_respects_finitary_rules`.

    Only the rules displayed or used in this package's proof system are
    checked (assumption, weakening, and the pseudometric axiom families).
    """

    weakening_violations: List[str] = field(default_factory=list)
    assumption_violations: List[str] = field(default_factory=list)
    axiom_violations: List[str] = field(default_factory=list)
    close_at: List[Fraction] = field(default_factory=list)
    equal_at_zero: bool = True
    checked: int = 0

    @property
    def finitary_rules_hold(self) -> bool:
        return not (self.weakening_violations or self.assumption_violations or self.axiom_violations)

    @property
    def noncompactness_witness(self) -> bool:
        """0 and 0' are related at every sampled positive bound but not at 0."""
        return bool(self.close_at) and not self.equal_at_zero

    def lines(self) -> List[str]:
        out = [
            f"grid bounds with (0, 0') in R_eps: {', '.join(format_fraction(e) for e in self.close_at)}",
            f"(0, 0') in R_0: {self.equal_at_zero}",
            f"weakening inclusions: {'hold' if not self.weakening_violations else self.weakening_violations}",
            f"assumption instances: {'hold' if not self.assumption_violations else self.assumption_violations}",
            f"pseudometric axiom instances: {'hold' if not self.axiom_violations else self.axiom_violations[:5]}",
            f"instances checked: {self.checked}",
            "non-compactness witness: "
            + ("0 =_eps 0' for every sampled eps > 0, yet 0 =_0 0' fails; only the infinitary rule closes the gap"
               if self.noncompactness_witness else "not exhibited"),
            "scope: rules checked are assumption, weakening and the pseudometric axioms (other rules of the full system not modelled)",
        ]
        return out


def model_respects_finitary_rules(m: RelationalModel, samples: Optional[Iterable[RationalLike]] = None) -> FinitaryReport:
    """Check the countermodel against the finitary rules on sampled bounds."""
    eps_values = sorted({Fraction(0)} | {to_fraction(e) for e in (samples if samples is not None else m.grid)})
    report = FinitaryReport()
    rels = {e: m.relation(e) for e in eps_values}

    for e1, e2 in itertools.combinations(eps_values, 2):
        missing = rels[e1] - rels[e2]
        report.checked += 1
        if missing:
            report.weakening_violations.append(f"R_{e1} not inside R_{e2}: {sorted(missing)[:3]}")

    # assumption: the identity interpretation relates b, b' at every bound >= d(b, b')
    for a in m.carrier:
        for b in m.carrier:
            for e in eps_values:
                if e >= m.distance(a, b):
                    report.checked += 1
                    if (a, b) not in rels[e]:
                        report.assumption_violations.append(f"({a}, {b}) not in R_{e} although d = {m.distance(a, b)}")

    for a in m.carrier:
        report.checked += 1
        if (a, a) not in rels[Fraction(0)]:
            report.axiom_violations.append(f"self-distance: ({a}, {a}) not in R_0")
    for e in eps_values:
        for a, b in rels[e]:
            report.checked += 1
            if (b, a) not in rels[e]:
                report.axiom_violations.append(f"symmetry: ({a}, {b}) in R_{e} but not ({b}, {a})")
    succ = {e: {} for e in eps_values}
    for e in eps_values:
        for a, b in rels[e]:
            succ[e].setdefault(a, set()).add(b)
    sums: Dict[Fraction, FrozenSet[Tuple[str, str]]] = {}
    for e1 in eps_values:
        for e2 in eps_values:
            total = min(Fraction(1), e1 + e2)
            if total not in sums:
                sums[total] = rels.get(total) or m.relation(total)
            target = sums[total]
            for a, b in rels[e1]:
                for c in succ[e2].get(b, ()):
                    report.checked += 1
                    if (a, c) not in target:
                        report.axiom_violations.append(
                            f"triangle: ({a},{b}) in R_{e1}, ({b},{c}) in R_{e2}, ({a},{c}) not in R_{total}")

    report.close_at = [e for e in eps_values if e > 0 and (ZERO, ZERO_PRIME) in rels[e]]
    report.equal_at_zero = (ZERO, ZERO_PRIME) in rels[Fraction(0)]
    return report


# -- conditions on the operator families ------------------------------------------

LIMIT_LAMBDAS = (Fraction(1, 10**3), Fraction(1, 10**6), Fraction(1, 10**9))
CONDITION_TOLERANCE = Fraction(1, 10**9)


def _hoelder_modulus(op: LiftOperator, p: Fraction, lam: Fraction) -> Magnitude:
    """Upper bound on ``(x+lam) (+)_p (y+lam) - x (+)_p y`` valid for all x, y.

    Power means (including standard and max) are 1-Lipschitz for the sup norm;
    for the geometric mean, ``(a+b)^r <= a^r + b^r`` gives
    ``lam^p + lam^(1-p) + lam``.
    """
    if op.kind != "geometric":
        return Magnitude(lam)
    up1 = Magnitude(lam ** p.numerator, p.denominator).enclosure(80)[1]
    up2 = Magnitude(lam ** (p.denominator - p.numerator), p.denominator).enclosure(80)[1]
    return Magnitude(up1 + up2 + lam)


@dataclass
class ConditionReport:
    failures: List[str] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def _close(a: Tuple[Fraction, Fraction], b: Tuple[Fraction, Fraction], tol: Fraction) -> bool:
    return a[0] - tol <= b[1] and b[0] - tol <= a[1]


def check_operator_conditions(op: LiftOperator, p: Fraction, q: Fraction, x: Fraction, y: Fraction,
                              z: Fraction, tol: Fraction = CONDITION_TOLERANCE,
                              report: Optional[ConditionReport] = None) -> ConditionReport:
    """Convex-algebra laws, monotonicity and the lambda -> 0 condition at one sample.

    Laws and monotonicity are decided exactly.  The limit check subtracts
    values, so irrational ones go through certified enclosures with
    tolerance ``tol``.
    """
    report = report if report is not None else ConditionReport()
    tag = f"{op.token} p={p} q={q} x={x} y={y} z={z}"
    bits = 80

    def enc(m: Magnitude):
        return m.enclosure(bits)

    def agree(name, m1, m2):
        report.checked += 1
        if m1 != m2:
            report.failures.append(f"{name} fails at {tag}: {m1} != {m2}")

    # the laws compare exact roots, so they are decided exactly for every family
    agree("idempotency", op.oplus(p, x, x), Magnitude(x))
    agree("skew commutativity", op.oplus(p, x, y), op.oplus(1 - p, y, x))
    r = (1 - p) * q / (1 - p * q)
    agree("skew associativity", op.oplus(q, op.oplus(p, x, y), z), op.oplus(p * q, x, op.oplus(r, y, z)))

    # monotonicity in each argument: x <= x' implies x (+) y <= x' (+) y
    lo, hi = min(x, z), max(x, z)
    report.checked += 2
    if op.oplus(p, lo, y) > op.oplus(p, hi, y):
        report.failures.append(f"monotonicity (left) fails at {tag}")
    if op.oplus(p, y, lo) > op.oplus(p, y, hi):
        report.failures.append(f"monotonicity (right) fails at {tag}")

    # lambda -> 0: gaps shrink along the sequence and stay under a vanishing modulus
    base = op.oplus(p, x, y)
    prev_value = None
    for lam in LIMIT_LAMBDAS:
        shifted = op.oplus(p, min(Fraction(1), x + lam), min(Fraction(1), y + lam))
        report.checked += 1
        if prev_value is not None and shifted > prev_value:
            report.failures.append(f"limit sequence not decreasing at {tag}, lambda={lam}")
        prev_value = shifted
        budget = _hoelder_modulus(op, p, lam)
        if op.exact_regime:
            if shifted.exact - base.exact > budget.exact:
                report.failures.append(f"limit gap exceeds modulus at {tag}, lambda={lam}")
        else:
            gap_hi = enc(shifted)[1] - enc(base)[0]
            if gap_hi > enc(budget)[1] + tol:
                report.failures.append(f"limit gap exceeds modulus at {tag}, lambda={lam}")
    return report
