"""Finite derivations in the theory of interpolative convex algebras.

A :class:`Derivation` is a proof tree whose nodes are labelled by a
:class:`Rule`.  :func:`check` validates every side condition from the tree and
its contexts alone; it never solves an optimisation problem.  The synthesis
side builds certificates from couplings: any coupling of ``[s]`` and ``[t]``
yields a finite proof of ``s =_lam t`` with ``lam`` its evaluation, and an
optimal coupling yields a proof of the lifted distance itself.

Equalities between convex-algebra terms (rule ``CAEq``) are checked
semantically, by comparing the denoted distributions, rather than by replaying
a rewrite sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Mapping, Optional, Sequence, Tuple

from ._rational import format_fraction, to_fraction
from .fuzzy import FuzzyRelation
from .lifting import Coupling, lift
from .magnitude import Magnitude, to_real
from .operators import Bound, LiftOperator, OperatorError, claim_for
from .terms import Leaf, NAryCombination, Node, Term, denote, format_term, substitute, variables
from .theories import ica_axiom


class Rule(str, Enum):
    """Inference rules of the finite fragment.

    ``Top`` and ``Congruence`` are marked companion-ref: no full statement is
    available, so their side conditions are only those needed by the uses
    made of them here (``Top`` proves any bound 1; ``Congruence`` chains
    ``s = s'``, ``s' =_b t'``, ``t' = t`` into ``s =_b t``).
    """

    REFL = "Refl"
    SYM_EQ = "SymEq"
    CA_EQ = "CAEq"
    ASSUM = "Assum"
    TOP = "Top"
    WEAKEN = "Weaken"
    INTERP_AXIOM = "InterpAxiom"
    SUBST = "Subst"
    CONGRUENCE = "Congruence"
    INF_RULE = "InfRule"


class ProofError(ValueError):
    """Raised when a certificate cannot be built from the given data."""


@dataclass(frozen=True)
class Judgment:
    """``forall (context). lhs = rhs`` (bound None) or ``lhs =_bound rhs``."""

    context: FuzzyRelation
    lhs: Term
    rhs: Term
    bound: Optional[Bound] = None

    @property
    def is_equality(self) -> bool:
        return self.bound is None

    def __str__(self) -> str:
        rel = "=" if self.bound is None else f"=_{{{self.bound}}}"
        return f"{format_term(self.lhs)} {rel} {format_term(self.rhs)}"


@dataclass(frozen=True)
class Derivation:
    conclusion: Judgment
    rule: Rule
    premises: Tuple["Derivation", ...] = ()
    side: Mapping = field(default_factory=dict, compare=False)

    def walk(self, path: str = "root") -> Iterator[Tuple[str, "Derivation"]]:
        yield path, self
        for i, prem in enumerate(self.premises):
            yield from prem.walk(f"{path}.premises[{i}]")

    def postorder(self, path: str = "root") -> Iterator[Tuple[str, "Derivation"]]:
        """Nodes with every premise before its conclusion."""
        for i, prem in enumerate(self.premises):
            yield from prem.postorder(f"{path}.premises[{i}]")
        yield path, self

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def depth(self) -> int:
        return 1 + max((p.depth() for p in self.premises), default=0)

    def rules_used(self) -> List[Rule]:
        return sorted({node.rule for _, node in self.walk()}, key=lambda r: r.value)


# -- checking ---------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    ok: bool
    path: str = ""
    rule: str = ""
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else f"rejected at {self.path} ({self.rule}): {self.reason}"


class _Reject(Exception):
    def __init__(self, path: str, rule: str, reason: str):
        super().__init__(reason)
        self.path, self.rule, self.reason = path, rule, reason


def check(op: LiftOperator, deriv: Derivation, finite_mode: bool = True,
          context: Optional[FuzzyRelation] = None) -> Verdict:
    """Validate every node of ``deriv`` under operator ``op``.

    With ``finite_mode`` any ``InfRule`` node is rejected.  If ``context`` is
    given, the root conclusion must be stated over exactly that relation.
    Nodes are visited premises first, so a verdict names the deepest node
    whose own side conditions fail.
    """
    try:
        if context is not None and deriv.conclusion.context != context:
            raise _Reject("root", deriv.rule.value, "root context differs from the supplied space")
        for path, node in deriv.postorder():
            try:
                _check_node(op, node, path, finite_mode)
            except (OperatorError, ValueError) as exc:
                raise _Reject(path, node.rule.value if isinstance(node.rule, Rule) else str(node.rule),
                              f"bound cannot be evaluated: {exc}") from exc
    except _Reject as r:
        return Verdict(False, r.path, r.rule, r.reason)
    return Verdict(True)


def _value(op: LiftOperator, bound: Bound) -> Magnitude:
    return bound.value(op)


def _check_node(op: LiftOperator, node: Derivation, path: str, finite_mode: bool) -> None:
    rule = node.rule
    c = node.conclusion

    def fail(reason: str):
        raise _Reject(path, rule.value if isinstance(rule, Rule) else str(rule), reason)

    def arity(n: int):
        if len(node.premises) != n:
            fail(f"expects {n} premise(s), found {len(node.premises)}")

    def need_eq(j: Judgment, what: str):
        if j.bound is not None:
            fail(f"{what} must be an equality judgment")

    def need_eps(j: Judgment, what: str):
        if j.bound is None:
            fail(f"{what} must be a quantitative judgment")

    if not isinstance(rule, Rule):
        fail("unknown rule")
    extra = (variables(c.lhs) | variables(c.rhs)) - set(c.context.carrier)
    if extra:
        fail(f"variables {sorted(extra)} are not in the context")
    if c.bound is not None and c.bound.claim is not None:
        if _value(op, c.bound) > c.bound.claim:
            fail(f"claimed bound {format_fraction(c.bound.claim)} is below the bound's value")

    prem = [p.conclusion for p in node.premises]

    if rule is Rule.INF_RULE:
        if finite_mode:
            fail("infinitary rule is not allowed in a finite proof")
        need_eps(c, "conclusion")
        if not prem:
            fail("infinitary rule needs premises")
        for j in prem:
            need_eps(j, "premise")
            if (j.context, j.lhs, j.rhs) != (c.context, c.lhs, c.rhs):
                fail("premises must share the conclusion's context and terms")
        if _value(op, c.bound) != min(_value(op, j.bound) for j in prem):
            fail("conclusion bound is not the infimum of the premise bounds")
        return

    if rule is Rule.REFL:
        arity(0)
        need_eq(c, "conclusion")
        if c.lhs != c.rhs:
            fail("reflexivity needs identical sides")
    elif rule is Rule.SYM_EQ:
        arity(1)
        need_eq(c, "conclusion")
        need_eq(prem[0], "premise")
        if prem[0].context != c.context or (prem[0].lhs, prem[0].rhs) != (c.rhs, c.lhs):
            fail("premise is not the flipped conclusion")
    elif rule is Rule.CA_EQ:
        arity(0)
        need_eq(c, "conclusion")
        if denote(c.lhs) != denote(c.rhs):
            fail("terms denote different distributions")
    elif rule is Rule.ASSUM:
        arity(0)
        need_eps(c, "conclusion")
        if not (isinstance(c.lhs, Leaf) and isinstance(c.rhs, Leaf)):
            fail("assumption relates two variables")
        if _value(op, c.bound) != c.context(c.lhs.var, c.rhs.var):
            fail(f"bound must equal the context distance {c.context(c.lhs.var, c.rhs.var)}")
    elif rule is Rule.TOP:
        arity(0)
        need_eps(c, "conclusion")
        if _value(op, c.bound) < 1:
            fail("top axiom needs a bound of at least 1")
    elif rule is Rule.WEAKEN:
        arity(1)
        need_eps(c, "conclusion")
        need_eps(prem[0], "premise")
        if (prem[0].context, prem[0].lhs, prem[0].rhs) != (c.context, c.lhs, c.rhs):
            fail("weakening must keep context and terms")
        if _value(op, prem[0].bound) > _value(op, c.bound):
            fail("weakened bound is smaller than the premise bound (needs delta >= eps)")
    elif rule is Rule.INTERP_AXIOM:
        arity(0)
        need_eps(c, "conclusion")
        try:
            inst = ica_axiom(op, node.side["p"], node.side["eps"], node.side["delta"])
        except (KeyError, ValueError) as exc:
            fail(f"bad side data: {exc}")
        if c.context != inst.context:
            fail("context is not the interpolative context for the stated eps, delta")
        if (c.lhs, c.rhs) != (inst.lhs, inst.rhs):
            fail("terms are not x +_p y and w +_p z")
        if c.bound.tree != inst.bound.tree:
            fail("bound is not eps (+)_p delta")
    elif rule is Rule.SUBST:
        _check_subst(op, node, prem, fail)
    elif rule is Rule.CONGRUENCE:
        arity(3)
        need_eps(c, "conclusion")
        left, mid, right = prem
        need_eq(left, "first premise")
        need_eps(mid, "second premise")
        need_eq(right, "third premise")
        if any(j.context != c.context for j in prem):
            fail("premises must share the conclusion's context")
        if left.lhs != c.lhs or right.rhs != c.rhs:
            fail("outer premises do not match the conclusion's terms")
        if left.rhs != mid.lhs or mid.rhs != right.lhs:
            fail("premises do not chain s = u, u =_lam v, v = t")
        if mid.bound.tree != c.bound.tree:
            fail("conclusion bound differs from the middle premise bound")
    else:  # pragma: no cover
        fail("unhandled rule")


def _check_subst(op: LiftOperator, node: Derivation, prem: Sequence[Judgment], fail) -> None:
    c = node.conclusion
    if not prem:
        fail("substitution needs a main premise")
    main = prem[0]
    try:
        sigma = node.side["sigma"]
        witnesses = list(node.side.get("witnesses", ()))
    except (KeyError, TypeError):
        fail("missing substitution in side data")
    src = main.context
    missing = [b for b in src.carrier if b not in sigma]
    if missing:
        fail(f"substitution is not total on the premise context: {missing}")
    for b in src.carrier:
        extra = variables(sigma[b]) - set(c.context.carrier)
        if extra:
            fail(f"sigma({b}) uses variables outside the conclusion context: {sorted(extra)}")
    if (main.bound is None) != (c.bound is None):
        fail("main premise and conclusion must be the same kind of judgment")
    if main.bound is not None and main.bound.tree != c.bound.tree:
        fail("substitution must keep the bound")
    if c.lhs != substitute(main.lhs, sigma) or c.rhs != substitute(main.rhs, sigma):
        fail("conclusion terms are not sigma applied to the main premise")
    if len(witnesses) != len(prem) - 1:
        fail("each witness premise must be labelled by a pair")
    covered = set()
    for k, (pair, j) in enumerate(zip(witnesses, prem[1:]), start=1):
        b, b2 = pair
        if b not in src or b2 not in src:
            fail(f"witness {k} names a pair outside the premise context")
        dist = src(b, b2)
        if j.bound is None:
            fail(f"witness for ({b}, {b2}) must be quantitative")
        if j.context != c.context:
            fail(f"witness for ({b}, {b2}) is over a different context")
        if (j.lhs, j.rhs) != (sigma[b], sigma[b2]):
            fail(f"witness for ({b}, {b2}) does not relate sigma({b}) and sigma({b2})")
        if j.bound.value(op) != dist:
            fail(f"witness for ({b}, {b2}) must have bound d_B = {dist}")
        covered.add((b, b2))
    for b in src.carrier:
        for b2 in src.carrier:
            if src(b, b2) < 1 and (b, b2) not in covered:
                fail(f"sigma is not shown 1-Lipschitz: no witness for ({b}, {b2}) with d_B = {src(b, b2)}")


# -- synthesis -------------------------------------------------------------------

def _assum(context: FuzzyRelation, a: str, b: str) -> Derivation:
    return Derivation(Judgment(context, Leaf(a), Leaf(b), Bound.const(context(a, b))), Rule.ASSUM)


def interpolation_chain(op: LiftOperator, context: FuzzyRelation, e: NAryCombination,
                        avec: Sequence[str], bvec: Sequence[str]) -> Derivation:
    """Finite proof of ``e(avec) =_eps e(bvec)`` with ``eps = (+)_i p_i d(a_i, b_i)``.

    Built by induction on the combination: one variable is an assumption;
    otherwise an interpolative axiom instance is specialised by a
    substitution whose 1-Lipschitz witnesses are the head assumption and the
    chain for the renormalised tail.  The tail's exact value, an irrational
    root for power means and the geometric mean, is placed in the axiom's
    context, so the final bound evaluates to exactly ``eps``.
    """
    weights = [to_fraction(p) for p, _ in e]
    if not (len(weights) == len(avec) == len(bvec)):
        raise ProofError("combination, avec and bvec must have the same length")
    if not weights:
        raise ProofError("empty combination")
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise ProofError("weights must be nonnegative and sum to 1")
    outside = [x for x in list(avec) + list(bvec) if x not in context]
    if outside:
        raise ProofError(f"names outside the carrier: {sorted(set(outside))}")
    return _chain(op, context, list(zip(weights, avec, bvec)))


def _chain(op, context, triples) -> Derivation:
    spine = []
    while True:
        p1, a1, b1 = triples[0]
        if p1 == 1:
            deriv = _assum(context, a1, b1)
            break
        if p1 == 0:
            triples = triples[1:]
            continue
        spine.append((p1, a1, b1))
        triples = [(p / (1 - p1), a, b) for p, a, b in triples[1:]]
    for p1, a1, b1 in reversed(spine):
        deriv = _interpolate(op, context, p1, a1, b1, deriv)
    return deriv


def _interpolate(op, context, p, a, b, tail: Derivation) -> Derivation:
    eps = context(a, b)
    # the tail's exact value, possibly an irrational root, becomes d_B(y, z)
    delta = to_real(tail.conclusion.bound.value(op))
    inst = ica_axiom(op, p, eps, delta)
    axiom = Derivation(Judgment(inst.context, inst.lhs, inst.rhs, inst.bound), Rule.INTERP_AXIOM,
                       side={"p": p, "eps": eps, "delta": delta})
    sigma = {"x": Leaf(a), "y": tail.conclusion.lhs, "w": Leaf(b), "z": tail.conclusion.rhs}
    pairs, wits = [], []
    if eps < 1:
        pairs.append(("x", "w"))
        wits.append(_assum(context, a, b))
    if delta < 1:
        pairs.append(("y", "z"))
        wits.append(tail)
    conclusion = Judgment(context, Node(p, Leaf(a), tail.conclusion.lhs),
                          Node(p, Leaf(b), tail.conclusion.rhs), inst.bound)
    return Derivation(conclusion, Rule.SUBST, (axiom, *wits), side={"sigma": sigma, "witnesses": tuple(pairs)})


def synthesize(op: LiftOperator, context: FuzzyRelation, s: Term, t: Term, gamma: Coupling,
               claim_digits: Optional[int] = None) -> Derivation:
    """Certificate for ``s =_lam t`` where ``lam`` is the evaluation of ``gamma``.

    The coupling's cells, in sorted order, give a common n-ary shape
    ``e = sum gamma(a,b) x_ab``; ``s = e(a)`` and ``e(b) = t`` hold in convex
    algebras and the interpolation chain bounds ``e(a)`` against ``e(b)``.
    With ``claim_digits`` the root bound also carries a decimal upper bound.
    """
    if gamma.mu != denote(s) or gamma.nu != denote(t):
        raise ProofError("coupling marginals do not match the denotations of s and t")
    cells = list(gamma.mass.items())
    e = [(w, f"x{k}") for k, (_, w) in enumerate(cells)]
    avec = [a for (a, _), _ in cells]
    bvec = [b for (_, b), _ in cells]
    chain = interpolation_chain(op, context, e, avec, bvec)
    ea, eb = chain.conclusion.lhs, chain.conclusion.rhs
    left = Derivation(Judgment(context, s, ea), Rule.CA_EQ)
    right = Derivation(Judgment(context, eb, t), Rule.CA_EQ)
    bound = chain.conclusion.bound
    if claim_digits is not None:
        bound = bound.with_claim(claim_for(bound.value(op), claim_digits))
    return Derivation(Judgment(context, s, t, bound), Rule.CONGRUENCE, (left, chain, right))


CLAIM_DIGITS = 12


def prove_lift(op: LiftOperator, context: FuzzyRelation, s: Term, t: Term) -> Derivation:
    """Finite certificate that ``s`` and ``t`` are within their lifted distance.

    Uses an optimal coupling from :func:`~liftcert.lifting.lift`.  For
    irrational-valued operators the root bound carries a 12-digit decimal
    claim above the exact value.
    """
    _, gamma = lift(op, context, denote(s), denote(t))
    return synthesize(op, context, s, t, gamma, None if op.exact_regime else CLAIM_DIGITS)


def certified_bound(op: LiftOperator, deriv: Derivation) -> Magnitude:
    """The bound a derivation establishes: its claim if present, else the exact value."""
    b = deriv.conclusion.bound
    if b is None:
        raise ProofError("equality judgments carry no bound")
    return Magnitude(b.claim) if b.claim is not None else b.value(op)
