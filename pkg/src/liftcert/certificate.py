"""JSON certificate files.

Layout::

    {"header": {"operator": "standard", "precision": "1e-12",
                "equality_mode": "semantic-CA"},
     "derivation": {"rule": "Congruence", "conclusion": {...},
                    "side": {...}, "premises": [...]}}

Output is canonical (sorted keys, rationals as ``num/den`` in lowest terms,
exact roots as ``q^(1/k)``),
so re-serialising a loaded certificate reproduces it byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping, Tuple

from ._rational import DEFAULT_PRECISION, format_fraction, to_fraction
from .fuzzy import FuzzyRelation
from .magnitude import format_real, to_real
from .operators import Bound, LiftOperator
from .proofs import Derivation, Judgment, Rule
from .terms import format_term, parse_term

EQUALITY_MODE = "semantic-CA"


class CertificateFormatError(ValueError):
    pass


def _precision_text(precision: Fraction) -> str:
    p = Fraction(precision)
    k = 0
    while Fraction(1, 10**k) > p:
        k += 1
    return f"1e-{k}" if Fraction(1, 10**k) == p else format_fraction(p)


def judgment_to_json(j: Judgment) -> dict:
    return {
        "context": j.context.to_json(),
        "lhs": format_term(j.lhs),
        "rhs": format_term(j.rhs),
        "kind": "eq" if j.bound is None else "eps",
        "bound": None if j.bound is None else j.bound.to_json(),
    }


def judgment_from_json(data: Mapping) -> Judgment:
    kind = data["kind"]
    if kind not in ("eq", "eps"):
        raise CertificateFormatError(f"unknown judgment kind {kind!r}")
    bound = None if kind == "eq" else Bound.from_json(data["bound"])
    return Judgment(FuzzyRelation.from_json(data["context"]), parse_term(data["lhs"]),
                    parse_term(data["rhs"]), bound)


def _side_to_json(rule: Rule, side: Mapping) -> dict:
    if rule is Rule.INTERP_AXIOM:
        return {"p": format_fraction(side["p"]), "eps": format_real(side["eps"]), "delta": format_real(side["delta"])}
    if rule is Rule.SUBST:
        return {
            "sigma": {b: format_term(t) for b, t in sorted(side["sigma"].items())},
            "witnesses": [list(pair) for pair in side.get("witnesses", ())],
        }
    return dict(side)


def _side_from_json(rule: Rule, side: Mapping) -> dict:
    if rule is Rule.INTERP_AXIOM:
        return {k: (to_fraction if k == "p" else to_real)(side[k]) for k in ("p", "eps", "delta") if k in side}
    if rule is Rule.SUBST:
        return {
            "sigma": {b: parse_term(t) for b, t in side.get("sigma", {}).items()},
            "witnesses": tuple(tuple(pair) for pair in side.get("witnesses", ())),
        }
    return dict(side)


def derivation_to_json(d: Derivation) -> dict:
    return {
        "rule": d.rule.value,
        "conclusion": judgment_to_json(d.conclusion),
        "side": _side_to_json(d.rule, d.side),
        "premises": [derivation_to_json(p) for p in d.premises],
    }


def derivation_from_json(data: Mapping) -> Derivation:
    try:
        rule = Rule(data["rule"])
    except (KeyError, ValueError) as exc:
        raise CertificateFormatError(f"unknown or missing rule: {exc}") from exc
    try:
        return Derivation(
            judgment_from_json(data["conclusion"]),
            rule,
            tuple(derivation_from_json(p) for p in data.get("premises", [])),
            _side_from_json(rule, data.get("side", {})),
        )
    except CertificateFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateFormatError(f"malformed derivation node: {exc}") from exc


def to_json(d: Derivation, op: LiftOperator, precision: Fraction = DEFAULT_PRECISION) -> dict:
    return {
        "header": {
            "operator": op.token,
            "precision": _precision_text(precision),
            "equality_mode": EQUALITY_MODE,
        },
        "derivation": derivation_to_json(d),
    }


def dumps(d: Derivation, op: LiftOperator, precision: Fraction = DEFAULT_PRECISION) -> str:
    return canonical(to_json(d, op, precision))


def canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def loads(text: str) -> Tuple[Derivation, LiftOperator, Fraction]:
    """Parse a certificate; returns the derivation, its operator and precision."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"certificate is not valid JSON: {exc}") from exc
    return from_json(data)


def from_json(data: Mapping) -> Tuple[Derivation, LiftOperator, Fraction]:
    try:
        header = data["header"]
        op = LiftOperator.parse(header["operator"])
        precision = to_fraction(header.get("precision", "1e-12"))
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateFormatError(f"bad certificate header: {exc}") from exc
    if header.get("equality_mode", EQUALITY_MODE) != EQUALITY_MODE:
        raise CertificateFormatError(f"unsupported equality mode {header.get('equality_mode')!r}")
    return derivation_from_json(data["derivation"]), op, precision
