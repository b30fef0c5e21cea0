"""Convex-algebra terms, n-ary combinations and finitely supported distributions.

A term is either a variable ``Leaf("x")`` or a binary convex combination
``Node(p, left, right)`` with ``0 < p < 1``.  Its meaning in the free convex
algebra is a :class:`Distribution` over variable names, computed by
:func:`denote`.

Text syntax (round-trips through :func:`parse_term` / :func:`format_term`)::

    x
    (x +_{1/2} (y +_{1/3} z))
    [1/2 a, 1/4 b, 1/4 c]          # n-ary, converted with nary_to_binary
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Tuple, Union

from ._rational import RationalLike, format_fraction, to_fraction


class TermError(ValueError):
    """Malformed term, combination or distribution."""


def _check_open(p: Fraction) -> Fraction:
    if not 0 < p < 1:
        raise TermError(f"convex combination weight must lie in (0, 1), got {p}")
    return p


@dataclass(frozen=True)
class Leaf:
    var: str

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Node:
    p: Fraction
    left: "Term"
    right: "Term"

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _check_open(to_fraction(self.p)))

    def __str__(self) -> str:
        return format_term(self)


Term = Union[Leaf, Node]

NAryCombination = Sequence[Tuple[Fraction, str]]


def variables(t: Term) -> frozenset:
    """Set of variable names occurring in ``t``."""
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Leaf):
            out.add(u.var)
        else:
            stack.append(u.left)
            stack.append(u.right)
    return frozenset(out)


class Distribution(Mapping[str, Fraction]):
    """Finitely supported probability distribution with exact weights.

    Zero weights are dropped on construction, so the key set is the support.
    Iteration follows the sorted order of the variable names.
    """

    __slots__ = ("_weights", "_hash")

    def __init__(self, weights: Union[Mapping[str, RationalLike], Iterable[Tuple[str, RationalLike]]]):
        items = weights.items() if isinstance(weights, Mapping) else weights
        acc: dict = {}
        for name, w in items:
            w = to_fraction(w)
            if w < 0:
                raise TermError(f"negative weight {w} for {name!r}")
            acc[name] = acc.get(name, Fraction(0)) + w
        total = sum(acc.values(), Fraction(0))
        if total != 1:
            raise TermError(f"weights sum to {total}, not 1")
        self._weights = {k: acc[k] for k in sorted(acc) if acc[k] > 0}
        self._hash = None

    @classmethod
    def dirac(cls, name: str) -> "Distribution":
        return cls({name: 1})

    def __getitem__(self, key: str) -> Fraction:
        return self._weights[key]

    def get(self, key, default=Fraction(0)):
        return self._weights.get(key, default)

    def __iter__(self) -> Iterator[str]:
        return iter(self._weights)

    def __len__(self) -> int:
        return len(self._weights)

    @property
    def support(self) -> Tuple[str, ...]:
        return tuple(self._weights)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Distribution):
            return self._weights == other._weights
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._weights.items()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{k!r}: {format_fraction(v)}" for k, v in self._weights.items())
        return f"Distribution({{{body}}})"

    def to_json(self) -> dict:
        return {k: format_fraction(v) for k, v in self._weights.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "Distribution":
        if not isinstance(data, Mapping):
            raise TermError("a distribution must be a JSON object")
        return cls({str(k): to_fraction(v) for k, v in data.items()})

    def to_term(self) -> Term:
        """Canonical binary term whose denotation is this distribution."""
        return nary_to_binary([(w, x) for x, w in self._weights.items()])


def nary_to_binary(entries: NAryCombination) -> Term:
    """Rewrite an n-ary convex combination into nested binary ``+_p`` nodes.

    Follows the three rewriting cases: a leading weight of 1 yields the first
    variable, a leading weight of 0 is skipped, and otherwise the tail is
    renormalised by ``1 - p1``.
    """
    entries = [(to_fraction(p), str(x)) for p, x in entries]
    if not entries:
        raise TermError("empty convex combination")
    if any(p < 0 or p > 1 for p, _ in entries):
        raise TermError("n-ary weights must lie in [0, 1]")
    if sum((p for p, _ in entries), Fraction(0)) != 1:
        raise TermError("n-ary weights must sum to 1")
    return _nary(entries)


def _nary(entries):
    # iterative over the spine; the tail always renormalises to total 1
    spine = []
    while True:
        p1, x1 = entries[0]
        if p1 == 1:
            result: Term = Leaf(x1)
            break
        if p1 == 0:
            entries = entries[1:]
            continue
        spine.append((p1, x1))
        entries = [(p / (1 - p1), x) for p, x in entries[1:]]
    for p1, x1 in reversed(spine):
        result = Node(p1, Leaf(x1), result)
    return result


def denote(t: Term) -> Distribution:
    """Distribution of mass reaching each leaf variable."""
    acc: dict = {}
    stack = [(t, Fraction(1))]
    while stack:
        u, mass = stack.pop()
        if isinstance(u, Leaf):
            acc[u.var] = acc.get(u.var, Fraction(0)) + mass
        else:
            stack.append((u.left, mass * u.p))
            stack.append((u.right, mass * (1 - u.p)))
    return Distribution(acc)


def convex_combine(mu: Distribution, nu: Distribution, p: RationalLike) -> Distribution:
    """Pointwise ``p*mu + (1-p)*nu``."""
    p = _check_open(to_fraction(p))
    keys = set(mu) | set(nu)
    return Distribution({x: p * mu.get(x) + (1 - p) * nu.get(x) for x in keys})


def substitute(t: Term, sigma: Mapping[str, Term]) -> Term:
    """Replace every leaf ``x`` by ``sigma[x]``."""
    if isinstance(t, Leaf):
        try:
            return sigma[t.var]
        except KeyError:
            raise TermError(f"substitution does not map variable {t.var!r}") from None
    return Node(t.p, substitute(t.left, sigma), substitute(t.right, sigma))


def pushforward(mu: Distribution, sigma: Mapping[str, Term]) -> Distribution:
    """Image of ``mu`` under a substitution, computed on distributions."""
    acc: dict = {}
    for x, w in mu.items():
        for y, v in denote(sigma[x]).items():
            acc[y] = acc.get(y, Fraction(0)) + w * v
    return Distribution(acc)


# -- text syntax -------------------------------------------------------------

def format_term(t: Term) -> str:
    if isinstance(t, Leaf):
        return t.var
    return f"({format_term(t.left)} +_{{{format_fraction(t.p)}}} {format_term(t.right)})"


def format_nary(entries: NAryCombination) -> str:
    return "[" + ", ".join(f"{format_fraction(to_fraction(p))} {x}" for p, x in entries) + "]"


_TOKEN = re.compile(r"\s*(?:(\+_\{[^}]*\})|([()\[\],])|([^\s()\[\],]+))")


def _tokens(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TermError(f"cannot tokenize term at position {pos}: {text!r}")
        out.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return out


def parse_term(text: str) -> Term:
    """Parse the canonical text syntax (see module docstring)."""
    toks = _tokens(text)
    term, i = _parse(toks, 0)
    if i != len(toks):
        raise TermError(f"trailing input in term {text!r}")
    return term


def _parse(toks, i):
    if i >= len(toks):
        raise TermError("unexpected end of term")
    tok = toks[i]
    if tok == "(":
        left, i = _parse(toks, i + 1)
        if i >= len(toks) or not toks[i].startswith("+_{"):
            raise TermError("expected '+_{p}' inside parentheses")
        p = to_fraction(toks[i][3:-1])
        right, i = _parse(toks, i + 1)
        if i >= len(toks) or toks[i] != ")":
            raise TermError("expected ')'")
        return Node(p, left, right), i + 1
    if tok == "[":
        entries = []
        i += 1
        while True:
            if i + 1 >= len(toks):
                raise TermError("unterminated n-ary combination")
            entries.append((to_fraction(toks[i]), toks[i + 1]))
            i += 2
            if i < len(toks) and toks[i] == ",":
                i += 1
                continue
            if i < len(toks) and toks[i] == "]":
                return nary_to_binary(entries), i + 1
            raise TermError("expected ',' or ']' in n-ary combination")
    if tok in (")", "]", ",") or tok.startswith("+_{"):
        raise TermError(f"unexpected token {tok!r}")
    return Leaf(tok), i + 1


def distribution_to_text(mu: Distribution) -> str:
    return json.dumps(mu.to_json(), sort_keys=True)
