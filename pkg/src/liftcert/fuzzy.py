"""Finite fuzzy relations and brute-force enumeration of 1-Lipschitz maps."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from ._rational import RationalLike
from .magnitude import Magnitude, Real, format_real, to_real

ENUMERATION_GUARD = 10**7


class FuzzyError(ValueError):
    pass


class GuardExceeded(FuzzyError):
    """An exhaustive oracle was asked to enumerate too many candidates."""


@dataclass(frozen=True)
class FuzzyRelation:
    """A finite carrier with a total ``[0, 1]``-valued distance matrix.

    No symmetry, reflexivity or triangle law is assumed.  ``dist[i][j]`` is
    the distance from ``carrier[i]`` to ``carrier[j]``.  Entries are
    rationals; proof contexts may also hold exact roots (see
    :class:`~liftcert.magnitude.Magnitude`).
    """

    carrier: Tuple[str, ...]
    dist: Tuple[Tuple[Real, ...], ...]

    def __post_init__(self) -> None:
        carrier = tuple(str(c) for c in self.carrier)
        if len(set(carrier)) != len(carrier):
            raise FuzzyError("carrier names must be distinct")
        rows = tuple(tuple(to_real(v) for v in row) for row in self.dist)
        if len(rows) != len(carrier) or any(len(r) != len(carrier) for r in rows):
            raise FuzzyError("distance matrix must be square and match the carrier")
        for row in rows:
            for v in row:
                if not 0 <= v <= 1:
                    raise FuzzyError(f"distance {v} outside [0, 1]")
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "dist", rows)

    @classmethod
    def from_function(cls, carrier: Sequence[str], d: Callable[[str, str], RationalLike]) -> "FuzzyRelation":
        return cls(tuple(carrier), tuple(tuple(d(a, b) for b in carrier) for a in carrier))

    @classmethod
    def from_entries(cls, carrier: Sequence[str], entries: Mapping[Tuple[str, str], RationalLike],
                     default: RationalLike = 1) -> "FuzzyRelation":
        """Matrix equal to ``default`` except at the listed ``(a, b)`` pairs."""
        unknown = {x for pair in entries for x in pair} - set(carrier)
        if unknown:
            raise FuzzyError(f"entries mention names outside the carrier: {sorted(unknown)}")
        return cls.from_function(carrier, lambda a, b: entries.get((a, b), default))

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {c: i for i, c in enumerate(self.carrier)}

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.carrier)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise FuzzyError(f"{name!r} is not in the carrier") from None

    def __call__(self, a: str, b: str) -> Real:
        return self.dist[self.index(a)][self.index(b)]

    @property
    def is_rational(self) -> bool:
        return not any(isinstance(v, Magnitude) for row in self.dist for v in row)

    def values(self) -> List[Real]:
        return sorted({v for row in self.dist for v in row})

    def restrict(self, names: Iterable[str]) -> "FuzzyRelation":
        names = [n for n in self.carrier if n in set(names)]
        return FuzzyRelation.from_function(names, self)

    def to_json(self) -> dict:
        return {
            "carrier": list(self.carrier),
            "dist": [[format_real(v) for v in row] for row in self.dist],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FuzzyRelation":
        try:
            return cls(tuple(data["carrier"]), tuple(tuple(row) for row in data["dist"]))
        except (KeyError, TypeError) as exc:
            raise FuzzyError(f"malformed fuzzy relation: {exc}") from exc


def discrete(carrier: Sequence[str]) -> FuzzyRelation:
    """The relation with every entry equal to 1."""
    if not carrier:
        raise FuzzyError("discrete relation needs a nonempty carrier")
    return FuzzyRelation.from_function(carrier, lambda a, b: 1)


def zero(carrier: Sequence[str]) -> FuzzyRelation:
    return FuzzyRelation.from_function(carrier, lambda a, b: 0)


def is_pseudometric(d: FuzzyRelation) -> bool:
    """Symmetric, zero self-distance, and ``d(a,c) <= min(1, d(a,b) + d(b,c))``."""
    if not d.is_rational:
        raise FuzzyError("triangle checks need rational distances")
    m = d.dist
    n = len(m)
    for i in range(n):
        if m[i][i] != 0:
            return False
        for j in range(n):
            if m[i][j] != m[j][i]:
                return False
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if m[i][k] > min(1, m[i][j] + m[j][k]):
                    return False
    return True


def is_lipschitz(f: Mapping[str, str], src: FuzzyRelation, dst: FuzzyRelation) -> bool:
    return all(dst(f[a], f[b]) <= src(a, b) for a in src.carrier for b in src.carrier)


def lipschitz_maps(src: FuzzyRelation, dst: FuzzyRelation,
                   guard: int = ENUMERATION_GUARD) -> List[Dict[str, str]]:
    """All functions ``f`` with ``dst(f(a), f(b)) <= src(a, b)`` for every pair.

    The search is exhaustive over ``|dst| ** |src|`` candidates (with pruning on
    partial assignments) and refuses to start beyond ``guard``.
    """
    n, k = len(src), len(dst)
    if k ** n > guard:
        raise GuardExceeded(f"{k}^{n} candidate maps exceed the enumeration guard {guard}")
    S, D = src.dist, dst.dist
    out: List[Dict[str, str]] = []
    choice = [0] * n

    def extend(i: int) -> None:
        if i == n:
            out.append({src.carrier[a]: dst.carrier[choice[a]] for a in range(n)})
            return
        for c in range(k):
            if D[c][c] > S[i][i]:
                continue
            if all(D[choice[j]][c] <= S[j][i] and D[c][choice[j]] <= S[i][j] for j in range(i)):
                choice[i] = c
                extend(i + 1)

    extend(0)
    return out
