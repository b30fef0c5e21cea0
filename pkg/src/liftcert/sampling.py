"""Random desk-scale instances: fuzzy relations, distributions, couplings."""

from __future__ import annotations

import random
import string
from fractions import Fraction
from typing import List, Optional, Sequence

from .fuzzy import FuzzyRelation
from .lifting import Coupling, combine_couplings, product_coupling, transportation_lp
from .terms import Distribution


def names(n: int) -> List[str]:
    return list(string.ascii_lowercase[:n])


def random_rational(rng: random.Random, max_den: int = 10, lo: Fraction = Fraction(0)) -> Fraction:
    while True:
        den = rng.randint(1, max_den)
        q = Fraction(rng.randint(0, den), den)
        if q >= lo:
            return q


def random_relation(rng: random.Random, n: Optional[int] = None, max_size: int = 6,
                    max_den: int = 10, zero_bias: float = 0.15) -> FuzzyRelation:
    """Arbitrary fuzzy relation with entries ``k/den``, ``den <= max_den``."""
    n = n or rng.randint(1, max_size)
    carrier = names(n)
    rows = [[Fraction(0) if rng.random() < zero_bias else random_rational(rng, max_den) for _ in carrier]
            for _ in carrier]
    return FuzzyRelation(tuple(carrier), tuple(tuple(r) for r in rows))


def random_pseudometric(rng: random.Random, n: Optional[int] = None, max_size: int = 6,
                        max_den: int = 10) -> FuzzyRelation:
    """Shortest-path closure of a random symmetric matrix with zero diagonal."""
    n = n or rng.randint(2, max_size)
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = random_rational(rng, max_den)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if m[i][k] + m[k][j] < m[i][j]:
                    m[i][j] = m[i][k] + m[k][j]
    return FuzzyRelation(tuple(names(n)), tuple(tuple(r) for r in m))


def random_distribution(rng: random.Random, carrier: Sequence[str], max_support: int = 4,
                        max_den: int = 10) -> Distribution:
    k = rng.randint(1, min(max_support, len(carrier)))
    support = rng.sample(list(carrier), k)
    raw = [rng.randint(1, max_den) for _ in support]
    total = sum(raw)
    return Distribution({x: Fraction(r, total) for x, r in zip(support, raw)})


def random_vertex(rng: random.Random, mu: Distribution, nu: Distribution) -> Coupling:
    """The LP optimum for random integer costs, which is a vertex of the polytope."""
    costs = {(a, b): Fraction(rng.randint(0, 20)) for a in mu for b in nu}
    return transportation_lp(costs, mu, nu)


def random_coupling(rng: random.Random, mu: Distribution, nu: Distribution) -> Coupling:
    """A coupling that is usually not a vertex: product mixed with a random vertex."""
    p = Fraction(rng.randint(1, 9), 10)
    return combine_couplings(product_coupling(mu, nu), random_vertex(rng, mu, nu), p)
