"""Couplings, exact transportation LPs and the generalised Kantorovich liftings.

``lift(op, d, mu, nu)`` returns the infimum over couplings of ``mu`` and ``nu``
of the homomorphic evaluation of ``d`` under ``op``, together with a coupling
attaining it.  All optimisation is carried out in exact rational arithmetic:

* ``standard`` and ``power:k`` solve a transportation LP on costs ``d`` and
  ``d**k`` (the k-th root is monotone and applied afterwards);
* ``max`` is a bottleneck problem solved by threshold search with an integer
  max-flow feasibility test;
* ``geometric`` returns 0 when some admissible cell has distance 0, and
  otherwise solves the LP on high-precision rational approximations of
  ``log d``; on small instances the winning vertex is then certified exactly
  against every vertex of the transportation polytope.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import mpmath
import networkx as nx

from ._rational import DEFAULT_PRECISION, RationalLike, format_fraction, to_fraction
from .fuzzy import FuzzyRelation, GuardExceeded
from .magnitude import Magnitude
from .operators import LiftOperator, LiftValue
from .terms import Distribution

VERTEX_GUARD = 20
PAIR_SEPARATOR = "|"
LOG_BITS = 256


class LiftError(ValueError):
    pass


Cell = Tuple[str, str]


class Coupling:
    """Joint distribution on pairs with exactly prescribed marginals."""

    __slots__ = ("mass", "mu", "nu")

    def __init__(self, mass: Mapping[Cell, RationalLike], mu: Distribution, nu: Distribution):
        clean: Dict[Cell, Fraction] = {}
        for (a, b), w in mass.items():
            w = to_fraction(w)
            if w < 0:
                raise LiftError(f"negative mass at {(a, b)}")
            if w > 0:
                clean[(a, b)] = clean.get((a, b), Fraction(0)) + w
        row: Dict[str, Fraction] = {}
        col: Dict[str, Fraction] = {}
        for (a, b), w in clean.items():
            row[a] = row.get(a, Fraction(0)) + w
            col[b] = col.get(b, Fraction(0)) + w
        if row != dict(mu.items()) or col != dict(nu.items()):
            raise LiftError("coupling marginals do not match")
        self.mass = dict(sorted(clean.items()))
        self.mu = mu
        self.nu = nu

    @property
    def support(self) -> Tuple[Cell, ...]:
        return tuple(self.mass)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Coupling):
            return self.mass == other.mass and self.mu == other.mu and self.nu == other.nu
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self.mass.items()))

    def __repr__(self) -> str:
        cells = ", ".join(f"{a}{PAIR_SEPARATOR}{b}: {format_fraction(w)}" for (a, b), w in self.mass.items())
        return f"Coupling({{{cells}}})"

    def to_json(self) -> dict:
        return {
            "mass": {f"{a}{PAIR_SEPARATOR}{b}": format_fraction(w) for (a, b), w in self.mass.items()},
            "mu": self.mu.to_json(),
            "nu": self.nu.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Coupling":
        mass = {}
        for key, w in data["mass"].items():
            a, sep, b = key.partition(PAIR_SEPARATOR)
            if not sep or PAIR_SEPARATOR in b:
                raise LiftError(f"bad coupling cell key {key!r}")
            mass[(a, b)] = to_fraction(w)
        return cls(mass, Distribution.from_json(data["mu"]), Distribution.from_json(data["nu"]))


def product_coupling(mu: Distribution, nu: Distribution) -> Coupling:
    """The independent product ``mu x nu``."""
    return Coupling({(a, b): wa * wb for a, wa in mu.items() for b, wb in nu.items()}, mu, nu)


def combine_couplings(g1: Coupling, g2: Coupling, p: RationalLike) -> Coupling:
    """``p g1 + (1-p) g2``, a coupling of the mixed marginals."""
    from .terms import convex_combine

    p = to_fraction(p)
    if not 0 < p < 1:
        raise LiftError("p must lie in (0, 1)")
    cells = set(g1.mass) | set(g2.mass)
    mass = {c: p * g1.mass.get(c, Fraction(0)) + (1 - p) * g2.mass.get(c, Fraction(0)) for c in cells}
    return Coupling(mass, convex_combine(g1.mu, g2.mu, p), convex_combine(g1.nu, g2.nu, p))


def _check_support(d: FuzzyRelation, names) -> None:
    missing = [x for x in names if x not in d]
    if missing:
        raise LiftError(f"support outside carrier: {missing}")


def evaluate(op: LiftOperator, d: FuzzyRelation, g: Coupling,
             precision: Fraction = DEFAULT_PRECISION) -> LiftValue:
    """Homomorphic evaluation of ``d`` on the coupling ``g``."""
    _check_support(d, {x for cell in g.mass for x in cell})
    return LiftValue.of(op.combine((w, d(a, b)) for (a, b), w in g.mass.items()), op, precision)


# -- transportation LP ----------------------------------------------------------

def _cost_matrix(costs, rows, cols) -> List[List[Fraction]]:
    if isinstance(costs, Mapping):
        return [[to_fraction(costs[(a, b)]) for b in cols] for a in rows]
    matrix = [[to_fraction(c) for c in row] for row in costs]
    if len(matrix) != len(rows) or any(len(r) != len(cols) for r in matrix):
        raise LiftError("cost matrix shape does not match the supports")
    return matrix


def transportation_lp(costs: Union[Sequence[Sequence[RationalLike]], Mapping[Cell, RationalLike]],
                      mu: Distribution, nu: Distribution) -> Coupling:
    """Exact vertex-optimal coupling minimising ``sum gamma * cost``.

    ``costs`` is either a matrix aligned with ``mu.support`` x ``nu.support``
    or a mapping from cells to costs.  This is the primal simplex method
    specialised to the transportation polytope: bases are spanning trees of
    the bipartite row/column graph, the start is the north-west corner
    solution, and Bland's rule (lowest-index entering cell, lowest-index
    leaving cell among ties, row-major order) rules out cycling.
    """
    rows, cols = mu.support, nu.support
    m, n = len(rows), len(cols)
    C = _cost_matrix(costs, rows, cols)

    s = [mu[a] for a in rows]
    t = [nu[b] for b in cols]
    basis: Dict[Tuple[int, int], Fraction] = {}
    i = j = 0
    while True:
        v = min(s[i], t[j])
        basis[(i, j)] = v
        s[i] -= v
        t[j] -= v
        if i == m - 1 and j == n - 1:
            break
        if (s[i] == 0 and i < m - 1) or j == n - 1:
            i += 1
        else:
            j += 1

    while True:
        u, w = _potentials(basis, C, m, n)
        entering = None
        for idx in range(m * n):
            cell = divmod(idx, n)
            if cell not in basis and C[cell[0]][cell[1]] - u[cell[0]] - w[cell[1]] < 0:
                entering = cell
                break
        if entering is None:
            break
        path = _tree_path(basis, m, ("c", entering[1]), ("r", entering[0]))
        minus = path[0::2]
        plus = path[1::2]
        theta = min(basis[c] for c in minus)
        leaving = min((c for c in minus if basis[c] == theta), key=lambda c: c[0] * n + c[1])
        for c in plus:
            basis[c] += theta
        for c in minus:
            basis[c] -= theta
        basis[entering] = theta
        del basis[leaving]

    return Coupling({(rows[i], cols[j]): v for (i, j), v in basis.items()}, mu, nu)


def _potentials(basis, C, m, n):
    u: List[Optional[Fraction]] = [None] * m
    w: List[Optional[Fraction]] = [None] * n
    u[0] = Fraction(0)
    adj_r: Dict[int, List[int]] = {}
    adj_c: Dict[int, List[int]] = {}
    for i, j in basis:
        adj_r.setdefault(i, []).append(j)
        adj_c.setdefault(j, []).append(i)
    stack = [("r", 0)]
    while stack:
        kind, k = stack.pop()
        if kind == "r":
            for j in adj_r.get(k, ()):
                if w[j] is None:
                    w[j] = C[k][j] - u[k]
                    stack.append(("c", j))
        else:
            for i in adj_c.get(k, ()):
                if u[i] is None:
                    u[i] = C[i][k] - w[k]
                    stack.append(("r", i))
    return u, w


def _tree_path(basis, m, start, goal) -> List[Tuple[int, int]]:
    """Basis cells along the unique tree path from ``start`` to ``goal``."""
    adj: Dict[Tuple[str, int], List[Tuple[Tuple[str, int], Tuple[int, int]]]] = {}
    for (i, j) in basis:
        adj.setdefault(("r", i), []).append((("c", j), (i, j)))
        adj.setdefault(("c", j), []).append((("r", i), (i, j)))
    parent: Dict[Tuple[str, int], Optional[Tuple[Tuple[str, int], Tuple[int, int]]]] = {start: None}
    queue = [start]
    while queue:
        node = queue.pop(0)
        if node == goal:
            break
        for nxt, cell in adj.get(node, ()):
            if nxt not in parent:
                parent[nxt] = (node, cell)
                queue.append(nxt)
    path = []
    node = goal
    while parent[node] is not None:
        prev, cell = parent[node]
        path.append(cell)
        node = prev
    path.reverse()
    return path


# -- vertex enumeration oracle -----------------------------------------------

def enumerate_vertices(mu: Distribution, nu: Distribution, guard: int = VERTEX_GUARD) -> List[Coupling]:
    """All vertices of the transportation polytope, by brute force.

    Every vertex is the unique solution of the marginal equations restricted
    to some spanning tree of the bipartite support graph (possibly with zero
    entries in degenerate cases).  All spanning trees are enumerated, each
    tree system is solved by leaf elimination, and nonnegative solutions are
    kept and deduplicated.
    """
    rows, cols = mu.support, nu.support
    m, n = len(rows), len(cols)
    if m * n > guard:
        raise GuardExceeded(f"{m}x{n} polytope exceeds the vertex-enumeration guard {guard}")
    seen = set()
    out: List[Coupling] = []
    for tree in _spanning_trees(m, n):
        sol = _solve_tree(tree, [mu[a] for a in rows], [nu[b] for b in cols], m, n)
        if sol is None or any(v < 0 for v in sol.values()):
            continue
        key = tuple(sorted((c, v) for c, v in sol.items() if v > 0))
        if key in seen:
            continue
        seen.add(key)
        out.append(Coupling({(rows[i], cols[j]): v for (i, j), v in sol.items()}, mu, nu))
    return out


def _spanning_trees(m: int, n: int) -> Iterator[List[Tuple[int, int]]]:
    cells = [(i, j) for i in range(m) for j in range(n)]
    need = m + n - 1
    parent = list(range(m + n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    chosen: List[Tuple[int, int]] = []
    row_used = [0] * m

    def rec(k: int) -> Iterator[List[Tuple[int, int]]]:
        if len(chosen) == need:
            yield list(chosen)
            return
        if len(cells) - k < need - len(chosen):
            return
        i, j = cells[k]
        # leaving a row behind without any edge can never become spanning
        last_of_row = j == n - 1
        ri, rj = find(i), find(m + j)
        if ri != rj:
            parent[ri] = rj
            chosen.append((i, j))
            row_used[i] += 1
            yield from rec(k + 1)
            row_used[i] -= 1
            chosen.pop()
            parent[ri] = ri
        if not (last_of_row and row_used[i] == 0):
            yield from rec(k + 1)

    yield from rec(0)


def _solve_tree(tree, supply, demand, m, n) -> Optional[Dict[Tuple[int, int], Fraction]]:
    rem = {("r", i): supply[i] for i in range(m)}
    rem.update({("c", j): demand[j] for j in range(n)})
    incident: Dict[Tuple[str, int], set] = {node: set() for node in rem}
    for cell in tree:
        incident[("r", cell[0])].add(cell)
        incident[("c", cell[1])].add(cell)
    sol: Dict[Tuple[int, int], Fraction] = {}
    pending = set(tree)
    while pending:
        leaf = next((node for node in sorted(incident) if len(incident[node]) == 1), None)
        if leaf is None:
            return None
        (cell,) = incident[leaf]
        value = rem[leaf]
        sol[cell] = value
        pending.discard(cell)
        other = ("c", cell[1]) if leaf[0] == "r" else ("r", cell[0])
        rem[other] -= value
        rem[leaf] = Fraction(0)
        incident[leaf].discard(cell)
        incident[other].discard(cell)
    if any(v != 0 for v in rem.values()):
        return None
    return sol


# -- bottleneck ------------------------------------------------------------------

def _threshold_coupling(d: FuzzyRelation, mu: Distribution, nu: Distribution,
                        theta: Fraction) -> Optional[Coupling]:
    """A coupling supported on cells with ``d <= theta``, if one exists."""
    scale = math.lcm(*(w.denominator for w in list(mu.values()) + list(nu.values())))
    G = nx.DiGraph()
    for a, w in mu.items():
        G.add_edge("s", ("r", a), capacity=int(w * scale))
    for b, w in nu.items():
        G.add_edge(("c", b), "t", capacity=int(w * scale))
    for a in mu:
        for b in nu:
            if d(a, b) <= theta:
                G.add_edge(("r", a), ("c", b), capacity=scale)
    value, flow = nx.maximum_flow(G, "s", "t")
    if value != scale:
        return None
    mass = {}
    for a in mu:
        for node, f in flow.get(("r", a), {}).items():
            if f:
                mass[(a, node[1])] = Fraction(f, scale)
    return Coupling(mass, mu, nu)


def bottleneck(d: FuzzyRelation, mu: Distribution, nu: Distribution) -> Tuple[Fraction, Coupling]:
    """Smallest threshold admitting a coupling on cells of distance <= threshold."""
    thresholds = sorted({d(a, b) for a in mu for b in nu})
    lo, hi = 0, len(thresholds) - 1
    best = _threshold_coupling(d, mu, nu, thresholds[hi])
    assert best is not None  # every coupling is admissible at the largest threshold
    while lo < hi:
        mid = (lo + hi) // 2
        g = _threshold_coupling(d, mu, nu, thresholds[mid])
        if g is None:
            lo = mid + 1
        else:
            hi, best = mid, g
    return max(d(a, b) for a, b in best.mass), best


# -- the lifting -------------------------------------------------------------------

class Lifted(NamedTuple):
    value: LiftValue
    coupling: Coupling


def _log_cost(x: Fraction) -> Fraction:
    with mpmath.workprec(LOG_BITS):
        v = mpmath.log(mpmath.mpf(x.numerator) / x.denominator)
        man, exp = v.man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


def lift(op: LiftOperator, d: FuzzyRelation, mu: Distribution, nu: Distribution,
         precision: Fraction = DEFAULT_PRECISION) -> Lifted:
    """Lifted distance ``K^op(d)(mu, nu)`` and an optimal coupling."""
    _check_support(d, list(mu) + list(nu))
    if not d.restrict(list(mu) + list(nu)).is_rational:
        raise LiftError("lifting needs rational distances on the supports")
    if op.kind == "max":
        _, g = bottleneck(d, mu, nu)
    elif op.kind == "standard":
        g = transportation_lp({(a, b): d(a, b) for a in mu for b in nu}, mu, nu)
    elif op.kind == "power":
        g = transportation_lp({(a, b): d(a, b) ** op.k for a in mu for b in nu}, mu, nu)
    else:
        g = _geometric_coupling(d, mu, nu)
    return Lifted(evaluate(op, d, g, precision), g)


def _geometric_coupling(d: FuzzyRelation, mu: Distribution, nu: Distribution) -> Coupling:
    if any(d(a, b) == 0 for a in mu for b in nu):
        return product_coupling(mu, nu)
    g = transportation_lp({(a, b): _log_cost(d(a, b)) for a in mu for b in nu}, mu, nu)
    if len(mu) * len(nu) > VERTEX_GUARD:
        return g
    # certify the LP vertex against every vertex with exact comparisons
    best_value = _geometric_value(d, g)
    for v in enumerate_vertices(mu, nu):
        value = _geometric_value(d, v)
        if value < best_value:
            g, best_value = v, value
    return g


def _geometric_value(d: FuzzyRelation, g: Coupling) -> Magnitude:
    from .operators import GEOMETRIC

    return GEOMETRIC.combine((w, d(a, b)) for (a, b), w in g.mass.items())
