"""
Lifting one fuzzy relation four ways
====================================

Three points a, b, c with a deliberately non-metric relation: d(b, b) = 0
but d(a, a) = 1, and d(b, a) = 1 while d(a, b) = 1/5.  We compare the two
distributions mu = a/2 + b/2 and nu = b/2 + c/2.
"""

from fractions import Fraction as F

from liftcert import GEOMETRIC, MAX, STANDARD, Distribution, FuzzyRelation, enumerate_vertices, evaluate, lift, power

d = FuzzyRelation.from_entries(
    "abc", {("a", "b"): F(1, 5), ("a", "c"): F(3, 5), ("b", "b"): F(0), ("b", "c"): F(3, 10)}, default=1)
mu = Distribution({"a": F(1, 2), "b": F(1, 2)})
nu = Distribution({"b": F(1, 2), "c": F(1, 2)})

# Every coupling of mu and nu is gamma(a,b) = t, gamma(a,c) = 1/2 - t,
# gamma(b,b) = 1/2 - t, gamma(b,c) = t for t in [0, 1/2].  The polytope is a
# segment, and its two endpoints are the only vertices.
vertices = enumerate_vertices(mu, nu)
for v in vertices:
    print("vertex:", v)

# Each operator evaluates a coupling differently; the lifting takes the best
# coupling.  Standard and max stay rational.  The power mean needs a square
# root, which is kept exact and shown with a certified enclosure.
for op in (STANDARD, MAX, power(2), GEOMETRIC):
    value, witness = lift(op, d, mu, nu)
    print(f"{op.token:>10}: {value.describe():<45} witness {witness}")

# The geometric mean is 0 because the product coupling charges the cell
# (b, b) at distance 0, and a single zero factor annihilates the product.
print("geometric on each vertex:", [str(evaluate(GEOMETRIC, d, v).magnitude) for v in vertices])
