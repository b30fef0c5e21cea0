"""
Four convex-algebra structures on [0, 1]
========================================

The standard sum, max, power means and the geometric mean all satisfy the
convex-algebra laws and are monotone, so each gives a lifting of fuzzy
relations.  Power means grow with their order, so the liftings are ordered
as well.
"""

import random
from fractions import Fraction as F

from liftcert import GEOMETRIC, MAX, STANDARD, check_operator_conditions, lift, power
from liftcert.sampling import random_distribution, random_relation

p, q = F(1, 3), F(3, 4)
x, y, z = F(1, 5), F(7, 10), F(1, 2)
for op in (STANDARD, MAX, power(2), GEOMETRIC):
    report = check_operator_conditions(op, p, q, x, y, z)
    print(f"{op.token:>10}: x (+)_p y = {op.oplus(p, x, y)}; laws ok: {report.ok} ({report.checked} checks)")

# Skew associativity reassociates with weights pq and (1-p)q/(1-pq).  The
# values below are exact roots, so the comparison is exact as well.
r = (1 - p) * q / (1 - p * q)
lhs = power(2).oplus(q, power(2).oplus(p, x, y), z)
rhs = power(2).oplus(p * q, x, power(2).oplus(r, y, z))
print("power:2 reassociation:", lhs, "==", rhs, "->", lhs == rhs)

rng = random.Random(0)
d = random_relation(rng, n=5)
mu, nu = random_distribution(rng, d.carrier), random_distribution(rng, d.carrier)
chain = [(op.token, lift(op, d, mu, nu).value.magnitude) for op in (STANDARD, power(2), power(4), MAX)]
for token, value in chain:
    print(f"{token:>10}: {value.decimal()}")
print("ordered:", all(a[1] <= b[1] for a, b in zip(chain, chain[1:])))
