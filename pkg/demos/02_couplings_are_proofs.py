"""
Couplings as finite proofs
==========================

Any coupling of [s] and [t] is a recipe for a proof that s and t are close:
rewrite both sides into a common shape, then chain interpolative axiom
instances cell by cell.  An optimal coupling gives a proof of the lifted
distance itself, and the resulting certificate can be checked without
solving any optimisation problem.
"""

import json
from fractions import Fraction as F

from liftcert import STANDARD, FuzzyRelation, check, parse_term, product_coupling, prove_lift, synthesize
from liftcert import certificate, denote

d = FuzzyRelation.from_entries(
    "abc", {("a", "b"): F(1, 5), ("a", "c"): F(3, 5), ("b", "b"): F(0), ("b", "c"): F(3, 10)}, default=1)
s = parse_term("[1/2 a, 1/2 b]")
t = parse_term("[1/2 b, 1/2 c]")

# The product coupling is feasible but wasteful: its proof is longer and its
# bound (the expected distance under independence) is worse than optimal.
loose = synthesize(STANDARD, d, s, t, product_coupling(denote(s), denote(t)))
print("product coupling bound:", loose.conclusion.bound.value(STANDARD), "nodes:", loose.size())

tight = prove_lift(STANDARD, d, s, t)
print("optimal bound:", tight.conclusion.bound.value(STANDARD), "nodes:", tight.size())
for path, node in tight.walk():
    print(f"  {path:<40} {node.rule.value:<12} {node.conclusion}")
print("checker:", check(STANDARD, tight, finite_mode=True))

# Certificates are canonical JSON.  Lowering the claimed bound from 1/4 to
# 1/8 is caught at the node where the bounds stop matching.
data = json.loads(certificate.dumps(tight, STANDARD))
data["derivation"]["conclusion"]["bound"] = {"expr": {"const": "1/8"}}
forged, op, _ = certificate.from_json(data)
print("forged certificate:", check(op, forged))
