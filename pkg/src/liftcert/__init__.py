"""Exact liftings of fuzzy relations to distributions, with finite proof certificates."""

from .fuzzy import FuzzyRelation, discrete, is_lipschitz, is_pseudometric, lipschitz_maps, zero
from .lifting import Coupling, Lifted, enumerate_vertices, evaluate, lift, product_coupling, transportation_lp
from .magnitude import Magnitude
from .operators import GEOMETRIC, MAX, STANDARD, Bound, LiftOperator, LiftValue, power
from .proofs import Derivation, Judgment, Rule, Verdict, check, interpolation_chain, prove_lift, synthesize
from .terms import Distribution, Leaf, Node, denote, nary_to_binary, parse_term
from .theories import QuantEquation, check_operator_conditions, satisfies, two_zeros_model

__version__ = "0.1.0"

__all__ = [
    "Bound", "Coupling", "Derivation", "Distribution", "FuzzyRelation", "GEOMETRIC", "Judgment", "Leaf",
    "LiftOperator", "LiftValue", "Lifted", "MAX", "Magnitude", "Node", "QuantEquation", "Rule", "STANDARD",
    "Verdict", "check", "check_operator_conditions", "denote", "discrete", "enumerate_vertices", "evaluate",
    "interpolation_chain", "is_lipschitz", "is_pseudometric", "lift", "lipschitz_maps", "nary_to_binary",
    "parse_term", "power", "product_coupling", "prove_lift", "satisfies", "synthesize", "transportation_lp",
    "two_zeros_model", "zero",
]
