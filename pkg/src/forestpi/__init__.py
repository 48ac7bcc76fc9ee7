"""Explain decision-tree and forest classifiers through prime implicants.

Models over discretized continuous or categorical features are lifted to
multi-valued variables, encoded into Boolean logic, compiled as BDDs, and
explained by enumerating the prime implicants consistent with an instance.
"""

from .boolfn import BddManager
from .encode import build_constraints, decode_negative_term, encode_expression, encode_literal, var_map
from .errors import CapacityError, ParseError
from .ingest import (
    FeatureSpace,
    Forest,
    evaluate_forest,
    lift_instance,
    parse_instance,
    parse_model,
    tree_to_expression,
)
from .mvl import (
    MvLiteral,
    MvTerm,
    MvVariable,
    Space,
    evaluate,
    literal,
    make_term,
    prime_implicants_bruteforce,
)
from .oracle import CheckReport, check_property, demo_highest_bit_failure, demo_prefix_failure
from .pi import Explanation, pi_explanations, prime_implicants

__version__ = "0.1.0"

__all__ = [
    "BddManager",
    "CapacityError",
    "CheckReport",
    "Explanation",
    "FeatureSpace",
    "Forest",
    "MvLiteral",
    "MvTerm",
    "MvVariable",
    "ParseError",
    "Space",
    "build_constraints",
    "check_property",
    "decode_negative_term",
    "demo_highest_bit_failure",
    "demo_prefix_failure",
    "encode_expression",
    "encode_literal",
    "evaluate",
    "evaluate_forest",
    "lift_instance",
    "literal",
    "make_term",
    "parse_instance",
    "parse_model",
    "pi_explanations",
    "prime_implicants",
    "prime_implicants_bruteforce",
    "tree_to_expression",
    "var_map",
    "__version__",
]
