"""Copeland-type winners, popularity certificates and hardness gadgets for matchings
under weak preferences."""

from .election import ElectionResult, compare, is_stable, vote
from .model import (AugmentedMatching, Instance, Matching, ParseError, augment, parse_instance,
                    parse_matching, random_instance, serialize_instance, serialize_matching)
from .oracle import (BudgetExceeded, ScoreRecord, UniformMarginals, copeland_winners,
                     enumerate_matchings, exact_marginals, is_popular, score_table,
                     weak_copeland_winners)

__version__ = "0.1.0"

__all__ = [
    "AugmentedMatching",
    "BudgetExceeded",
    "ElectionResult",
    "Instance",
    "Matching",
    "ParseError",
    "ScoreRecord",
    "UniformMarginals",
    "augment",
    "compare",
    "copeland_winners",
    "enumerate_matchings",
    "exact_marginals",
    "is_popular",
    "is_stable",
    "parse_instance",
    "parse_matching",
    "random_instance",
    "score_table",
    "serialize_instance",
    "serialize_matching",
    "vote",
    "weak_copeland_winners",
]
