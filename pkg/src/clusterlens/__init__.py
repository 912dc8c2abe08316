"""Cluster pictures of p-adic polynomials from valuations of coefficient polynomials."""
from .errors import InputError, InvariantError, ResourceLimitError, SeparabilityError
from .evaluator import CacheStore, MonicInput, ord_J
from .graphs import WeightedGraph, candidate_set, enumerate_auxiliary, is_auxiliary
from .recover import ClusterPicture, DepthProfile, run
from .valfield import ValuedContext, ord_p

__all__ = [
    "CacheStore", "ClusterPicture", "DepthProfile", "InputError", "InvariantError", "MonicInput",
    "ResourceLimitError", "SeparabilityError", "ValuedContext", "WeightedGraph", "candidate_set",
    "enumerate_auxiliary", "is_auxiliary", "ord_J", "ord_p", "run",
]
__version__ = "0.1.0"
