"""Distributed greedy weighted matching: a locally-heaviest-edge protocol,
its sequential counterpart, an exact oracle, and a checked simulator."""

from .graph import (
    Edge,
    GraphError,
    WeightedGraph,
    generate,
    heavier,
    new_graph,
    order_key,
    parse_graph,
    random_corpus,
    serialize_graph,
)
from .reference import (
    Matching,
    candidate,
    is_valid_matching,
    matching_weight,
    optimal_matching,
    sequential_greedy,
)
from .sim import Scheduler, Trace, check_trace, extract_matching, simulate

__all__ = [
    "Edge", "GraphError", "WeightedGraph", "generate", "heavier", "new_graph", "order_key",
    "parse_graph", "random_corpus", "serialize_graph",
    "Matching", "candidate", "is_valid_matching", "matching_weight", "optimal_matching",
    "sequential_greedy",
    "Scheduler", "Trace", "check_trace", "extract_matching", "simulate",
]
