"""Coauthorship networks and the Turing Number: distance to a laureate seed
set, null-model comparison, centrality, bibliometrics and correlation."""

__version__ = "0.1.0"

from .graph import CollabGraph, build_graph, connected_components, load_graph, save_graph
from .tn import TnResult, compute_tn, null_model, tn_distribution

__all__ = [
    "CollabGraph",
    "TnResult",
    "build_graph",
    "compute_tn",
    "connected_components",
    "load_graph",
    "null_model",
    "save_graph",
    "tn_distribution",
]
