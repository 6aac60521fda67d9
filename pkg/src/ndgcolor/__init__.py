"""Proper colourings in which high-degree vertices see several colours."""
from ._accel import backend_name
from .brooks import brooks_color, extend_coloring_pivot, greedy_color
from .decompose import (AlphaVector, CliqueCertificate, Decomposition, alpha_split, decompose_lovasz, descend_phi,
                        eliminate_large_cliques, find_large_clique, omega_coloring, phi, verify_decomposition)
from .errors import BudgetExceeded, InvariantBreach, LemmaFailure, NdgError, NoNondegenerateChange, PreconditionError
from .graph import Graph, MultiGraph, peel
from .lemma import LemmaInstance, Limits, solve, verify_rainbow
from .pipeline import NdgReport, NdgResult, amplify_min_degree, ndg_color, params, verify_ndg

__version__ = "0.1.0"

__all__ = [
    "AlphaVector", "BudgetExceeded", "CliqueCertificate", "Decomposition", "Graph", "InvariantBreach",
    "LemmaFailure", "LemmaInstance", "Limits", "MultiGraph", "NdgError", "NdgReport", "NdgResult",
    "NoNondegenerateChange", "PreconditionError", "alpha_split", "amplify_min_degree", "backend_name",
    "brooks_color", "decompose_lovasz", "descend_phi", "eliminate_large_cliques", "extend_coloring_pivot",
    "find_large_clique", "greedy_color", "ndg_color", "omega_coloring", "params", "peel", "phi", "solve",
    "verify_decomposition", "verify_ndg", "verify_rainbow",
]
