"""Graphs of given girth whose t-th powers have large cliques.

Finite fields and generalised polygons supply the conduits; circular
constructions and their catalog turn them into graphs; the analysis
module measures neighbourhood structure of powers.
"""
from .errors import GirthforgeError
from .graph import INFINITE, BipartiteGraph, Graph

__version__ = "0.1.0"

__all__ = ["Graph", "BipartiteGraph", "INFINITE", "GirthforgeError", "__version__"]
