"""Container-based exact solvers for independent sets, coloring, and k-SAT."""

from .core import CnfFormula, Graph, Hypergraph, VertexSet

__all__ = ["CnfFormula", "Graph", "Hypergraph", "VertexSet"]
__version__ = "0.1.0"
