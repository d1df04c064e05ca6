"""Exact checks of signless Laplacian eigenvalue characterisations on small graphs."""

from .graph_core import Graph, complement, parse_graph6, write_graph6
from .exact_linalg import char_poly, q_matrix
from .theorems import check_th1, check_th2, check_th3, certificate_vectors

__all__ = [
    "Graph", "complement", "parse_graph6", "write_graph6", "char_poly", "q_matrix",
    "check_th1", "check_th2", "check_th3", "certificate_vectors",
]
__version__ = "0.1.0"
