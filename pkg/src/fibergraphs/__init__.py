"""Fiber graphs of integer matrices: construction, connectivity and mixing."""
from .akfamily import build_Ak, build_Bk, decompose_rhs
from .chain import metropolis_matrix, mixing_times, slem
from .fibergraph import (
    FiberGraph, build_graph, connectivity_report, edge_connectivity, min_degree, vertex_connectivity,
)
from .lattice import IntMatrix, enumerate_fiber, is_pointed, kernel_basis
from .moves import MoveSet, graver_Ak, graver_oracle, groebner_lex_Ak

__version__ = "0.1.0"

__all__ = [
    "FiberGraph", "IntMatrix", "MoveSet", "build_Ak", "build_Bk", "build_graph", "connectivity_report",
    "decompose_rhs", "edge_connectivity", "enumerate_fiber", "graver_Ak", "graver_oracle",
    "groebner_lex_Ak", "is_pointed", "kernel_basis", "metropolis_matrix", "min_degree", "mixing_times",
    "slem", "vertex_connectivity",
]
