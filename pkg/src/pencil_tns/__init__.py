"""Exact matrix pencil invariants and triangular tensor network varieties."""

from .pencil import MatrixPencil, KroneckerForm, kronecker_decompose, generic_structure
from .tensor import DenseTensor, random_tensor
from .network import Network, TriangleConfig, dim_triangle, defect_triangle, jacobian_rank_dim

__all__ = [
    "DenseTensor",
    "KroneckerForm",
    "MatrixPencil",
    "Network",
    "TriangleConfig",
    "defect_triangle",
    "dim_triangle",
    "generic_structure",
    "jacobian_rank_dim",
    "kronecker_decompose",
    "random_tensor",
]
