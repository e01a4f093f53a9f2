"""Dense symmetric matrix core."""

from .matrix import (
    BlockPartition,
    Spectrum,
    as_sym_matrix,
    evolve,
    inverse_permutation,
    is_irreducible,
    normalize_probability,
    permute_sym,
    stochastic_residual,
    sym_eigen,
)

__all__ = [
    "BlockPartition",
    "Spectrum",
    "as_sym_matrix",
    "evolve",
    "inverse_permutation",
    "is_irreducible",
    "normalize_probability",
    "permute_sym",
    "stochastic_residual",
    "sym_eigen",
]
