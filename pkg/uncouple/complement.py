"""Stochastic complements of diagonal blocks."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from core.matrix import BlockPartition, permute_sym
from utils.errors import DimensionError, DomainError, SingularityError

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-13


@dataclass(eq=False)
class StochasticComplement:
    """C_ii = P_ii + P_i* (I - P_i)^-1 P_*i for one block of a partition."""

    C: np.ndarray
    block: int
    partition: BlockPartition

    @property
    def residual(self) -> float:
        """Largest deviation of a row or column sum of C from 1."""
        return float(max(np.abs(self.C.sum(axis=1) - 1).max(), np.abs(self.C.sum(axis=0) - 1).max()))


def stochastic_complement(P: np.ndarray, part: BlockPartition, block: int) -> StochasticComplement:
    """
    Stochastic complement of block ``block`` of P.

    (I - P_i) is factored with partial pivoting and solved against P_*i; no
    explicit inverse is formed.

    Raises:
        DimensionError: If the partition does not match P
        DomainError: If the block is the whole index set
        SingularityError: If a pivot of (I - P_i) falls below 1e-13
    """
    P = np.asarray(P, dtype=float)
    if part.n != P.shape[0]:
        raise DimensionError(f"Partition of {part.n} indices does not fit a {P.shape} matrix", expected=P.shape[0], got=part.n)
    inside = part.members(block)
    outside = np.flatnonzero(part.labels != block)
    if outside.size == 0:
        raise DomainError("Stochastic complement needs a proper block")

    P_ii = P[np.ix_(inside, inside)]
    P_io = P[np.ix_(inside, outside)]
    P_oi = P[np.ix_(outside, inside)]
    I_minus = np.eye(outside.size) - P[np.ix_(outside, outside)]

    lu, piv = lu_factor(I_minus, check_finite=True)
    if np.abs(np.diag(lu)).min() < PIVOT_TOL:
        raise SingularityError(f"I - P_i is singular for block {block}; P is probably reducible")
    C = P_ii + P_io @ lu_solve((lu, piv), P_oi)
    return StochasticComplement(C=C, block=block, partition=part)


def interchanged_complement(P: np.ndarray, part: BlockPartition, block: int) -> StochasticComplement:
    """
    Complement of ``block`` computed after moving that block to the front.

    The symmetrically permuted matrix is re-partitioned into two blocks
    (``block`` versus everything else); its leading complement equals the
    complement of ``block`` in the original partition.
    """
    perm, swapped = part.interchange(block)
    P_tilde = permute_sym(P, perm)
    size = part.sizes[block]
    two_block = BlockPartition((np.arange(part.n) >= size).astype(int))
    result = stochastic_complement(P_tilde, two_block, 0)
    return StochasticComplement(C=result.C, block=block, partition=swapped)
