"""Numeric checks of the bounds relating balancing, uncoupling and lambda_2."""

import logging
from dataclasses import asdict, dataclass
from typing import Dict

import numpy as np

from balance.sinkhorn import BalancedMatrix
from consensus.builder import ConsensusMatrix
from core.matrix import sym_eigen

from .measure import uncoupling_measure

logger = logging.getLogger(__name__)

SLACK = 1e-12


@dataclass
class SigmaBoundReport:
    """sigma(P, n1) <= (Sigma / (n r)) sigma(S, n1), Sigma = e^T S e."""

    n1: int
    sigma_S: float
    sigma_P: float
    bound: float
    exact: bool
    passed: bool

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)


@dataclass
class Lambda2BoundReport:
    """|1 - lambda_2(P)| <= 2 sqrt(n) sigma(P, n1)."""

    n1: int
    lambda2: float
    gap: float
    sigma_P: float
    bound: float
    exact: bool
    passed: bool

    @property
    def required(self) -> bool:
        # a heuristic sigma only overestimates, so failing it is informative but not a violation
        return self.exact

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)


def sigma_bound_check(
    S: ConsensusMatrix, B: BalancedMatrix, n1: int, exact_limit: int = 1_000_000
) -> SigmaBoundReport:
    """Compare the uncoupling of P with the bound derived from the uncoupling of S."""
    report_S = uncoupling_measure(S.S, n1, exact_limit)
    report_P = uncoupling_measure(B.P, n1, exact_limit)
    bound = S.total / (S.n * S.r) * report_S.sigma
    passed = report_P.sigma <= bound + SLACK
    if not passed:
        logger.warning(f"⚠️ sigma bound violated at n1={n1}: {report_P.sigma:.6g} > {bound:.6g}")
    return SigmaBoundReport(
        n1=n1, sigma_S=report_S.sigma, sigma_P=report_P.sigma, bound=bound,
        exact=report_S.exact and report_P.exact, passed=passed,
    )


def lambda2_bound_check(B: BalancedMatrix, n1: int, exact_limit: int = 1_000_000) -> Lambda2BoundReport:
    """Check the 2-norm bound on the distance of lambda_2 from 1."""
    lambda2 = float(sym_eigen(B.P, vectors=False).eigenvalues[1])
    report_P = uncoupling_measure(B.P, n1, exact_limit)
    bound = 2.0 * np.sqrt(B.n) * report_P.sigma
    gap = abs(1.0 - lambda2)
    return Lambda2BoundReport(
        n1=n1, lambda2=lambda2, gap=gap, sigma_P=report_P.sigma, bound=bound,
        exact=report_P.exact, passed=gap <= bound + SLACK,
    )
