"""Random initial probability vectors kept away from the uniform stationary vector."""

import logging

import numpy as np

from utils.errors import DomainError, PathologicalToleranceError

logger = logging.getLogger(__name__)

MAX_REJECTIONS = 100


def random_ipv(n: int, seed: int, uniform_tol: float) -> np.ndarray:
    """
    Draw i.i.d. uniform(0, 1) entries and normalize them to a probability vector.

    A draw within 2-norm distance ``uniform_tol`` of (1/n, ..., 1/n) is rejected
    and redrawn from a fresh child stream of ``seed``.

    Raises:
        DomainError: If n < 2
        PathologicalToleranceError: After 100 consecutive rejections
    """
    if n < 2:
        raise DomainError(f"Initial probability vector needs n >= 2, got {n}")
    uniform = np.full(n, 1.0 / n)

    for attempt, child in enumerate(np.random.SeedSequence(seed).spawn(MAX_REJECTIONS)):
        draw = np.random.default_rng(child).random(n)
        x = draw / draw.sum()
        if np.linalg.norm(x - uniform) >= uniform_tol:
            if attempt:
                logger.info(f"⚠️ Accepted initial vector after {attempt} rejection(s)")
            return x

    raise PathologicalToleranceError(
        f"{MAX_REJECTIONS} consecutive initial vectors fell within {uniform_tol:g} of uniform"
    )
