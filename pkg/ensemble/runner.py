"""Ensemble runner: fans out clustering members and collects them in member order."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Literal, Tuple

from pydantic import BaseModel, Field, field_validator

from .kmeans import kmeans
from .nmf import nmf_cluster
from .types import ClusteringResult, DataMatrix

logger = logging.getLogger(__name__)


class MemberSpec(BaseModel):
    """``repetitions`` runs of one method at one k."""

    method: Literal["nmf", "kmeans"]
    k: int = Field(ge=2)
    repetitions: int = Field(default=1, ge=1)

    @classmethod
    def parse(cls, text: str) -> "MemberSpec":
        """Parse ``method:k:repetitions`` (repetitions optional), e.g. ``nmf:2:50``."""
        parts = text.strip().split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"Member spec {text!r} must look like method:k[:repetitions]")
        fields = {"method": parts[0].lower(), "k": int(parts[1])}
        if len(parts) == 3:
            fields["repetitions"] = int(parts[2])
        return cls(**fields)


class EnsembleSpec(BaseModel):
    """Which members to run and how they are seeded."""

    members: List[MemberSpec]
    seed_base: int = 0
    nmf_max_iter: int = Field(default=500, ge=1)
    nmf_tol: float = Field(default=1e-6, gt=0)
    kmeans_max_iter: int = Field(default=300, ge=1)

    @field_validator("members")
    @classmethod
    def _nonempty(cls, members: List[MemberSpec]) -> List[MemberSpec]:
        if not members:
            raise ValueError("Ensemble needs at least one member spec")
        return members

    @property
    def size(self) -> int:
        return sum(member.repetitions for member in self.members)


class EnsembleRunner:
    """Generates ensemble clusterings for a data matrix."""

    def __init__(self, spec: EnsembleSpec, workers: int = 1):
        """
        Initialize the runner.

        Args:
            spec: Member list and iteration limits
            workers: Thread count for running members concurrently
        """
        self.spec = spec
        self.workers = max(1, workers)

    def plan(self) -> List[Tuple[str, int, int]]:
        """(method, k, seed) per member; member i is seeded with seed_base + i."""
        jobs = []
        for member in self.spec.members:
            for _ in range(member.repetitions):
                jobs.append((member.method, member.k, self.spec.seed_base + len(jobs)))
        return jobs

    def _run_member(self, A: DataMatrix, job: Tuple[str, int, int]) -> ClusteringResult:
        method, k, seed = job
        if method == "nmf":
            return nmf_cluster(A, k, seed=seed, max_iter=self.spec.nmf_max_iter, tol=self.spec.nmf_tol)
        return kmeans(A, k, seed=seed, max_iter=self.spec.kmeans_max_iter)

    def run(self, A: DataMatrix) -> List[ClusteringResult]:
        """
        Run every member.

        Returns:
            Results in member order, independent of scheduling
        """
        jobs = self.plan()
        logger.info(f"🔍 Running ensemble of {len(jobs)} members with {self.workers} worker(s)")

        if self.workers == 1:
            results = [self._run_member(A, job) for job in jobs]
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(lambda job: self._run_member(A, job), jobs))

        logger.info(f"✅ Ensemble complete: {len(results)} clusterings")
        return results


def run_ensemble(A: DataMatrix, spec: EnsembleSpec, workers: int = 1) -> List[ClusteringResult]:
    return EnsembleRunner(spec, workers=workers).run(A)
