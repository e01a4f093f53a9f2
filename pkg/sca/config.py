"""Run configuration for the stochastic clustering engines."""

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class SCAConfig(BaseModel):
    """Parameters of one stochastic clustering run."""

    k_override: Optional[int] = Field(default=None, ge=2)
    stability_count: int = Field(default=6, ge=1)
    max_iter: int = Field(default=1000, ge=1)
    # None means 1e-3 / sqrt(n), resolved once n is known
    ipv_uniform_tol: Optional[float] = Field(default=None, ge=0)
    seed: int = 0
    splitter: Literal["gap", "kmeans"] = "gap"
    eigen_tol: float = Field(default=1e-12, gt=0)

    @model_validator(mode="after")
    def _iterations_cover_stability(self) -> "SCAConfig":
        if self.max_iter < self.stability_count:
            raise ValueError(
                f"max_iter ({self.max_iter}) must be at least stability_count ({self.stability_count})"
            )
        return self

    def uniform_tol(self, n: int) -> float:
        if self.ipv_uniform_tol is not None:
            return self.ipv_uniform_tol
        return 1e-3 / n ** 0.5
