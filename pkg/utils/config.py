"""Configuration management for the stochastic consensus clustering toolkit."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical defaults, overridable through ``SCA_*`` environment variables."""

    # Sinkhorn-Knopp balancing
    sinkhorn_tol: float = 1e-10
    sinkhorn_max_iter: int = 10_000

    # Cyclic Jacobi eigensolver
    eigen_tol: float = 1e-12
    eigen_max_sweeps: int = 100

    # Stochastic clustering
    stability_count: int = 6
    sca_max_iter: int = 1000
    restarts: int = 1

    # Uncoupling measure: enumerate subsets while C(n, n1) stays below this
    exact_limit: int = 1_000_000

    # Ensemble generators
    nmf_max_iter: int = 500
    nmf_tol: float = 1e-6
    kmeans_max_iter: int = 300
    workers: int = 1

    seed: int = 0
    log_level: str = "INFO"

    model_config = SettingsConfigDict(
        env_prefix="SCA_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


def get_settings() -> Settings:
    """
    Get application settings.

    Returns:
        Settings instance with configuration values

    Raises:
        ValueError: If an SCA_* variable cannot be parsed
    """
    try:
        return Settings()
    except Exception as e:
        raise ValueError(
            f"Failed to load settings. Check the SCA_* variables in your environment or .env file. Error: {e}"
        )
