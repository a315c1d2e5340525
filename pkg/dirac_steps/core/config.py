"""
Configuration settings for dirac-steps
"""

from pydantic_settings import BaseSettings, SettingsConfigDict

from dirac_steps import __version__


class Settings(BaseSettings):
    """Library and CLI settings"""

    # Application
    app_name: str = "dirac-steps"
    app_version: str = __version__

    # Natural units (hbar = c = 1)
    mass: float = 1.0

    # Hypergeometric series
    hyp2f1_tol: float = 1e-12
    hyp2f1_max_terms: int = 100_000
    cancellation_warn_ratio: float = 1e8

    # Sharp steps
    boundary_tol: float = 1e-12  # Gamma_s singular at qV2 = E +- m
    probability_clamp: float = 1e-14
    small_momentum: float = 1e-8  # switch to (p - qA)/(E - qV + m)

    # Smooth step matching
    degenerate_matching_tol: float = 1e-14

    # ODE oracle
    ode_rel_tol: float = 1e-10
    ode_abs_tol: float = 1e-12
    ode_sigma: float = 8.0
    ode_max_steps: int = 200_000
    extraction_max_condition: float = 1e8
    residual_tol: float = 1e-6

    # CLI
    oracle_threshold: float = 1e-6
    default_jobs: int = 1
    log_level: str = "WARNING"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="DIRAC_STEPS_",
        case_sensitive=False,
    )


# Create settings instance
settings = Settings()
