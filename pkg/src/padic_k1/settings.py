"""
Settings Configuration Module

This module defines the configuration settings for the p-adic K1 toolkit
using Pydantic's BaseSettings. It holds the computational budgets (group
order bounds, enumeration caps, tower degree caps) and the defaults used by
the verification sweeps.

The settings can be overridden by environment variables prefixed with
``PADIC_K1_`` or through a .env file. ``PADIC_K1_BUDGET`` scales every
enumeration cap at once.
"""

import structlog
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = structlog.get_logger(__name__)


class Settings(BaseSettings):
    """
    Application settings model that provides configuration for all components.
    """

    # Global multiplier applied to every enumeration cap below
    budget: int = 1
    # Largest group order accepted by the homology operations
    homology_order_bound: int = 64
    # Largest number of matrix cells the cocycle elimination may allocate
    homology_cell_budget: int = 12_000_000
    # Largest group order accepted by the character table construction
    character_order_bound: int = 256
    # Largest group order verified exhaustively at construction
    verify_order_bound: int = 256
    # Coset table cap for Todd-Coxeter enumeration
    coset_bound: int = 20_000
    # Largest absolute degree a residue field tower may reach
    max_field_degree: int = 64
    # Largest |kappa[G]| enumerated by brute force in the residue checks
    residue_enumeration_bound: int = 1 << 16
    # Largest |kappa[G]| for which all (a, b) relation pairs are enumerated
    residue_pair_bound: int = 1 << 8
    # Largest finite unit group enumerated for the Galois cokernel check
    unit_group_bound: int = 1 << 16
    # Default verification parameters
    default_p: int = 3
    default_precision: int = 3
    default_seed: int = 20240917
    default_samples: int = 20
    # Number of worker threads used by the descent sweeps
    sweep_workers: int = 4

    model_config = SettingsConfigDict(
        env_prefix="PADIC_K1_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    def cap(self, value: int) -> int:
        """Scale an enumeration cap by the global budget multiplier."""
        return value * max(self.budget, 1)


# Create a global settings instance
settings = Settings()
logger.debug("settings", settings=settings.model_dump())
