"""Configuration management for the finite-part library."""

import os
from dataclasses import dataclass
from dotenv import load_dotenv

load_dotenv()

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


@dataclass
class Settings:
    """Numerical settings loaded from environment variables.

    Attributes:
        tolerance: Absolute tolerance used when an operation receives ``tol=None``.
        rel_tolerance: Relative tolerance paired with ``tolerance``.
        epsilon_min: Smallest ε probed by improper limits toward 0.
        divergence_bound: Magnitude beyond which a monotone ε-trace counts as divergent.
        max_subdivisions: Panel budget of a single adaptive integration.
        max_arches: Oscillation arches an ε-trace may traverse before it stops refining.
        numeric_derivatives: Whether handles fall back to finite differences.
        log_level: Root logging level used by the command line.
        output_dir: Base directory for persisted verification reports.
    """

    tolerance: float = float(os.getenv("HPF_TOLERANCE", "1e-9"))
    rel_tolerance: float = float(os.getenv("HPF_REL_TOLERANCE", "1e-9"))
    epsilon_min: float = float(os.getenv("HPF_EPSILON_MIN", "1e-12"))
    divergence_bound: float = float(os.getenv("HPF_DIVERGENCE_BOUND", "1e6"))
    max_subdivisions: int = int(os.getenv("HPF_MAX_SUBDIVISIONS", "4000000"))
    max_arches: int = int(os.getenv("HPF_MAX_ARCHES", str(2**20)))
    numeric_derivatives: bool = _env_flag("HPF_NUMERIC_DERIVATIVES", "true")
    log_level: str = os.getenv("HPF_LOG_LEVEL", "WARNING")
    output_dir: str = os.getenv("HPF_OUTPUT_DIR", "outputs")

    def validate(self) -> None:
        """Validate that numerical settings are usable."""
        if self.tolerance <= 0 or self.rel_tolerance < 0:
            raise ValueError(
                f"Tolerances must be positive: HPF_TOLERANCE={self.tolerance}, "
                f"HPF_REL_TOLERANCE={self.rel_tolerance}"
            )
        if not 0 < self.epsilon_min < 1:
            raise ValueError(f"HPF_EPSILON_MIN must lie in (0, 1), got {self.epsilon_min}")
        if self.divergence_bound <= 0:
            raise ValueError(f"HPF_DIVERGENCE_BOUND must be positive, got {self.divergence_bound}")
        if self.max_subdivisions < 1 or self.max_arches < 1:
            raise ValueError("HPF_MAX_SUBDIVISIONS and HPF_MAX_ARCHES must be at least 1")
        if self.log_level.upper() not in LOG_LEVELS:
            raise ValueError(f"Unknown HPF_LOG_LEVEL: {self.log_level}")


settings = Settings()
