"""Configuration management for the holonomy toolkit."""
from functools import lru_cache
from typing import Any, Dict, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical defaults and logging options, overridable through HOLONOMY_* variables."""

    # Application
    APP_NAME: str = Field(default="hopf-holonomy")
    APP_VERSION: str = Field(default="1.0.0")

    # Integrator
    DEFAULT_STEPS: int = Field(default=10_000, ge=1)
    MIN_CIRCLE_STEPS: int = Field(default=8, ge=4)
    FINITE_DIFFERENCE_STEP: float = Field(default=1e-6, gt=0.0)
    MAX_STEP_HALVINGS: int = Field(default=6, ge=0)
    MAX_LIFT_SWEEPS: int = Field(default=16, ge=2)
    LIFT_SWEEP_TOLERANCE: float = Field(default=1e-9, gt=0.0)
    RENORMALIZE_EVERY: int = Field(default=64, ge=0)

    # Tolerances
    CONSTRAINT_TOLERANCE: float = Field(default=1e-9, gt=0.0)
    EXP_TOLERANCE: float = Field(default=1e-12, gt=0.0)
    BRACKET_RESIDUAL_TOLERANCE: float = Field(default=1e-12, gt=0.0)
    ORTHONORMAL_TOLERANCE: float = Field(default=1e-10, gt=0.0)
    CLASSIFICATION_TOLERANCE: float = Field(default=1e-9, gt=0.0)
    SPAN_RESIDUAL_TOLERANCE: float = Field(default=1e-8, gt=0.0)
    DEPENDENCE_TOLERANCE: float = Field(default=1e-12, gt=0.0)
    CLOSURE_TOLERANCE: float = Field(default=1e-12, gt=0.0)
    PROJECTION_TOLERANCE: float = Field(default=1e-8, gt=0.0)
    TANGENT_TOLERANCE: float = Field(default=1e-8, gt=0.0)
    HORIZONTALITY_ACCEPT: float = Field(default=1e-6, gt=0.0)
    HORIZONTALITY_FAIL: float = Field(default=1e-5, gt=0.0)
    INCONSISTENCY_THRESHOLD: float = Field(default=1e-4, gt=0.0)

    # Batch runner
    BATCH_WORKERS: int = Field(default=1, ge=1)
    CSV_SIGNIFICANT_DIGITS: int = Field(default=17, ge=6, le=17)

    # Logging
    LOG_LEVEL: str = Field(default="INFO")
    LOG_FORMAT: str = Field(default="console")
    LOG_FILE: Optional[str] = Field(default=None)

    @field_validator("LOG_FORMAT")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Only console and json renderers are wired up."""
        if v not in ("console", "json"):
            raise ValueError(f"LOG_FORMAT must be 'console' or 'json', got {v!r}")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        return v.upper()

    model_config = SettingsConfigDict(
        env_prefix="HOLONOMY_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # Computed properties
    @property
    def TOLERANCES(self) -> Dict[str, float]:
        """Get all numerical tolerances."""
        return {
            "constraint": self.CONSTRAINT_TOLERANCE,
            "exp": self.EXP_TOLERANCE,
            "bracket_residual": self.BRACKET_RESIDUAL_TOLERANCE,
            "orthonormal": self.ORTHONORMAL_TOLERANCE,
            "classification": self.CLASSIFICATION_TOLERANCE,
            "span_residual": self.SPAN_RESIDUAL_TOLERANCE,
            "dependence": self.DEPENDENCE_TOLERANCE,
            "closure": self.CLOSURE_TOLERANCE,
            "projection": self.PROJECTION_TOLERANCE,
            "tangent": self.TANGENT_TOLERANCE,
            "horizontality_accept": self.HORIZONTALITY_ACCEPT,
            "horizontality_fail": self.HORIZONTALITY_FAIL,
            "inconsistency": self.INCONSISTENCY_THRESHOLD,
        }

    @property
    def INTEGRATOR_CONFIG(self) -> Dict[str, Any]:
        """Get integrator configuration."""
        return {
            "default_steps": self.DEFAULT_STEPS,
            "min_circle_steps": self.MIN_CIRCLE_STEPS,
            "finite_difference_step": self.FINITE_DIFFERENCE_STEP,
            "max_step_halvings": self.MAX_STEP_HALVINGS,
            "max_lift_sweeps": self.MAX_LIFT_SWEEPS,
            "lift_sweep_tolerance": self.LIFT_SWEEP_TOLERANCE,
            "renormalize_every": self.RENORMALIZE_EVERY,
        }


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Global settings instance
settings = get_settings()
