"""
Runtime configuration for mixcurve.

Numeric thresholds live in one place so the CLI, the library and the tests
agree on them. A global scale can be applied through the MIXCURVE_TOL
environment variable (a .env file is honoured) or per call.

Usage:
    from src.config import get_tolerances

    tol = get_tolerances()          # defaults x MIXCURVE_TOL
    tol = get_tolerances(scale=10)  # explicit override
"""

import os
import logging
from dataclasses import dataclass, fields, replace
from typing import Optional

from dotenv import load_dotenv

from src.errors import ConfigurationError

load_dotenv()

logger = logging.getLogger(__name__)

TOLERANCE_ENV_VAR = "MIXCURVE_TOL"
LOG_LEVEL_ENV_VAR = "MIXCURVE_LOG_LEVEL"

# Fields that are counts or caps; these never scale.
_UNSCALED = {
    "winding_start_samples",
    "winding_max_samples",
    "aberth_max_iterations",
    "sm_max_halvings",
    "sm_default_radius",
    "newton_max_iterations",
    "quadrature_max_depth",
    "quadtree_max_cells",
    "quadrature_residual_gate",
}


@dataclass(frozen=True)
class Tolerances:
    """Every numeric threshold used by the library."""

    # zero test for roots: |f| <= root_residual * scale
    root_residual: float = 1e-9

    # winding
    winding_floor: float = 1e-13
    winding_start_samples: int = 64
    winding_max_samples: int = 2 ** 20
    sm_default_radius: float = 0.1
    sm_max_halvings: int = 40

    # homogeneous forms
    admissibility_band: float = 1e-9
    cluster_radius: float = 1e-6
    aberth_max_iterations: int = 200
    aberth_residual: float = 1e-12
    expansion_residual: float = 1e-8

    # root finder
    quadtree_min_width: float = 1e-4
    quadtree_max_cells: int = 200_000
    newton_residual: float = 1e-12
    newton_max_iterations: int = 200
    merge_radius: float = 1e-7
    wirtinger_balance: float = 1e-9

    # intersection numbers
    rank_threshold: float = 1e-8
    determinant_threshold: float = 1e-10
    sphere_margin: float = 1e-10
    quadrature_residual_gate: float = 0.25
    quadrature_max_depth: int = 4

    def scaled(self, factor: float) -> "Tolerances":
        """Return a copy with every closeness threshold multiplied by factor."""
        if factor == 1.0:
            return self
        changes = {
            f.name: getattr(self, f.name) * factor
            for f in fields(self)
            if f.name not in _UNSCALED
        }
        return replace(self, **changes)


DEFAULT_TOLERANCES = Tolerances()


def _scale_from_env() -> float:
    raw = os.getenv(TOLERANCE_ENV_VAR)
    if raw is None or raw.strip() == "":
        return 1.0
    try:
        value = float(raw)
    except ValueError:
        raise ConfigurationError(f"{TOLERANCE_ENV_VAR}={raw!r} is not a number")
    if not value > 0:
        raise ConfigurationError(f"{TOLERANCE_ENV_VAR} must be positive, got {value}")
    return value


def get_tolerances(scale: Optional[float] = None) -> Tolerances:
    """
    Resolve the active tolerances.

    Args:
        scale: Explicit global scale. Falls back to MIXCURVE_TOL, then 1.0.

    Returns:
        Tolerances instance
    """
    if scale is None:
        scale = _scale_from_env()
    elif not scale > 0:
        raise ConfigurationError(f"tolerance scale must be positive, got {scale}")
    if scale != 1.0:
        logger.debug(f"⚙️  Tolerance scale {scale:g}")
    return DEFAULT_TOLERANCES.scaled(scale)


def default_log_level() -> str:
    """Log level requested through MIXCURVE_LOG_LEVEL (WARNING if unset)."""
    return os.getenv(LOG_LEVEL_ENV_VAR, "WARNING").upper()
