"""Gaussian bath-coupling profile and thermal occupation utilities.

The master equation consumes the damping rate gamma directly; this module
documents how gamma relates to the microscopic coupling picture: a discrete
set of bath modes coupled with Gaussian-shaped strengths peaked at the
system frequency, g(omega0) = sqrt(gamma / 2 pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DEFAULT_SHAPE = 500.0
DEFAULT_GRID_POINTS = 81


def default_mode_grid(omega0: float, points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Uniform bath frequencies on [-2 omega0, 2 omega0]."""
    return np.linspace(-2.0 * omega0, 2.0 * omega0, points)


@dataclass(frozen=True)
class BathSpec:
    gamma: float
    omega0: float
    k_shape: float = DEFAULT_SHAPE
    mode_grid: np.ndarray = None

    def __post_init__(self) -> None:
        if self.gamma < 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")
        if self.k_shape <= 0:
            raise DomainError(f"k_shape must be positive, got {self.k_shape}")
        grid = self.mode_grid
        if grid is None:
            grid = default_mode_grid(self.omega0)
        grid = np.ascontiguousarray(np.asarray(grid, dtype=float))
        grid.setflags(write=False)
        object.__setattr__(self, "mode_grid", grid)


def coupling_strength(spec: BathSpec, omega_j) -> np.ndarray:
    """g_j = sqrt(gamma / 2 pi) * exp(-K (omega0 - omega_j)^2)."""
    peak = math.sqrt(spec.gamma / (2.0 * math.pi))
    return peak * np.exp(-spec.k_shape * (spec.omega0 - np.asarray(omega_j)) ** 2)


def coupling_profile(spec: BathSpec) -> np.ndarray:
    """(omega_j, g_j) rows over the spec's mode grid."""
    return np.column_stack([spec.mode_grid, coupling_strength(spec, spec.mode_grid)])


def thermal_occupation(omega0: float, temperature: float) -> float:
    """Bose-Einstein occupation at omega0; atomic units with k_B = 1."""
    if temperature < 0:
        raise DomainError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        return 0.0
    x = omega0 / temperature
    return 1.0 / math.expm1(x)
