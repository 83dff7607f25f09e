"""Expectation values and state diagnostics recorded along trajectories."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .fock import DensityMatrix, Operator


@dataclass(frozen=True)
class ObservableRecord:
    """Per-time diagnostics of an evolving density matrix."""

    t: float
    a_expect: complex
    n_expect: float
    trace: float
    purity: float
    herm_defect: float


def expect_operator(rho: DensityMatrix, op: Operator) -> complex:
    """Tr(op rho)."""
    if rho.space.dim != op.space.dim:
        raise DimensionMismatch(
            f"operator dim {op.space.dim} vs state dim {rho.space.dim}")
    return complex(np.einsum("ij,ji->", op.matrix, rho.matrix))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2); 1 for pure states, 1/dim for the maximally mixed state."""
    return float(np.sum(np.abs(rho.matrix) ** 2))


def expect_a_raw(rho: np.ndarray) -> complex:
    # Tr(a rho) reduces to the first subdiagonal; O(dim) per call.
    d = rho.shape[0]
    return complex(np.dot(np.sqrt(np.arange(1, d)), np.diagonal(rho, offset=-1)))


def expect_n_raw(rho: np.ndarray) -> float:
    d = rho.shape[0]
    return float(np.dot(np.arange(d), np.diagonal(rho).real))
