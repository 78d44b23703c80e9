"""Polarization amplitudes ``e^mu_sigma(k)`` of a massive vector boson."""

from __future__ import annotations

import numpy as np

from .kinematics import standard_boost, wigner_rotation
from .spin_rep import V, d_matrix


def polarization(k: np.ndarray) -> np.ndarray:
    """4x3 amplitude matrix; rows are Lorentz indices, columns spin labels.

    Built from the closed block form ``[k^T ; I + k k^T / (1 + k0)] V^T``.
    """
    k = np.asarray(k, dtype=float)
    k0, kv = k[0], k[1:]
    block = np.empty((4, 3))
    block[0] = kv
    block[1:] = np.eye(3) + np.outer(kv, kv) / (1.0 + k0)
    return block @ V.T


def rest_polarization() -> np.ndarray:
    e = np.zeros((4, 3), dtype=complex)
    e[1:] = V.T
    return e


def polarization_via_boost(k: np.ndarray) -> np.ndarray:
    """Same amplitudes obtained as ``L_k e(rest)``; an independent path."""
    return standard_boost(k) @ rest_polarization()


def weinberg_residual(lam: np.ndarray, k: np.ndarray) -> float:
    """Max-norm of ``e(lam k) - lam e(k) D(R(lam, k))^T``."""
    lam = np.asarray(lam, dtype=float)
    k = np.asarray(k, dtype=float)
    d = d_matrix(wigner_rotation(lam, k))
    return float(np.abs(polarization(lam @ k) - lam @ polarization(k) @ d.T).max())
