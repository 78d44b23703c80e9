"""Minkowski algebra, standard boosts and Wigner rotations (m = 1 units).

Four-vectors are plain ``numpy`` arrays of shape ``(4,)`` ordered
``(e0, e1, e2, e3)``; the metric is ``diag(1, -1, -1, -1)``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
REST = np.array([1.0, 0.0, 0.0, 0.0])

_LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _LEVI_CIVITA[_i, _j, _k] = 1.0
    _LEVI_CIVITA[_i, _k, _j] = -1.0


def on_shell(kvec) -> np.ndarray:
    """Return the four-momentum ``(sqrt(1 + |k|^2), k)`` for a 3-momentum."""
    kvec = np.asarray(kvec, dtype=float).reshape(3)
    return np.concatenate(([np.sqrt(1.0 + kvec @ kvec)], kvec))


def check_on_shell(k: np.ndarray, tol: float = 1e-12) -> None:
    k = np.asarray(k, dtype=float)
    if k.shape != (4,):
        raise ValueError(f"four-momentum must have shape (4,), got {k.shape}")
    if k[0] <= 0 or abs(k[0] - np.sqrt(1.0 + k[1:] @ k[1:])) > tol * max(1.0, k[0]):
        raise ValueError(f"four-momentum {k} is not on the unit mass shell")


def minkowski_dot(u, v) -> float:
    u = np.asarray(u)
    v = np.asarray(v)
    return float(u[0] * v[0] - u[1:] @ v[1:])


def standard_boost(k: np.ndarray) -> np.ndarray:
    """The boost ``L_k`` carrying the rest momentum to ``k``."""
    k = np.asarray(k, dtype=float)
    k0, kv = k[0], k[1:]
    lk = np.empty((4, 4))
    lk[0, 0] = k0
    lk[0, 1:] = kv
    lk[1:, 0] = kv
    lk[1:, 1:] = np.eye(3) + np.outer(kv, kv) / (1.0 + k0)
    return lk


def lorentz_inverse(lam: np.ndarray) -> np.ndarray:
    return ETA @ lam.T @ ETA


def rotation_matrix(phi) -> np.ndarray:
    """Rotation ``exp(i phi . I)`` with generators ``[I^i]_jk = -i eps_ijk``.

    This turns vectors by ``-|phi|`` about ``phi`` (the transpose of the usual
    active rotation); it is the sense in which ``V R V^dagger = exp(i phi . S)``.
    """
    phi = np.asarray(phi, dtype=float).reshape(3)
    return expm(np.einsum("i,ijk->jk", phi, _LEVI_CIVITA))


def embed_rotation(rot: np.ndarray) -> np.ndarray:
    lam = np.eye(4)
    lam[1:, 1:] = rot
    return lam


def wigner_rotation(lam: np.ndarray, k: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Spatial block of ``L_{lam k}^{-1} lam L_k``.

    Raises ``ValueError`` when the 4x4 product is not block diagonal, which
    happens only for inputs that are not proper orthochronous Lorentz matrices
    or momenta off the mass shell.
    """
    lam = np.asarray(lam, dtype=float)
    k = np.asarray(k, dtype=float)
    w = lorentz_inverse(standard_boost(lam @ k)) @ lam @ standard_boost(k)
    scale = max(1.0, float(np.abs(lam).max()) * float(np.abs(k).max()) ** 2)
    off = max(abs(w[0, 0] - 1.0), float(np.abs(w[0, 1:]).max()), float(np.abs(w[1:, 0]).max()))
    if off > tol * scale:
        raise ValueError(f"L^-1 lam L is not block diagonal (residual {off:.3e})")
    return w[1:, 1:].copy()


def cmf_x(k: np.ndarray) -> float:
    """Squared momentum in units of the mass."""
    k = np.asarray(k, dtype=float)
    return float(k[1:] @ k[1:])


def random_momentum(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return on_shell(rng.normal(scale=scale, size=3))


def random_direction(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    return rotation_matrix(random_direction(rng) * rng.uniform(0.0, np.pi))


def random_lorentz(rng: np.random.Generator, scale: float = 0.75) -> np.ndarray:
    """A rotation composed with a standard boost."""
    return embed_rotation(random_rotation(rng)) @ standard_boost(random_momentum(rng, scale))
