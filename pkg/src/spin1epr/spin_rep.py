"""Spin-1 generators, the intertwiner ``V`` and ``D(R) = V R V^dagger``.

Spin labels are ordered ``(+1, 0, -1)`` everywhere, matching the rows of S3.
"""

from __future__ import annotations

import numpy as np

SPIN_LABELS = (1, 0, -1)

_R2 = np.sqrt(2.0)

S1 = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _R2
S2 = 1j * np.array([[0, -1, 0], [1, 0, -1], [0, 1, 0]], dtype=complex) / _R2
S3 = np.diag([1.0, 0.0, -1.0]).astype(complex)

V = np.array([[-1, 1j, 0], [0, 0, _R2], [1, 1j, 0]], dtype=complex) / _R2

# V V^T, exact
VVT = np.array([[0, 0, -1], [0, 1, 0], [-1, 0, 0]], dtype=complex)


def spin_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return S1.copy(), S2.copy(), S3.copy()


def d_matrix(rot: np.ndarray) -> np.ndarray:
    """Spin-1 representation matrix of a 3x3 rotation."""
    return V @ np.asarray(rot, dtype=float) @ V.conj().T


def check_unit(omega, tol: float = 1e-9) -> np.ndarray:
    omega = np.asarray(omega, dtype=float).reshape(3)
    norm = np.linalg.norm(omega)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"direction {omega} is not a unit vector (|w| = {norm!r})")
    return omega


def spin_component(omega) -> np.ndarray:
    """``omega . S`` for a unit direction."""
    w = check_unit(omega)
    return w[0] * S1 + w[1] * S2 + w[2] * S3


def spin_eigensystem(omega) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues ``(+1, 0, -1)`` and the matching eigenvectors of ``omega . S``.

    Eigenvectors are the columns of the returned matrix. Each has its
    largest-magnitude component made real and positive (first index wins a tie).
    """
    vals, vecs = np.linalg.eigh(spin_component(omega))
    vals = vals[::-1]
    vecs = vecs[:, ::-1].copy()
    for j in range(3):
        mags = np.abs(vecs[:, j])
        # tie-break on index order despite rounding noise
        i = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
        vecs[:, j] *= np.conj(vecs[i, j]) / abs(vecs[i, j])
    return np.array(SPIN_LABELS, dtype=float), vecs


def eigenprojectors(omega) -> list[np.ndarray]:
    _, vecs = spin_eigensystem(omega)
    return [np.outer(vecs[:, j], vecs[:, j].conj()) for j in range(3)]
