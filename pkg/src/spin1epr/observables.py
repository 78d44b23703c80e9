"""N, M, T observable matrices, the covariant spin action and the spectral oracle.

``nmt_definitional`` contracts polarization amplitudes with powers of
``omega . S``; ``nmt_closed_form`` evaluates the explicit block matrices.
The two must agree; :func:`probability_oracle` is the brute-force check for
everything built on top of them.
"""

from __future__ import annotations

import numpy as np

from .kinematics import ETA
from .polarization import polarization
from .spin_rep import S1, S2, S3, check_unit, spin_component, spin_eigensystem
from .states import TwoParticleAmplitude

_EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_i, _j, _k] = 1.0
    _EPS[_i, _k, _j] = -1.0


def nmt_definitional(q: np.ndarray, omega) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    e = polarization(q)
    s = spin_component(omega)
    s2 = s @ s
    ec = e.conj()
    n = ec @ s @ e.T
    m = ec @ s2 @ e.T
    t = ec @ (np.eye(3) - s2) @ e.T
    return n, m, t


def nmt_closed_form(q: np.ndarray, omega) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    q = np.asarray(q, dtype=float)
    w = check_unit(omega)
    q0, qv = q[0], q[1:]
    wq = float(w @ qv)
    g = 1.0 + q0
    qxw = np.cross(qv, w)

    n = np.zeros((4, 4), dtype=complex)
    n[0, 1:] = 1j * qxw
    n[1:, 0] = -1j * qxw
    n[1:, 1:] = -1j * np.einsum("ijk,k->ij", _EPS, w) + 1j * (
        np.outer(qv, qxw) - np.outer(qxw, qv)
    ) / g

    sym = np.outer(w, qv) + np.outer(qv, w)
    qq = np.outer(qv, qv)

    m = np.zeros((4, 4))
    m[0, 0] = qv @ qv - wq**2
    m[0, 1:] = qv * (q0 - wq**2 / g) - w * wq
    m[1:, 0] = m[0, 1:]
    m[1:, 1:] = np.eye(3) - np.outer(w, w) - wq / g * sym + (1.0 - wq**2 / g**2) * qq

    t = np.zeros((4, 4))
    t[0, 0] = wq**2
    t[0, 1:] = wq * (w + wq * qv / g)
    t[1:, 0] = t[0, 1:]
    t[1:, 1:] = np.outer(w, w) + wq / g * sym + wq**2 / g**2 * qq
    return n, m.astype(complex), t.astype(complex)


def covariant_spin_action(k: np.ndarray, axis: int) -> np.ndarray:
    """``-e(k) (S^axis)^T e(k)^dagger eta``: the spin operator on ``|(alpha, k)>``.

    Row ``alpha`` holds the image of basis state ``alpha``, so these matrices
    obey ``[A1, A2] = -i A3`` (their transposes carry the su(2) algebra).
    """
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis!r}")
    s = (S1, S2, S3)[axis - 1]
    e = polarization(k)
    return -e @ s.T @ e.conj().T @ ETA


def probability_oracle(amp: TwoParticleAmplitude | np.ndarray, a, b) -> np.ndarray:
    """Joint outcome probabilities from eigenvectors of ``a.S`` and ``b.S``.

    ``P[i, j]`` is the probability that Alice (first index of ``psi``) gets
    label ``SPIN_LABELS[i]`` and Bob gets ``SPIN_LABELS[j]``.
    """
    psi = amp.psi if isinstance(amp, TwoParticleAmplitude) else np.asarray(amp)
    norm2 = float(np.sum(np.abs(psi) ** 2))
    if not norm2 > 0.0:
        raise ValueError("cannot measure a zero-norm amplitude")
    _, va = spin_eigensystem(a)
    _, vb = spin_eigensystem(b)
    return np.abs(va.conj().T @ psi @ vb.conj()) ** 2 / norm2


def oracle_correlation(amp: TwoParticleAmplitude | np.ndarray, a, b) -> float:
    """``<(a.S) x (b.S)>`` evaluated directly on the amplitude."""
    psi = amp.psi if isinstance(amp, TwoParticleAmplitude) else np.asarray(amp)
    sa = spin_component(a)
    sb = spin_component(b)
    num = np.vdot(psi, sa @ psi @ sb.T)
    return float(num.real / np.sum(np.abs(psi) ** 2))
