"""Two-particle amplitudes at sharp momenta ``(k, p)``.

Amplitudes are kept unnormalized; consumers divide by ``norm2`` themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .kinematics import ETA
from .polarization import polarization


@dataclass(frozen=True)
class TwoParticleAmplitude:
    """``psi[sigma, lambda]`` over spin labels (+1, 0, -1) of the k and p bosons."""

    psi: np.ndarray
    k: np.ndarray
    p: np.ndarray

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2))


@dataclass(frozen=True)
class CovariantAmplitude:
    """``Psi^{mu nu}`` with both Lorentz indices up."""

    Psi: np.ndarray
    k: np.ndarray
    p: np.ndarray

    def transversality_residual(self) -> float:
        k_low = ETA @ self.k
        p_low = ETA @ self.p
        left = k_low @ self.Psi
        right = self.Psi @ p_low
        return float(max(np.abs(left).max(), np.abs(right).max()))


def scalar_state(k: np.ndarray, p: np.ndarray) -> TwoParticleAmplitude:
    psi = polarization(k).T @ ETA @ polarization(p)
    return TwoParticleAmplitude(psi, np.asarray(k, float), np.asarray(p, float))


def tensor_projector(kind: Literal["symmetric", "antisymmetric"], mu: int, nu: int) -> np.ndarray:
    """Coefficients ``c[alpha, beta]`` of the tensor state ``|Psi^{mu nu}>``."""
    if not (0 <= mu < 4 and 0 <= nu < 4):
        raise ValueError(f"Lorentz indices must lie in 0..3, got ({mu}, {nu})")
    delta = np.eye(4)
    dd = np.outer(delta[mu], delta[nu])
    if kind == "symmetric":
        return 0.5 * (dd + dd.T - 0.5 * ETA[mu, nu] * ETA)
    if kind == "antisymmetric":
        return 0.5 * (dd - dd.T)
    raise ValueError(f"unknown tensor kind {kind!r}")


def tensor_state(
    k: np.ndarray,
    p: np.ndarray,
    kind: Literal["symmetric", "antisymmetric"],
    mu: int,
    nu: int,
) -> TwoParticleAmplitude:
    coeff = tensor_projector(kind, mu, nu)
    psi = polarization(k).T @ coeff @ polarization(p)
    return TwoParticleAmplitude(psi, np.asarray(k, float), np.asarray(p, float))


def covariant_to_spin(amp: CovariantAmplitude, tol: float = 1e-9) -> TwoParticleAmplitude:
    """Contract ``Psi_{mu nu} e^mu_sigma(k) e^nu_lambda(p)``."""
    residual = amp.transversality_residual()
    if residual > tol:
        raise ValueError(f"covariant amplitude is not transversal (residual {residual:.3e})")
    psi_low = ETA @ amp.Psi @ ETA
    psi = polarization(amp.k).T @ psi_low @ polarization(amp.p)
    return TwoParticleAmplitude(psi, amp.k, amp.p)


def transverse_projector(k: np.ndarray) -> np.ndarray:
    """``delta^mu_nu - k^mu k_nu``; kills anything contracted with ``k_mu``."""
    k = np.asarray(k, dtype=float)
    return np.eye(4) - np.outer(k, ETA @ k)


def make_transversal(X: np.ndarray, k: np.ndarray, p: np.ndarray) -> CovariantAmplitude:
    """Project an arbitrary 4x4 tensor onto the transversal subspace."""
    Psi = transverse_projector(k) @ np.asarray(X) @ transverse_projector(p).T
    return CovariantAmplitude(Psi, np.asarray(k, float), np.asarray(p, float))
