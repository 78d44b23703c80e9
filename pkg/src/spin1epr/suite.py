"""Randomized invariant suite behind ``spin1epr verify``.

Each check draws its own inputs from a seeded generator and reports the worst
residual it saw. Functions are looked up on their modules at call time so that
a patched implementation is what gets checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bell, correlations, kinematics as kin, observables, polarization, spin_rep, states
from .kinematics import ETA, REST

PROFILES = {"default": 1.0, "strict": 0.1}


@dataclass(frozen=True)
class Check:
    name: str
    tol: float
    run: Callable[[np.random.Generator, int], float]


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: worst residual {self.residual:.3e} (tol {self.tol:.1e})"


def _worst(values) -> float:
    return float(max(values, default=0.0))


def _sample(rng, n, fn) -> float:
    return _worst(fn() for _ in range(n))


# --- kinematics -------------------------------------------------------------

def _boost_maps_rest(rng, n):
    def one():
        k = kin.random_momentum(rng)
        return np.abs(kin.standard_boost(k) @ REST - k).max()
    return _sample(rng, n, one)


def _boost_pseudo_orthogonal(rng, n):
    def one():
        lk = kin.standard_boost(kin.random_momentum(rng))
        return np.abs(lk.T @ ETA @ lk - ETA).max()
    return _sample(rng, n, one)


def _wigner_is_rotation(rng, n):
    def one():
        r = kin.wigner_rotation(kin.random_lorentz(rng), kin.random_momentum(rng))
        return max(np.abs(r.T @ r - np.eye(3)).max(), abs(np.linalg.det(r) - 1.0))
    return _sample(rng, n, one)


def _wigner_cocycle(rng, n):
    def one():
        l1, l2 = kin.random_lorentz(rng), kin.random_lorentz(rng)
        k = kin.random_momentum(rng)
        lhs = kin.wigner_rotation(l1 @ l2, k)
        rhs = kin.wigner_rotation(l1, l2 @ k) @ kin.wigner_rotation(l2, k)
        return np.abs(lhs - rhs).max()
    return _sample(rng, n, one)


def _minkowski_invariance(rng, n):
    def one():
        lam = kin.random_lorentz(rng)
        u, v = rng.normal(size=4), rng.normal(size=4)
        return abs(kin.minkowski_dot(lam @ u, lam @ v) - kin.minkowski_dot(u, v))
    return _sample(rng, n, one)


# --- spin representation ----------------------------------------------------

def _su2_algebra(rng, n):
    s1, s2, s3 = spin_rep.spin_matrices()
    comm = lambda a, b: a @ b - b @ a
    return float(max(
        np.abs(comm(s1, s2) - 1j * s3).max(),
        np.abs(comm(s2, s3) - 1j * s1).max(),
        np.abs(comm(s3, s1) - 1j * s2).max(),
    ))


def _spin_cube(rng, n):
    def one():
        s = spin_rep.spin_component(kin.random_direction(rng))
        return np.abs(s @ s @ s - s).max()
    return _sample(rng, n, one)


def _d_matches_exponential(rng, n):
    from scipy.linalg import expm

    s = spin_rep.spin_matrices()

    def one():
        phi = kin.random_direction(rng) * rng.uniform(0.0, math.pi)
        gen = sum(phi[i] * s[i] for i in range(3))
        return np.abs(spin_rep.d_matrix(kin.rotation_matrix(phi)) - expm(1j * gen)).max()
    return _sample(rng, n, one)


def _d_homomorphism(rng, n):
    def one():
        r1, r2 = kin.random_rotation(rng), kin.random_rotation(rng)
        d = spin_rep.d_matrix
        return np.abs(d(r1 @ r2) - d(r1) @ d(r2)).max()
    return _sample(rng, n, one)


def _vvt_antidiagonal(rng, n):
    return float(np.abs(spin_rep.V @ spin_rep.V.T - spin_rep.VVT).max())


def _eigenprojectors(rng, n):
    def one():
        ps = spin_rep.eigenprojectors(kin.random_direction(rng))
        idem = max(np.abs(p @ p - p).max() for p in ps)
        return max(idem, np.abs(sum(ps) - np.eye(3)).max())
    return _sample(rng, n, one)


def _eigen_reconstruction(rng, n):
    def one():
        w = kin.random_direction(rng)
        vals, vecs = spin_rep.spin_eigensystem(w)
        rebuilt = (vecs * vals) @ vecs.conj().T
        ortho = np.abs(vecs.conj().T @ vecs - np.eye(3)).max()
        return max(np.abs(rebuilt - spin_rep.spin_component(w)).max(), ortho)
    return _sample(rng, n, one)


# --- polarization -----------------------------------------------------------

def _pol_transversal(rng, n):
    def one():
        k = kin.random_momentum(rng)
        return np.abs((ETA @ k) @ polarization.polarization(k)).max()
    return _sample(rng, n, one)


def _pol_orthonormal(rng, n):
    def one():
        e = polarization.polarization(kin.random_momentum(rng))
        return np.abs(e.conj().T @ ETA @ e + np.eye(3)).max()
    return _sample(rng, n, one)


def _pol_vvt_relations(rng, n):
    def one():
        e = polarization.polarization(kin.random_momentum(rng))
        r1 = np.abs(e.T @ ETA @ e + spin_rep.VVT).max()
        r2 = np.abs(e @ spin_rep.VVT - e.conj()).max()
        return max(r1, r2)
    return _sample(rng, n, one)


def _pol_completeness(rng, n):
    def one():
        k = kin.random_momentum(rng)
        e = polarization.polarization(k)
        return np.abs(e.conj() @ e.T - (-ETA + np.outer(k, k))).max()
    return _sample(rng, n, one)


def _pol_boost_path(rng, n):
    def one():
        k = kin.random_momentum(rng)
        return np.abs(polarization.polarization(k) - polarization.polarization_via_boost(k)).max()
    return _sample(rng, n, one)


def _weinberg(rng, n):
    return _sample(
        rng, n, lambda: polarization.weinberg_residual(kin.random_lorentz(rng), kin.random_momentum(rng))
    )


# --- states -----------------------------------------------------------------

def _scalar_norm(rng, n):
    def one():
        k, p = kin.random_momentum(rng), kin.random_momentum(rng)
        return abs(states.scalar_state(k, p).norm2 - (2.0 + kin.minkowski_dot(k, p) ** 2))
    return _sample(rng, n, one)


def _scalar_covariance(rng, n):
    def one():
        lam = kin.random_lorentz(rng)
        k, p = kin.random_momentum(rng), kin.random_momentum(rng)
        dk = spin_rep.d_matrix(kin.wigner_rotation(lam, k))
        dp = spin_rep.d_matrix(kin.wigner_rotation(lam, p))
        moved = states.scalar_state(lam @ k, lam @ p).psi
        return np.abs(dk @ states.scalar_state(k, p).psi @ dp.T - moved).max()
    return _sample(rng, n, one)


def _scalar_exchange(rng, n):
    def one():
        k, p = kin.random_momentum(rng), kin.random_momentum(rng)
        return np.abs(states.scalar_state(k, p).psi.T - states.scalar_state(p, k).psi).max()
    return _sample(rng, n, one)


def _tensor_states(rng, n):
    def one():
        k, p = kin.random_momentum(rng), kin.random_momentum(rng)
        mu, nu = rng.integers(0, 4, size=2)
        sym = states.tensor_state(k, p, "symmetric", mu, nu).psi
        sym_t = states.tensor_state(k, p, "symmetric", nu, mu).psi
        anti = states.tensor_state(k, p, "antisymmetric", mu, mu).psi
        trace = sum(
            ETA[i, i] * states.tensor_state(k, p, "symmetric", i, i).psi for i in range(4)
        )
        return max(np.abs(sym - sym_t).max(), np.abs(anti).max(), np.abs(trace).max())
    return _sample(rng, n, one)


# --- observables ------------------------------------------------------------

def _nmt_two_path(rng, n):
    def one():
        q, w = kin.random_momentum(rng), kin.random_direction(rng)
        defn = observables.nmt_definitional(q, w)
        closed = observables.nmt_closed_form(q, w)
        return max(np.abs(x - y).max() for x, y in zip(defn, closed))
    return _sample(rng, n, one)


def _nmt_completeness(rng, n):
    def one():
        q, w = kin.random_momentum(rng), kin.random_direction(rng)
        nn, m, t = observables.nmt_closed_form(q, w)
        herm = max(np.abs(x - x.conj().T).max() for x in (nn, m, t))
        return max(herm, np.abs(m + t - (-ETA + np.outer(q, q))).max())
    return _sample(rng, n, one)


def _n_spectrum(rng, n):
    def one():
        q, w = kin.random_momentum(rng), kin.random_direction(rng)
        nn, _, _ = observables.nmt_definitional(q, w)
        vals = np.sort(np.linalg.eigvals(nn @ ETA).real)
        return np.abs(vals - np.array([-1.0, 0.0, 0.0, 1.0])).max()
    return _sample(rng, n, one)


def _oracle_equivalence(rng, n):
    def one():
        k, p = kin.random_momentum(rng), kin.random_momentum(rng)
        a, b = kin.random_direction(rng), kin.random_direction(rng)
        oracle = observables.probability_oracle(states.scalar_state(k, p), a, b)
        return np.abs(correlations.probabilities_general(k, p, a, b).values - oracle).max()
    return _sample(rng, n, one)


def _oracle_phase_scale(rng, n):
    def one():
        k, p = kin.random_momentum(rng), kin.random_momentum(rng)
        a, b = kin.random_direction(rng), kin.random_direction(rng)
        psi = states.scalar_state(k, p).psi
        factor = rng.uniform(0.1, 10.0) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        p1 = observables.probability_oracle(psi, a, b)
        p2 = observables.probability_oracle(factor * psi, a, b)
        return max(np.abs(p1 - p2).max(), abs(p1.sum() - 1.0))
    return _sample(rng, n, one)


# --- correlations -----------------------------------------------------------

def _correlation_three_path(rng, n):
    def one():
        k, p = kin.random_momentum(rng), kin.random_momentum(rng)
        a, b = kin.random_direction(rng), kin.random_direction(rng)
        closed = correlations.correlation_general(k, p, a, b)
        trace = correlations.correlation_trace(k, p, a, b)
        table = correlations.probabilities_general(k, p, a, b).correlation()
        return max(abs(closed - trace), abs(closed - table))
    return _sample(rng, n, one)


def _probabilities_normalized(rng, n):
    def one():
        k, p = kin.random_momentum(rng), kin.random_momentum(rng)
        a, b = kin.random_direction(rng), kin.random_direction(rng)
        v = correlations.probabilities_general(k, p, a, b).values
        return max(abs(v.sum() - 1.0), float(max(0.0, -v.min())), float(max(0.0, v.max() - 1.0)))
    return _sample(rng, n, one)


def _cmf_frame_consistency(rng, n):
    def one():
        kv = rng.normal(scale=1.0, size=3)
        k, p = kin.on_shell(kv), kin.on_shell(-kv)
        a, b = kin.random_direction(rng), kin.random_direction(rng)
        cfg = correlations.CmfConfig.from_vectors(kv @ kv, a, b, kv / np.linalg.norm(kv))
        general = correlations.probabilities_general(k, p, a, b).values
        closed = correlations.cmf_probabilities(cfg).values
        dc = abs(correlations.cmf_correlation(cfg) - correlations.correlation_general(k, p, a, b))
        return max(np.abs(general - closed).max(), dc)
    return _sample(rng, n, one)


def _exchange_symmetry(rng, n):
    def one():
        k, p = kin.random_momentum(rng), kin.random_momentum(rng)
        a, b = kin.random_direction(rng), kin.random_direction(rng)
        t1 = correlations.probabilities_general(k, p, a, b).values
        t2 = correlations.probabilities_general(p, k, b, a).values
        return np.abs(t1 - t2.T).max()
    return _sample(rng, n, one)


def _rotational_covariance(rng, n):
    def one():
        k, p = kin.random_momentum(rng), kin.random_momentum(rng)
        a, b = kin.random_direction(rng), kin.random_direction(rng)
        r = kin.random_rotation(rng)
        lam = kin.embed_rotation(r)
        t1 = correlations.probabilities_general(k, p, a, b).values
        t2 = correlations.probabilities_general(lam @ k, lam @ p, r @ a, r @ b).values
        return np.abs(t1 - t2).max()
    return _sample(rng, n, one)


def _correlation_bounded(rng, n):
    def one():
        k, p = kin.random_momentum(rng), kin.random_momentum(rng)
        a, b = kin.random_direction(rng), kin.random_direction(rng)
        return max(0.0, abs(correlations.correlation_general(k, p, a, b)) - 1.0)
    return _sample(rng, n, one)


# --- bell -------------------------------------------------------------------

def _random_bell(rng, x):
    d = [kin.random_direction(rng) for _ in range(5)]
    return bell.BellConfig(*d, x=x)


def _bell_axial_invariance(rng, n):
    def one():
        cfg = _random_bell(rng, float(rng.exponential()))
        r = kin.rotation_matrix(cfg.n * rng.uniform(0, 2 * math.pi))
        turned = bell.BellConfig(r @ cfg.a, r @ cfg.b, r @ cfg.c, r @ cfg.d, cfg.n, cfg.x)
        return max(abs(f(cfg) - f(turned)) for f in bell.EVALUATORS.values())
    return _sample(rng, n, one)


def _mermin_symmetric(rng, n):
    def one():
        x = float(rng.exponential())
        u = 1.0 + 2.0 * x
        return abs(bell.mermin_lhs(bell.symmetric_config(x)) - 3.0 * u / (2.0 + u * u))
    return _sample(rng, n, one)


def _coplanar_matches_vectors(rng, n):
    def one():
        theta, x = rng.uniform(0, math.pi), float(rng.exponential())
        return abs(bell.coplanar_lhs(theta, x) - bell.weighted_lhs(bell.coplanar_config(theta, x)))
    return _sample(rng, n, one)


def _weighted_decomposition(rng, n):
    def one():
        cfg = _random_bell(rng, float(rng.exponential()))
        corr = lambda u, v: correlations.cmf_correlation_raw(cfg.x, u @ v, u @ cfg.n, v @ cfg.n)
        p00 = correlations.cmf_probabilities(
            correlations.CmfConfig.from_vectors(cfg.x, cfg.a, cfg.b, cfg.n)
        )[0, 0]
        direct = corr(cfg.a, cfg.b) + corr(cfg.b, cfg.c) + corr(cfg.c, cfg.a) + p00
        return abs(bell.weighted_lhs(cfg) - direct)
    return _sample(rng, n, one)


# --- cli probe --------------------------------------------------------------

def _probe_residual(rng, n):
    from .cli import probe_record

    def one():
        a, b = kin.random_direction(rng), kin.random_direction(rng)
        return probe_record(rng.normal(scale=1.0, size=3), rng.normal(scale=1.0, size=3), a, b)[
            "max_residual"
        ]
    return _sample(rng, n, one)


CHECKS: list[Check] = [
    Check("kinematics/boost-maps-rest", 1e-12, _boost_maps_rest),
    Check("kinematics/boost-pseudo-orthogonal", 1e-12, _boost_pseudo_orthogonal),
    Check("kinematics/wigner-is-rotation", 1e-10, _wigner_is_rotation),
    Check("kinematics/wigner-cocycle", 1e-10, _wigner_cocycle),
    Check("kinematics/minkowski-invariance", 1e-10, _minkowski_invariance),
    Check("spin_rep/su2-algebra", 1e-12, _su2_algebra),
    Check("spin_rep/spin-cube", 1e-12, _spin_cube),
    Check("spin_rep/d-matches-exponential", 1e-9, _d_matches_exponential),
    Check("spin_rep/d-homomorphism", 1e-10, _d_homomorphism),
    Check("spin_rep/vvt-antidiagonal", 1e-14, _vvt_antidiagonal),
    Check("spin_rep/eigenprojectors", 1e-12, _eigenprojectors),
    Check("spin_rep/eigen-reconstruction", 1e-10, _eigen_reconstruction),
    Check("polarization/transversality", 1e-12, _pol_transversal),
    Check("polarization/orthonormality", 1e-12, _pol_orthonormal),
    Check("polarization/vvt-relations", 1e-12, _pol_vvt_relations),
    Check("polarization/completeness", 1e-12, _pol_completeness),
    Check("polarization/boost-path", 1e-12, _pol_boost_path),
    Check("polarization/weinberg", 1e-10, _weinberg),
    Check("states/scalar-norm", 1e-10, _scalar_norm),
    Check("states/scalar-covariance", 1e-10, _scalar_covariance),
    Check("states/scalar-exchange", 1e-12, _scalar_exchange),
    Check("states/tensor-projectors", 1e-12, _tensor_states),
    Check("observables/nmt-two-path", 1e-12, _nmt_two_path),
    Check("observables/nmt-completeness", 1e-12, _nmt_completeness),
    Check("observables/n-spectrum", 1e-10, _n_spectrum),
    Check("observables/oracle-equivalence", 1e-10, _oracle_equivalence),
    Check("observables/oracle-phase-scale", 1e-12, _oracle_phase_scale),
    Check("correlations/three-path", 1e-12, _correlation_three_path),
    Check("correlations/probabilities-normalized", 1e-12, _probabilities_normalized),
    Check("correlations/cmf-frame", 1e-12, _cmf_frame_consistency),
    Check("correlations/exchange-symmetry", 1e-12, _exchange_symmetry),
    Check("correlations/rotational-covariance", 1e-10, _rotational_covariance),
    Check("correlations/bounded", 1e-12, _correlation_bounded),
    Check("bell/axial-invariance", 1e-10, _bell_axial_invariance),
    Check("bell/mermin-symmetric", 1e-12, _mermin_symmetric),
    Check("bell/coplanar-vs-vectors", 1e-12, _coplanar_matches_vectors),
    Check("bell/weighted-decomposition", 1e-12, _weighted_decomposition),
    Check("cli/probe-residual", 1e-10, _probe_residual),
]


def run_suite(profile: str = "default", samples: int = 1000, seed: int = 20240611) -> list[CheckResult]:
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {', '.join(PROFILES)}")
    factor = PROFILES[profile]
    results = []
    for i, check in enumerate(CHECKS):
        rng = np.random.default_rng([seed, i])
        try:
            residual = float(check.run(rng, samples))
        except Exception:  # a crashing check is a failing check
            residual = math.inf
        if math.isnan(residual):
            residual = math.inf
        results.append(CheckResult(check.name, residual, check.tol * factor))
    return results
