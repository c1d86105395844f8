"""Iterative maximum-likelihood reconstruction from MUB frequencies.

The estimator is the multiplicative fixed-point iteration
rho <- N[R(rho) rho R(rho)] with R(rho) = sum_jk (f_jk / p_jk) |b_jk><b_jk|,
started from the maximally mixed state. Optional dilution replaces R by
(1 - lambda) I + lambda R.

Plain iterations approach a rank-deficient optimum only like 1/k (the minor
eigenvalues decay as lambda - c*lambda^2 per step), which is hopeless for
reconstructing pure states to 1e-6 and beyond. The loop therefore
periodically tries a spectral-shrink step: scale all but the dominant
eigenvalue down, re-apply the map, and keep the result only if the
log-likelihood does not drop. Accepted trials jump many decades toward a
boundary optimum; rejected trials cost one extra map evaluation and leave
the iterate untouched, so interior (mixed) optima are unaffected and the
likelihood stays non-decreasing either way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measurement import ProjectorSet, records_to_frequencies
from .states import DensityMatrix

PROB_CLAMP = 1e-12
_LOG_FLOOR = 1e-300
_MONOTONICITY_SLACK = 1e-12


@dataclass(frozen=True)
class MLEConfig:
    """Iteration controls for mle_reconstruct."""

    max_iterations: int = 5000
    convergence_epsilon: float = 1e-10
    dilution_lambda: float = 1.0
    shrink_trial_interval: int = 30
    shrink_factor: float = 1e-4

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.convergence_epsilon < 0:
            raise ValueError("convergence_epsilon must be >= 0")
        if not 0.0 < self.dilution_lambda <= 1.0:
            raise ValueError("dilution_lambda must lie in (0, 1]")
        if self.shrink_trial_interval < 0:
            raise ValueError("shrink_trial_interval must be >= 0 (0 disables)")
        if not 0.0 <= self.shrink_factor < 1.0:
            raise ValueError("shrink_factor must lie in [0, 1)")


@dataclass(frozen=True)
class MLEResult:
    """Reconstruction plus iteration diagnostics."""

    rho: DensityMatrix
    iterations: int
    converged: bool
    log_likelihood: float
    dilution_fallback: bool


def _projector_stack(projectors: ProjectorSet) -> np.ndarray:
    return projectors.stacked()


def mle_reconstruct(records, projectors: ProjectorSet, config: MLEConfig = MLEConfig()) -> MLEResult:
    """Maximum-likelihood density matrix for measured MUB frequencies.

    records may be a list of MeasurementRecords or a (D+1, D) frequency
    array. Iterates until the max-norm update drops below the configured
    epsilon; if the log-likelihood ever decreases beyond roundoff while
    undiluted, the iteration falls back to dilution 0.5 for the remainder
    and flags it in the result.
    """
    dim = projectors.dim
    if isinstance(records, np.ndarray):
        freqs = records
    else:
        freqs = records_to_frequencies(records, dim)
    f = np.asarray(freqs, dtype=float).ravel()
    if f.size != (dim + 1) * dim:
        raise ValueError("frequency table does not match the projector set")

    B = _projector_stack(projectors)
    Bc = B.conj()
    lam = config.dilution_lambda
    eye = np.eye(dim, dtype=complex)

    def probs(rho):
        return np.einsum("kd,de,ke->k", Bc, rho, B).real

    def apply_map(rho, lam):
        w = f / np.maximum(probs(rho), PROB_CLAMP)
        R = (B.T * w) @ Bc
        if lam < 1.0:
            R = (1.0 - lam) * eye + lam * R
        new = R @ rho @ R
        new /= np.trace(new).real
        return 0.5 * (new + new.conj().T)

    def loglik(rho):
        return float(f @ np.log(np.maximum(probs(rho), _LOG_FLOOR)))

    rho = eye / dim
    ll = loglik(rho)
    converged = False
    fallback = False
    iterations = 0
    for it in range(1, config.max_iterations + 1):
        iterations = it
        new = apply_map(rho, lam)
        if config.shrink_trial_interval and it % config.shrink_trial_interval == 0:
            evals, vecs = np.linalg.eigh(rho)
            shrunk = evals.copy()
            shrunk[:-1] *= config.shrink_factor
            total = shrunk.sum()
            if total > 0:
                shrunk /= total
                cand = apply_map((vecs * shrunk) @ vecs.conj().T, lam)
                if loglik(cand) >= loglik(new) - _MONOTONICITY_SLACK:
                    new = cand
        ll_new = loglik(new)
        if ll_new < ll - _MONOTONICITY_SLACK and lam == 1.0:
            # rare undiluted oscillation: redo this step diluted, stay diluted
            lam = 0.5
            fallback = True
            new = apply_map(rho, lam)
            ll_new = loglik(new)
        delta = np.max(np.abs(new - rho))
        rho = new
        ll = ll_new
        if delta < config.convergence_epsilon:
            converged = True
            break

    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -1e-14:
        # roundoff guard: project hard onto the PSD cone
        w, v = np.linalg.eigh(rho)
        w = np.clip(w, 0.0, None)
        rho = (v * w) @ v.conj().T
        rho /= np.trace(rho).real
    return MLEResult(DensityMatrix(rho), iterations, converged, ll, fallback)
