"""Quantum and classical Fisher information for the phase phi."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .amplitude import check_grid, xi_trace, xi_volterra
from .dynamics import reduced_state
from .errors import InvalidStateError
from .model import ModelParams, ProbeState

PURE_THRESHOLD = 1e-9
EIGEN_CUTOFF = 1e-12
DEGENERACY_GAP = 1e-10
BLOCH_TOLERANCE = 1e-10


class DegenerateSpectrumWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class QfiSeries:
    grid: np.ndarray
    f_phi: np.ndarray
    abs_xi: np.ndarray
    w: np.ndarray
    purity: np.ndarray
    pure_branch: np.ndarray

    @property
    def w_norm(self) -> np.ndarray:
        return np.linalg.norm(self.w, axis=-1)


def qfi_bloch(w, dw):
    """QFI of a qubit from its Bloch vector ``w`` and ``dw = dw/dphi``.

    ``|dw|^2 + (w.dw)^2 / (1 - |w|^2)`` for mixed states and ``|dw|^2`` once
    ``1 - |w|^2 <= 1e-9``.  Works elementwise over leading dimensions.
    """
    w = np.asarray(w, dtype=float)
    dw = np.asarray(dw, dtype=float)
    norm2 = np.sum(w * w, axis=-1)
    if np.any(np.sqrt(norm2) > 1 + BLOCH_TOLERANCE):
        raise InvalidStateError(
            f"Bloch vector length {np.sqrt(norm2).max():.12g} exceeds 1"
        )
    gap = 1 - norm2
    mixed = gap > PURE_THRESHOLD
    proj = np.sum(w * dw, axis=-1)
    value = np.sum(dw * dw, axis=-1)
    value = value + np.where(mixed, proj**2 / np.where(mixed, gap, 1.0), 0.0)
    return float(value) if np.ndim(value) == 0 else value


def qfi_pure(psi, dpsi, *, atol: float = 1e-10) -> float:
    """``4 (<dpsi|dpsi> - |<psi|dpsi>|^2)`` for a normalised state vector."""
    psi = np.asarray(psi, dtype=complex)
    dpsi = np.asarray(dpsi, dtype=complex)
    norm = np.vdot(psi, psi).real
    if abs(norm - 1) > atol:
        raise InvalidStateError(f"state is not normalised (<psi|psi> = {norm:.12g})")
    overlap = np.vdot(psi, dpsi)
    return float(4 * (np.vdot(dpsi, dpsi).real - abs(overlap) ** 2))


def _check_density(rho, drho):
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    if rho.shape != drho.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("rho and drho must be square matrices of equal shape")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise InvalidStateError("rho is not Hermitian")
    if abs(np.trace(rho) - 1) > 1e-10:
        raise InvalidStateError("rho does not have unit trace")
    if np.max(np.abs(drho - drho.conj().T)) > 1e-10:
        raise InvalidStateError("drho is not Hermitian")
    if abs(np.trace(drho)) > 1e-10:
        raise InvalidStateError("drho is not traceless")
    return rho, drho


def qfi_spectral(rho, drho) -> float:
    """QFI from the eigendecomposition of ``rho``.

    Sums the classical term over the eigenvalue distribution, the weighted
    pure-state QFI of each eigenvector, and subtracts the mixing term, all
    restricted to eigenvalues above 1e-12.  Eigenvector derivatives come
    from first-order perturbation theory with ``drho``.  If two retained
    eigenvalues are closer than 1e-10 the perturbative derivatives are
    undefined; a :class:`DegenerateSpectrumWarning` is issued and the
    degeneracy-safe form ``sum 2 |<n|drho|m>|^2 / (l_n + l_m)`` is returned.
    """
    rho, drho = _check_density(rho, drho)
    evals, evecs = np.linalg.eigh(rho)
    d = evecs.conj().T @ drho @ evecs
    keep = np.flatnonzero(evals > EIGEN_CUTOFF)
    dim = evals.size

    for i in keep:
        for k in keep:
            if i < k and abs(evals[i] - evals[k]) < DEGENERACY_GAP:
                warnings.warn(
                    "near-degenerate eigenvalues; using the SLD sum instead",
                    DegenerateSpectrumWarning,
                    stacklevel=2,
                )
                return _sld_sum(evals, d)

    # components of |d psi_n> on the eigenbasis, gauge <psi_n|d psi_n> = 0
    dpsi = np.zeros((dim, dim), dtype=complex)
    for n in keep:
        for m in range(dim):
            if m != n:
                dpsi[m, n] = d[m, n] / (evals[n] - evals[m])

    classical = sum(d[n, n].real ** 2 / evals[n] for n in keep)
    pure = 0.0
    for n in keep:
        col = dpsi[:, n]
        pure += evals[n] * 4 * (np.vdot(col, col).real - abs(col[n]) ** 2)
    mixing = 0.0
    for n in keep:
        for m in keep:
            if n != m:
                lam_n, lam_m = evals[n], evals[m]
                mixing += 8 * lam_n * lam_m / (lam_n + lam_m) * abs(dpsi[n, m]) ** 2
    return float(classical + pure - mixing)


def _sld_sum(evals, d):
    total = 0.0
    for n in range(evals.size):
        for m in range(evals.size):
            s = evals[n] + evals[m]
            if s > EIGEN_CUTOFF:
                total += 2 * abs(d[n, m]) ** 2 / s
    return float(total)


def sld(rho, drho) -> np.ndarray:
    """Symmetric logarithmic derivative, zero outside the support of ``rho``."""
    rho, drho = _check_density(rho, drho)
    evals, evecs = np.linalg.eigh(rho)
    d = evecs.conj().T @ drho @ evecs
    s = evals[:, None] + evals[None, :]
    L = np.where(s > EIGEN_CUTOFF, 2 * d / np.where(s > EIGEN_CUTOFF, s, 1.0), 0.0)
    return evecs @ L @ evecs.conj().T


def classical_fisher(probs, dprobs, *, atol: float = 1e-10) -> float:
    """``sum_i (dp_i)^2 / p_i`` over outcomes with ``p_i > 1e-15``."""
    p = np.asarray(probs, dtype=float)
    dp = np.asarray(dprobs, dtype=float)
    if p.shape != dp.shape or p.ndim != 1:
        raise ValueError("probs and dprobs must be 1-D arrays of equal length")
    if np.any(p < -atol):
        raise ValueError("probabilities must be non-negative")
    if abs(p.sum() - 1) > atol:
        raise ValueError(f"probabilities sum to {p.sum():.12g}, not 1")
    if abs(dp.sum()) > atol:
        raise ValueError(f"derivatives sum to {dp.sum():.3g}, not 0")
    keep = p > 1e-15
    return float(np.sum(dp[keep] ** 2 / p[keep]))


def povm_statistics(rho, drho, povm) -> tuple[np.ndarray, np.ndarray]:
    """Outcome probabilities ``Tr(E rho)`` and their phi derivatives."""
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    p = np.array([np.trace(E @ rho).real for E in povm])
    dp = np.array([np.trace(E @ drho).real for E in povm])
    return p, dp


def qfi_timeseries(
    params: ModelParams,
    probe: ProbeState,
    grid,
    *,
    method: str = "analytic",
) -> QfiSeries:
    """QFI of phi along a time grid.

    ``method`` selects the amplitude backend: ``"analytic"`` (closed form,
    any increasing grid) or ``"volterra"`` (RK4 memory-kernel integration,
    uniform grid starting at 0).
    """
    t = check_grid(grid)
    if method == "analytic":
        xi = xi_trace(params, t).values
    elif method == "volterra":
        xi = xi_volterra(params, t).values
    else:
        raise ValueError(f"unknown amplitude method {method!r}")
    state = reduced_state(params, probe, xi)
    gap = 1 - np.sum(state.w**2, axis=-1)
    return QfiSeries(
        grid=t,
        f_phi=np.asarray(qfi_bloch(state.w, state.dw_dphi)),
        abs_xi=np.abs(xi),
        w=state.w,
        purity=state.purity,
        pure_branch=gap <= PURE_THRESHOLD,
    )
