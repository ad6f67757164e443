"""Reduced qubit state under the single-excitation state map.

In the dressed basis the joint qubit-reservoir state evolves as::

    c0 |G,0> + c1 |E,0>  ->  c0 |G,0> + c1 xi |E,0> + c1 sqrt(1-|xi|^2) |G,1_k>

Tracing out the reservoir leaves ``rho = |a><a| + |c1|^2 (1-|xi|^2) |G><G|``
with ``a = c0 G + c1 xi E``, which is then expressed in the computational
basis.  The amplitude xi does not depend on the phase phi, so the phi
derivative only acts on the initial coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError
from .model import (
    ModelParams,
    ProbeState,
    dressed_frame,
    initial_coeffs_phi_derivative,
    initial_dressed_coeffs,
)

XI_TOLERANCE = 1e-9


@dataclass(frozen=True)
class QubitState:
    """Qubit density matrix and Bloch vector with their phi derivatives.

    Arrays may carry leading batch dimensions (one per value of xi):
    ``rho`` and ``drho_dphi`` have shape ``(..., 2, 2)``, ``w`` and
    ``dw_dphi`` shape ``(..., 3)``.
    """

    rho: np.ndarray
    w: np.ndarray
    dw_dphi: np.ndarray
    drho_dphi: np.ndarray

    @property
    def purity(self):
        return 0.5 * (1 + np.sum(self.w**2, axis=-1))


def bloch_from_rho(rho: np.ndarray) -> np.ndarray:
    """``(W_x, W_y, W_z) = (rho01 + rho10, i(rho01 - rho10), 2 rho00 - 1)``."""
    r01, r10 = rho[..., 0, 1], rho[..., 1, 0]
    return np.stack(
        [(r01 + r10).real, (1j * (r01 - r10)).real, 2 * rho[..., 0, 0].real - 1],
        axis=-1,
    )


def _bloch_derivative(drho: np.ndarray) -> np.ndarray:
    # linear part of bloch_from_rho; the constant -1 drops out
    r01, r10 = drho[..., 0, 1], drho[..., 1, 0]
    return np.stack(
        [(r01 + r10).real, (1j * (r01 - r10)).real, 2 * drho[..., 0, 0].real],
        axis=-1,
    )


def _outer(u, v):
    return u[..., :, None] * np.conj(v)[..., None, :]


def reduced_state(params: ModelParams, probe: ProbeState, xi) -> QubitState:
    """Reduced state of the qubit for amplitude(s) ``xi``."""
    xi = np.asarray(xi, dtype=complex)
    mag = np.abs(xi)
    if np.any(mag > 1 + XI_TOLERANCE) or not np.all(np.isfinite(xi)):
        raise InvalidStateError(f"|xi| must be <= 1, got {mag.max():.12g}")
    # rounding excess within tolerance: project back onto the unit circle
    over = mag > 1
    if np.any(over):
        xi = np.where(over, xi / np.where(over, mag, 1.0), xi)
        mag = np.minimum(mag, 1.0)
    frame = dressed_frame(params)
    coeffs = initial_dressed_coeffs(probe, frame)
    dc0, dc1 = initial_coeffs_phi_derivative(probe, frame)
    G, E = frame.basis()

    x = xi[..., None]
    lost = np.clip(1 - mag**2, 0.0, None)[..., None, None]
    a = coeffs.c0 * G + coeffs.c1 * x * E
    da = dc0 * G + dc1 * x * E
    GG = np.outer(G, G)

    rho = _outer(a, a) + abs(coeffs.c1) ** 2 * lost * GG
    dweight = 2 * (np.conj(coeffs.c1) * dc1).real
    drho = _outer(da, a) + _outer(a, da) + dweight * lost * GG
    return QubitState(
        rho=rho, w=bloch_from_rho(rho), dw_dphi=_bloch_derivative(drho), drho_dphi=drho
    )


def bloch_phi_derivative_fd(
    params: ModelParams, probe: ProbeState, xi, h: float = 1e-5
) -> np.ndarray:
    """Central finite difference of the Bloch vector with respect to phi."""
    if not h > 0:
        raise ValueError("h must be > 0")
    period = 2 * math.pi
    plus = ProbeState(probe.theta, (probe.phi + h) % period)
    minus = ProbeState(probe.theta, (probe.phi - h) % period)
    w_plus = reduced_state(params, plus, xi).w
    w_minus = reduced_state(params, minus, xi).w
    return (w_plus - w_minus) / (2 * h)
