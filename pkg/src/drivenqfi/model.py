"""Parameters, dressed-state geometry and initial-state coefficients.

All rates and detunings are expressed in units of the Markovian decay
rate gamma0, which is fixed to 1; times are in units of 1/gamma0.

Basis convention: ``|1>`` is the excited state ``|e>`` and ``|0>`` the
ground state ``|g>``.  Vectors are stored as ``[<0|., <1|.]``.  In this
basis the dressed states of the drive-plus-detuning Hamiltonian are::

    |E> =  cos(eta/2)|e> + sin(eta/2)|g>   ->  [sin(eta/2),  cos(eta/2)]
    |G> = -sin(eta/2)|e> + cos(eta/2)|g>   ->  [cos(eta/2), -sin(eta/2)]
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GAMMA0 = 1.0


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters in units of gamma0.

    Attributes
    ----------
    lam : float
        Spectral width lambda of the Lorentzian reservoir, > 0.
    omega : float
        Rabi frequency Omega of the classical drive, >= 0.
    delta_drive : float
        Drive detuning Delta = |omega0 - omega_L|, >= 0.
    delta_cavity : float
        Qubit-reservoir detuning delta = omega0 - omega_c, any sign.
    """

    lam: float = 0.05
    omega: float = 0.0
    delta_drive: float = 0.0
    delta_cavity: float = 0.0

    def __post_init__(self):
        for name in ("lam", "omega", "delta_drive", "delta_cavity"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{_KEY_NAMES[name]} must be finite")
        if not self.lam > 0:
            raise ValueError("lambda must be > 0")
        if self.omega < 0:
            raise ValueError("omega must be >= 0")
        if self.delta_drive < 0:
            raise ValueError("delta_drive must be >= 0")

    @property
    def gamma0(self) -> float:
        return GAMMA0


_KEY_NAMES = {
    "lam": "lambda",
    "omega": "omega",
    "delta_drive": "delta_drive",
    "delta_cavity": "delta_cavity",
}


@dataclass(frozen=True)
class ProbeState:
    """Initial qubit state cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>."""

    theta: float = math.pi / 2
    phi: float = math.pi / 4

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError("theta must lie in [0, pi]")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError("phi must lie in [0, 2*pi)")

    def vector(self) -> np.ndarray:
        return np.array(
            [
                math.cos(self.theta / 2),
                np.exp(1j * self.phi) * math.sin(self.theta / 2),
            ],
            dtype=complex,
        )

    def vector_phi_derivative(self) -> np.ndarray:
        return np.array(
            [0.0, 1j * np.exp(1j * self.phi) * math.sin(self.theta / 2)],
            dtype=complex,
        )


@dataclass(frozen=True)
class DressedFrame:
    eta: float
    omega_d: float

    def basis(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(G, E)`` as real vectors in the ``{|0>, |1>}`` basis."""
        s, c = math.sin(self.eta / 2), math.cos(self.eta / 2)
        return np.array([c, -s]), np.array([s, c])


@dataclass(frozen=True)
class DressedCoeffs:
    c0: complex
    c1: complex


def dressed_frame(params: ModelParams) -> DressedFrame:
    """Mixing angle and dressed frequency of the driven qubit.

    The angle uses ``atan2(2*Omega, Delta)`` so resonant driving
    (Delta = 0) is regular and gives eta = pi/2.
    """
    eta = math.atan2(2.0 * params.omega, params.delta_drive)
    omega_d = math.hypot(params.delta_drive, 2.0 * params.omega)
    return DressedFrame(eta=eta, omega_d=omega_d)


def initial_dressed_coeffs(probe: ProbeState, frame: DressedFrame) -> DressedCoeffs:
    ct, st = math.cos(probe.theta / 2), math.sin(probe.theta / 2)
    ce, se = math.cos(frame.eta / 2), math.sin(frame.eta / 2)
    phase = complex(np.exp(1j * probe.phi))
    c0 = ct * ce - phase * st * se
    c1 = ct * se + phase * st * ce
    return DressedCoeffs(c0=c0, c1=c1)


def initial_coeffs_phi_derivative(
    probe: ProbeState, frame: DressedFrame
) -> tuple[complex, complex]:
    """Analytic derivatives ``(dc0/dphi, dc1/dphi)``."""
    st = math.sin(probe.theta / 2)
    ce, se = math.cos(frame.eta / 2), math.sin(frame.eta / 2)
    phase = complex(np.exp(1j * probe.phi))
    return -1j * phase * st * se, 1j * phase * st * ce
