"""Effective qubit-quasimode detuning and regime classification."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .model import GAMMA0, ModelParams


class Regime(str, enum.Enum):
    MARKOVIAN = "markovian"
    NON_MARKOVIAN = "non-markovian"


@dataclass(frozen=True)
class DetuningProfile:
    delta_eff: float
    sudden_change_delta: float
    regime: Regime


def _check(omega_rabi: float, delta_drive: float):
    if omega_rabi < 0 or delta_drive < 0:
        raise ValueError("omega and delta_drive must be >= 0")


def effective_detuning(omega_rabi: float, delta_drive: float, delta_cavity: float) -> float:
    """``|sqrt(Delta^2 + 4 Omega^2) - Delta + delta|``."""
    _check(omega_rabi, delta_drive)
    return abs(math.hypot(delta_drive, 2 * omega_rabi) - delta_drive + delta_cavity)


def sudden_change_point(omega_rabi: float, delta_drive: float) -> float:
    """Cavity detuning at which the effective detuning vanishes (always <= 0)."""
    _check(omega_rabi, delta_drive)
    return -(math.hypot(delta_drive, 2 * omega_rabi) - delta_drive)


def classify_regime(gamma0: float, lam: float) -> Regime:
    """Non-Markovian iff ``gamma0 > lam / 2``; the boundary counts as Markovian."""
    if not lam > 0:
        raise ValueError("lambda must be > 0")
    return Regime.NON_MARKOVIAN if gamma0 > lam / 2 else Regime.MARKOVIAN


def detuning_profile(params: ModelParams) -> DetuningProfile:
    return DetuningProfile(
        delta_eff=effective_detuning(params.omega, params.delta_drive, params.delta_cavity),
        sudden_change_delta=sudden_change_point(params.omega, params.delta_drive),
        regime=classify_regime(GAMMA0, params.lam),
    )
