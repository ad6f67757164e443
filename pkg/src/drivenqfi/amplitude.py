"""Survival amplitude xi(t) of the excited dressed state.

Three independent routes are provided:

* ``xi_analytic`` / ``xi_trace``: closed form for the Lorentzian reservoir,
  whose memory kernel is ``f(tau) = (gamma0*lam/2) exp(-M tau)``.
* ``xi_volterra``: the memory-kernel equation
  ``dc1/dt = -cos^4(eta/2) int_0^t f(t - s) c1(s) ds`` rewritten as a pair of
  linear ODEs (exact for an exponential kernel) and integrated with RK4.
* ``xi_generic_volterra``: the same equation for an arbitrary spectral
  density; the kernel is built by quadrature and the history integral is
  discretised with the trapezoidal rule.

Frequencies handed to a :class:`SpectralDensity` are offsets
``nu = omega - omega0`` from the bare qubit transition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy.special import exp1

from .errors import AccuracyError
from .model import GAMMA0, ModelParams, dressed_frame

Method = Literal["analytic", "volterra-ode", "volterra-generic"]

# below this |K t / 4| the closed form is evaluated by its Taylor series
_SERIES_CUTOFF = 1e-2


@dataclass(frozen=True)
class KernelParams:
    M: complex
    K: complex
    coupling_weight: float


@dataclass(frozen=True)
class AmplitudeTrace:
    grid: np.ndarray
    values: np.ndarray
    method: Method

    def __len__(self):
        return len(self.grid)

    @property
    def abs(self) -> np.ndarray:
        return np.abs(self.values)


@dataclass(frozen=True)
class SpectralDensity:
    """Reservoir spectral density ``J(nu) >= 0``.

    ``evaluator`` must accept a float array of frequency offsets.  ``center``
    and ``width`` locate the bulk of the spectrum for the quadrature window;
    tails outside the window are assumed to fall off like ``1/nu^2`` (or
    faster).
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    center: float
    width: float

    def __call__(self, nu):
        return self.evaluator(np.asarray(nu, dtype=float))


def lorentzian_density(params: ModelParams) -> SpectralDensity:
    """Lorentzian of width lambda centred on the reservoir frequency omega_c."""
    lam, delta = params.lam, params.delta_cavity

    def evaluate(nu):
        return GAMMA0 * lam**2 / (2 * np.pi) / ((nu + delta) ** 2 + lam**2)

    return SpectralDensity(evaluate, center=-delta, width=lam)


def kernel_params(params: ModelParams, frame=None) -> KernelParams:
    frame = dressed_frame(params) if frame is None else frame
    M = complex(
        params.lam,
        params.delta_drive - params.delta_cavity - frame.omega_d,
    )
    ce = math.cos(frame.eta / 2)
    K = np.sqrt(
        complex(4 * M * M - 2 * GAMMA0 * params.lam * (1 + math.cos(frame.eta)) ** 2)
    )
    return KernelParams(M=M, K=complex(K), coupling_weight=ce**4)


def check_grid(grid, *, start_at_zero: bool = False, uniform: bool = False) -> np.ndarray:
    t = np.asarray(grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("time grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(t)):
        raise ValueError("time grid must be finite")
    if t[0] < 0:
        raise ValueError("time grid must be non-negative")
    if np.any(np.diff(t) <= 0):
        raise ValueError("time grid must be strictly increasing")
    if start_at_zero and t[0] != 0:
        raise ValueError("time grid must start at t = 0")
    if uniform and t.size > 2:
        steps = np.diff(t)
        if np.ptp(steps) > 1e-9 * steps.mean():
            raise ValueError("time grid must be uniform")
    return t


def _xi_closed_form(M: complex, K: complex, t: np.ndarray) -> np.ndarray:
    z = K * t / 4
    out = np.empty(t.shape, dtype=complex)
    small = np.abs(z) < _SERIES_CUTOFF
    if np.any(small):
        # cosh(z) + (M t / 2) * sinh(z)/z, regular at K -> 0
        zs, ts = z[small], t[small]
        z2 = zs * zs
        cosh = 1 + z2 / 2 * (1 + z2 / 12 * (1 + z2 / 30))
        sinhc = 1 + z2 / 6 * (1 + z2 / 20 * (1 + z2 / 42))
        out[small] = np.exp(-M * ts / 2) * (cosh + M * ts / 2 * sinhc)
    if not np.all(small):
        # two decaying exponentials; avoids cosh/sinh overflow at large |K| t
        tb = t[~small]
        r = 2 * M / K
        out[~small] = 0.5 * (1 + r) * np.exp((K / 2 - M) * tb / 2) + 0.5 * (
            1 - r
        ) * np.exp(-(K / 2 + M) * tb / 2)
    return out


def xi_analytic(params: ModelParams, t):
    """Closed-form amplitude at time(s) ``t >= 0`` (scalar in, scalar out)."""
    kp = kernel_params(params)
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise ValueError("time must be non-negative")
    values = _xi_closed_form(kp.M, kp.K, np.atleast_1d(arr))
    if arr.ndim == 0:
        return complex(values[0])
    return values.reshape(arr.shape)


def xi_trace(params: ModelParams, grid) -> AmplitudeTrace:
    t = check_grid(grid)
    return AmplitudeTrace(t, xi_analytic(params, t), "analytic")


def rk4_step(f, t: float, y: np.ndarray, h: float) -> np.ndarray:
    """One classical Runge-Kutta step for ``dy/dt = f(t, y)``."""
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _memory_ode_matrix(params: ModelParams) -> np.ndarray:
    # state (c1, y) with y(t) = int_0^t f(t - s) c1(s) ds
    kp = kernel_params(params)
    return np.array(
        [[0.0, -kp.coupling_weight], [GAMMA0 * params.lam / 2, -kp.M]],
        dtype=complex,
    )


def _integrate_memory_ode(A: np.ndarray, h: float, n_steps: int, substeps: int) -> np.ndarray:
    hs = h / substeps
    # RK4 applied to the identity gives the one-substep propagator of a
    # linear autonomous system; stepping with it is the RK4 solution.
    step = rk4_step(lambda _t, Y: A @ Y, 0.0, np.eye(2, dtype=complex), hs)
    out = np.empty(n_steps + 1, dtype=complex)
    y = np.array([1.0, 0.0], dtype=complex)
    out[0] = 1.0
    # an unstable step blows up; the caller's convergence check reports it
    with np.errstate(over="ignore", invalid="ignore"):
        prop = np.linalg.matrix_power(step, substeps)
        for n in range(1, n_steps + 1):
            y = prop @ y
            out[n] = y[0]
    return out


def _sup_diff(a: np.ndarray, b: np.ndarray) -> float:
    with np.errstate(invalid="ignore"):
        diff = np.abs(a - b)
    return float(np.max(diff)) if np.all(np.isfinite(diff)) else math.inf


def xi_volterra(
    params: ModelParams,
    grid,
    *,
    substeps: int | None = None,
    tol: float = 1e-6,
    max_substeps: int = 4096,
) -> AmplitudeTrace:
    """Integrate the exponential-kernel memory equation with RK4.

    Each grid interval is split into ``substeps`` RK4 steps.  The result is
    compared with a run at twice as many substeps; a sup-norm difference
    above ``tol`` raises :class:`AccuracyError`.  With ``substeps=None`` the
    count is doubled from 1 until the check passes and the finer run is
    returned.
    """
    t = check_grid(grid, start_at_zero=True, uniform=True)
    if t.size == 1:
        return AmplitudeTrace(t, np.ones(1, dtype=complex), "volterra-ode")
    h = (t[-1] - t[0]) / (t.size - 1)
    A = _memory_ode_matrix(params)
    n = t.size - 1

    if substeps is not None:
        if substeps < 1:
            raise ValueError("substeps must be >= 1")
        coarse = _integrate_memory_ode(A, h, n, substeps)
        fine = _integrate_memory_ode(A, h, n, 2 * substeps)
        diff = _sup_diff(coarse, fine)
        if diff > tol:
            raise AccuracyError(
                f"RK4 step {h / substeps:.3g} too coarse: halved-step estimate "
                f"differs by {diff:.3g} > {tol:g}",
                suggested_step=_suggest_step(h / substeps, diff, tol, A),
            )
        return AmplitudeTrace(t, coarse, "volterra-ode")

    s = 1
    coarse = _integrate_memory_ode(A, h, n, s)
    while True:
        fine = _integrate_memory_ode(A, h, n, 2 * s)
        diff = _sup_diff(coarse, fine)
        if diff <= tol:
            return AmplitudeTrace(t, fine, "volterra-ode")
        s *= 2
        if 2 * s > max_substeps:
            raise AccuracyError(
                f"RK4 did not converge within {max_substeps} substeps "
                f"(difference {diff:.3g})",
                suggested_step=_suggest_step(h / s, diff, tol, A),
            )
        coarse = fine


def _suggest_step(step: float, diff: float, tol: float, A: np.ndarray) -> float:
    if diff < 1e-2:
        # asymptotic fourth-order regime: diff * (new/old)^4 ~ tol / 2
        return step * (tol / (2 * diff)) ** 0.25
    # unresolved or unstable: fall back to the fastest rate of the system
    rate = float(np.max(np.abs(np.linalg.eigvals(A))))
    return min(step / 2, 0.02 / rate)


def _tail_integral(B: float, tau: np.ndarray) -> np.ndarray:
    """``int_B^inf exp(-i u tau) / u^2 du`` for ``tau >= 0``."""
    out = np.empty(tau.shape, dtype=complex)
    zero = tau == 0
    out[zero] = 1 / B
    tz = tau[~zero]
    out[~zero] = np.exp(-1j * B * tz) / B - 1j * tz * exp1(1j * B * tz)
    return out


def memory_kernel(
    j: SpectralDensity,
    params: ModelParams,
    tau,
    *,
    window: float = 200.0,
    spacing: float | None = None,
) -> np.ndarray:
    """Kernel ``f(tau) = int J(nu) exp(i (omega_D - Delta - nu) tau) dnu``.

    ``tau`` must be a uniform grid starting at 0.  The integral is a
    trapezoidal sum over ``center +- window*width``; the two tails beyond
    the window are added analytically assuming ``J ~ A / (nu - center)^2``
    with ``A`` matched at the window edges.
    """
    tau = check_grid(tau, start_at_zero=True, uniform=True)
    frame = dressed_frame(params)
    c, w = j.center, j.width
    if not w > 0:
        raise ValueError("spectral density width hint must be > 0")
    t_max = float(tau[-1])
    if spacing is None:
        # alias period 2*pi/spacing exceeds the grid by ~40 kernel decay times
        spacing = 2 * np.pi / (t_max + 40 / w)
    half = window * w
    n = max(2, int(math.ceil(2 * half / spacing)))
    nu = np.linspace(c - half, c + half, n + 1)
    d = nu[1] - nu[0]
    weights = np.full(nu.size, d)
    weights[0] = weights[-1] = d / 2
    jw = np.asarray(j(nu), dtype=float) * weights

    f = np.empty(tau.size, dtype=complex)
    if tau.size > 1:
        h = tau[1] - tau[0]
        phase = np.ones(nu.size, dtype=complex)
        rot = np.exp(-1j * nu * h)
        for k in range(tau.size):
            f[k] = jw @ phase
            phase *= rot
            if k % 256 == 255 and k + 1 < tau.size:
                # re-anchor to stop rounding drift in the phase recursion
                phase = np.exp(-1j * nu * tau[k + 1])
    else:
        f[0] = jw.sum()

    edge_right = float(j(np.array([c + half]))[0]) * half**2
    edge_left = float(j(np.array([c - half]))[0]) * half**2
    g = _tail_integral(half, tau)
    f += np.exp(-1j * c * tau) * (edge_right * g + edge_left * np.conj(g))
    return f * np.exp(1j * (frame.omega_d - params.delta_drive) * tau)


def _solve_trapezoid(f: np.ndarray, weight: float, h: float) -> np.ndarray:
    # c_n = c_{n-1} - weight*h/2 (I_{n-1} + I_n); I_n by trapezoid over history
    n_points = f.size
    c = np.empty(n_points, dtype=complex)
    c[0] = 1.0
    a = weight * h / 2
    diag = h * f[0] / 2
    I_prev = 0.0
    for n in range(1, n_points):
        known = h * 0.5 * f[n] * c[0]
        if n > 1:
            known += h * (f[n - 1 : 0 : -1] @ c[1:n])
        c[n] = (c[n - 1] - a * (I_prev + known)) / (1 + a * diag)
        I_prev = known + diag * c[n]
    return c


def xi_generic_volterra(
    j: SpectralDensity,
    params: ModelParams,
    grid,
    *,
    window: float = 200.0,
    quad_tol: float = 1e-4,
) -> AmplitudeTrace:
    """Solve the memory-kernel equation for an arbitrary spectral density.

    Cost is O(N^2) in the number of grid points; accuracy is second order
    in the grid step.  The kernel is computed at two refinement levels
    (window doubled, frequency spacing halved); if they differ by more than
    ``quad_tol`` in sup-norm an :class:`AccuracyError` is raised.
    """
    t = check_grid(grid, start_at_zero=True, uniform=True)
    if t.size == 1:
        return AmplitudeTrace(t, np.ones(1, dtype=complex), "volterra-generic")
    w = j.width
    spacing = 2 * np.pi / (t[-1] + 40 / w)
    f_coarse = memory_kernel(j, params, t, window=window, spacing=spacing)
    f_fine = memory_kernel(j, params, t, window=2 * window, spacing=spacing / 2)
    diff = float(np.max(np.abs(f_coarse - f_fine)))
    if diff > quad_tol:
        raise AccuracyError(
            f"kernel quadrature not converged: refinement levels differ by "
            f"{diff:.3g} > {quad_tol:g}",
            suggested_step=spacing / 4,
        )
    h = (t[-1] - t[0]) / (t.size - 1)
    weight = math.cos(dressed_frame(params).eta / 2) ** 4
    return AmplitudeTrace(t, _solve_trapezoid(f_fine, weight, h), "volterra-generic")
