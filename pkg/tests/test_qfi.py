import cmath
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drivenqfi import (
    InvalidStateError,
    ModelParams,
    ProbeState,
    classical_fisher,
    povm_statistics,
    qfi_bloch,
    qfi_pure,
    qfi_spectral,
    qfi_timeseries,
    reduced_state,
    sld,
    xi_analytic,
)
from drivenqfi.qfi import DegenerateSpectrumWarning

from oracles import bures_qfi

GRID = np.linspace(0, 50, 2001)
OMEGAS = (0.0, 0.3, 0.5, 1.0, 2.0, 5.0, 10.0)

thetas = st.floats(0.0, math.pi)
phis = st.floats(0.0, 2 * math.pi, exclude_max=True)
params_st = st.builds(
    ModelParams,
    lam=st.floats(0.01, 20),
    omega=st.floats(0, 10),
    delta_drive=st.floats(0, 5),
    delta_cavity=st.floats(-5, 5),
)


def pure_bloch(theta, phi):
    w = [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
    dw = [-math.sin(theta) * math.sin(phi), math.sin(theta) * math.cos(phi), 0.0]
    return np.array(w), np.array(dw)


def random_state(rng):
    params = ModelParams(
        rng.uniform(0.01, 10), rng.uniform(0, 10), rng.uniform(0, 5), rng.uniform(-5, 5)
    )
    probe = ProbeState(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
    return params, probe, reduced_state(params, probe, xi_analytic(params, rng.uniform(0, 50)))


def test_bloch_examples():
    assert qfi_bloch(np.zeros(3), np.zeros(3)) == 0
    for theta in (0.0, 0.4, math.pi / 2, 2.5, math.pi):
        assert qfi_bloch(*pure_bloch(theta, 1.3)) == pytest.approx(math.sin(theta) ** 2, abs=1e-15)
    assert qfi_bloch(*pure_bloch(math.pi / 2, 0.0)) == 1


def test_bloch_uses_squared_projection():
    w = np.array([0.3, 0.0, 0.4])
    dw = np.array([0.1, 0.2, 0.5])
    expected = 0.3 + (0.03 + 0.2) ** 2 / (1 - 0.25)
    assert qfi_bloch(w, dw) == pytest.approx(expected, rel=1e-14)


def test_bloch_pure_branch_and_vectorisation():
    w = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.5]])
    dw = np.array([[0.3, 0.0, 0.0], [0.0, 0.0, 0.2]])
    np.testing.assert_allclose(qfi_bloch(w, dw), [0.09, 0.04 + 0.01 / 0.75], rtol=1e-14)


def test_bloch_rejects_long_vector():
    with pytest.raises(InvalidStateError):
        qfi_bloch([0.0, 0.0, 1.001], [0.0, 0.0, 0.0])


@pytest.mark.parametrize("t", [0.5, 3.0, 12.0, 40.0])
def test_undriven_qfi_is_survival_probability(t):
    params = ModelParams(0.05)
    xi = xi_analytic(params, t)
    state = reduced_state(params, ProbeState(math.pi / 2, 0.7), xi)
    assert qfi_bloch(state.w, state.dw_dphi) == pytest.approx(abs(xi) ** 2, abs=1e-12)


def test_spectral_examples():
    for theta in (0.0, 0.9, math.pi / 2):
        probe = ProbeState(theta, 2.0)
        psi, dpsi = probe.vector(), probe.vector_phi_derivative()
        rho = np.outer(psi, psi.conj())
        drho = np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())
        assert qfi_spectral(rho, drho) == pytest.approx(math.sin(theta) ** 2, abs=1e-12)
        assert qfi_spectral(rho, drho) == pytest.approx(qfi_pure(psi, dpsi), abs=1e-12)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateSpectrumWarning)
        assert qfi_spectral(np.eye(2) / 2, np.zeros((2, 2))) == 0


def test_spectral_matches_bloch_on_dynamics():
    rng = np.random.default_rng(2024)
    tested = 0
    while tested < 300:
        _, _, state = random_state(rng)
        if 1 - np.sum(state.w**2) <= 1e-9:
            continue
        tested += 1
        a = qfi_bloch(state.w, state.dw_dphi)
        b = qfi_spectral(state.rho, state.drho_dphi)
        assert abs(a - b) <= 1e-8


def test_routes_agree_with_bures_distance():
    rng = np.random.default_rng(5)
    tested = 0
    for _ in range(60):
        params, probe, state = random_state(rng)
        if 1 - np.sum(state.w**2) < 1e-4 or not 0.01 < probe.phi < 6.27:
            continue
        t = rng.uniform(0, 50)
        xi = xi_analytic(params, t)
        state = reduced_state(params, probe, xi)

        def rho_of(phi):
            return reduced_state(params, ProbeState(probe.theta, phi), xi).rho

        expected = bures_qfi(rho_of, probe.phi)
        assert qfi_bloch(state.w, state.dw_dphi) == pytest.approx(expected, rel=1e-4, abs=1e-7)
        tested += 1
    assert tested >= 20


def test_degenerate_spectrum_falls_back():
    drho = np.diag([0.3, -0.3]).astype(complex)
    with pytest.warns(DegenerateSpectrumWarning):
        value = qfi_spectral(np.eye(2) / 2, drho)
    assert value == pytest.approx(qfi_bloch(np.zeros(3), [0.0, 0.0, 0.6]), abs=1e-14)


@pytest.mark.parametrize(
    "rho, drho",
    [
        (np.diag([0.5, 0.6]), np.zeros((2, 2))),
        (np.array([[0.5, 0.1], [0.2, 0.5]]), np.zeros((2, 2))),
        (np.eye(2) / 2, np.diag([0.1, 0.1])),
        (np.eye(2) / 2, np.array([[0, 1], [0, 0]])),
        (np.eye(3) / 3, np.zeros((2, 2))),
    ],
)
def test_spectral_rejects_invalid_input(rho, drho):
    with pytest.raises((InvalidStateError, ValueError)):
        qfi_spectral(rho, drho)


def test_pure_examples():
    probe = ProbeState(1.0, 0.3)
    psi, dpsi = probe.vector(), probe.vector_phi_derivative()
    assert qfi_pure(psi, dpsi) == pytest.approx(math.sin(1.0) ** 2, abs=1e-15)
    flat = ProbeState(0.0, 0.3)
    assert qfi_pure(flat.vector(), flat.vector_phi_derivative()) == 0
    with pytest.raises(InvalidStateError):
        qfi_pure(2 * psi, dpsi)


@settings(max_examples=100)
@given(thetas, phis, st.floats(-math.pi, math.pi))
def test_pure_global_phase_invariance(theta, phi, alpha):
    probe = ProbeState(theta, phi)
    g = cmath.exp(1j * alpha)
    psi, dpsi = probe.vector(), probe.vector_phi_derivative()
    assert qfi_pure(g * psi, g * dpsi) == pytest.approx(qfi_pure(psi, dpsi), abs=1e-14)


@settings(max_examples=200)
@given(thetas, phis, params_st, st.floats(0, 60))
def test_sld_defining_relation(theta, phi, params, t):
    state = reduced_state(params, ProbeState(theta, phi), xi_analytic(params, t))
    if 1 - np.sum(state.w**2) <= 1e-6:
        return
    L = sld(state.rho, state.drho_dphi)
    np.testing.assert_allclose((L @ state.rho + state.rho @ L) / 2, state.drho_dphi, atol=1e-9)
    f = np.trace(state.rho @ L @ L).real
    assert f == pytest.approx(qfi_bloch(state.w, state.dw_dphi), abs=1e-8)


def projective(vectors):
    return [np.outer(v, np.conj(v)) for v in vectors]


def test_classical_fisher_examples():
    probe = ProbeState(1.1, 0.8)
    psi, dpsi = probe.vector(), probe.vector_phi_derivative()
    rho = np.outer(psi, psi.conj())
    drho = np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())
    computational = projective(np.eye(2))
    assert classical_fisher(*povm_statistics(rho, drho, computational)) < 1e-30
    s = 1 / math.sqrt(2)
    sigma_x = projective([np.array([s, s]), np.array([s, -s])])
    for phi in (0.3, math.pi / 2, 2.0, 4.0):
        probe = ProbeState(math.pi / 2, phi)
        psi, dpsi = probe.vector(), probe.vector_phi_derivative()
        rho = np.outer(psi, psi.conj())
        drho = np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())
        assert classical_fisher(*povm_statistics(rho, drho, sigma_x)) == pytest.approx(1, abs=1e-12)


def test_classical_fisher_rejects_inconsistent_input():
    with pytest.raises(ValueError):
        classical_fisher([0.5, 0.6], [0.1, -0.1])
    with pytest.raises(ValueError):
        classical_fisher([0.5, 0.5], [0.1, 0.1])
    with pytest.raises(ValueError):
        classical_fisher([1.2, -0.2], [0.0, 0.0])
    with pytest.raises(ValueError):
        classical_fisher([1.0], [0.0, 0.0])


def random_povm(rng, outcomes):
    # rank-one elements A^-1/2 |v><v| A^-1/2 with A = sum |v><v|
    vs = rng.normal(size=(outcomes, 2)) + 1j * rng.normal(size=(outcomes, 2))
    A = sum(np.outer(v, v.conj()) for v in vs)
    evals, evecs = np.linalg.eigh(A)
    inv_root = evecs @ np.diag(evals**-0.5) @ evecs.conj().T
    return [inv_root @ np.outer(v, v.conj()) @ inv_root for v in vs]


def test_cramer_rao_ordering():
    rng = np.random.default_rng(99)
    for _ in range(200):
        _, _, state = random_state(rng)
        if 1 - np.sum(state.w**2) <= 1e-9:
            continue
        bound = qfi_spectral(state.rho, state.drho_dphi) + 1e-9
        for outcomes in (2, 3, 4):
            povm = random_povm(rng, outcomes)
            np.testing.assert_allclose(sum(povm), np.eye(2), atol=1e-12)
            p, dp = povm_statistics(state.rho, state.drho_dphi, povm)
            assert classical_fisher(p, dp) <= bound


def test_timeseries_initial_value_is_pure_qfi():
    rng = np.random.default_rng(3)
    for _ in range(50):
        params = ModelParams(rng.uniform(0.01, 10), rng.uniform(0, 10), rng.uniform(0, 5), rng.uniform(-5, 5))
        theta = rng.uniform(0, math.pi)
        series = qfi_timeseries(params, ProbeState(theta, rng.uniform(0, 6)), GRID[:5])
        assert series.f_phi[0] == pytest.approx(math.sin(theta) ** 2, abs=1e-10)
        assert series.pure_branch[0]


def test_timeseries_markovian_decay():
    series = qfi_timeseries(ModelParams(10.0), ProbeState(math.pi / 2), GRID)
    assert series.f_phi[-1] < 1e-10
    assert np.all(np.diff(series.f_phi) <= 0)
    # F = exp(-t) up to the O(1/lambda) memory correction
    assert np.max(np.abs(series.f_phi - np.exp(-GRID))) < 0.08


def test_timeseries_damped_oscillations():
    f = qfi_timeseries(ModelParams(0.05), ProbeState(math.pi / 2), GRID).f_phi
    interior = np.flatnonzero((f[1:-1] > f[:-2]) & (f[1:-1] > f[2:])) + 1
    np.testing.assert_allclose(GRID[interior], [20.125, 40.25], atol=0.05)
    # the t = 0 boundary maximum is the third
    assert f[0] > f[1]


def test_timeseries_strong_drive_preserves_qfi():
    series = qfi_timeseries(ModelParams(0.05, 10.0), ProbeState(math.pi / 2), GRID)
    assert series.f_phi[-1] >= 0.9
    assert np.min(series.f_phi) >= 0.9


def test_timeseries_volterra_matches_analytic():
    params, probe = ModelParams(0.1, 1.0, 1.0, 2.0), ProbeState(1.2, 0.4)
    a = qfi_timeseries(params, probe, GRID)
    b = qfi_timeseries(params, probe, GRID, method="volterra")
    np.testing.assert_allclose(a.f_phi, b.f_phi, atol=1e-5)
    with pytest.raises(ValueError):
        qfi_timeseries(params, probe, GRID, method="euler")


def test_timeseries_diagnostics():
    series = qfi_timeseries(ModelParams(0.5, 1.0), ProbeState(), GRID)
    assert np.all(series.f_phi >= -1e-10)
    np.testing.assert_allclose(series.purity, 0.5 * (1 + series.w_norm**2))
    assert series.abs_xi[0] == 1
    assert series.pure_branch[0] and not series.pure_branch[-1]


def final_qfi(lam, omega):
    return qfi_timeseries(ModelParams(lam, omega), ProbeState(math.pi / 2), [50.0]).f_phi[0]


@pytest.mark.parametrize("lam", [0.05, 0.1, 0.5])
def test_qfi_non_decreasing_in_drive(lam):
    values = [final_qfi(lam, o) for o in OMEGAS]
    assert np.all(np.diff(values) >= 0)


@pytest.mark.parametrize("omega", OMEGAS[1:])
def test_qfi_non_increasing_in_width(omega):
    values = [final_qfi(lam, omega) for lam in (0.05, 0.1, 0.5, 5.0)]
    assert np.all(np.diff(values) <= 0)


@settings(max_examples=100)
@given(params_st, thetas, phis, phis, st.floats(0, 60))
def test_qfi_independent_of_probe_phase(params, theta, phi1, phi2, t):
    xi = xi_analytic(params, t)
    s1 = reduced_state(params, ProbeState(theta, phi1), xi)
    s2 = reduced_state(params, ProbeState(theta, phi2), xi)
    assert qfi_bloch(s1.w, s1.dw_dphi) == pytest.approx(qfi_bloch(s2.w, s2.dw_dphi), abs=1e-6)
