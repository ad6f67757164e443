"""Phase-estimation precision of a classically driven qubit in a Lorentzian reservoir."""

from .amplitude import (
    AmplitudeTrace,
    KernelParams,
    SpectralDensity,
    kernel_params,
    lorentzian_density,
    memory_kernel,
    xi_analytic,
    xi_generic_volterra,
    xi_trace,
    xi_volterra,
)
from .config import RunConfig, SweepSpec, format_config, parse_config
from .dynamics import QubitState, bloch_phi_derivative_fd, reduced_state
from .errors import AccuracyError, ConfigError, InvalidStateError
from .model import (
    DressedCoeffs,
    DressedFrame,
    ModelParams,
    ProbeState,
    dressed_frame,
    initial_coeffs_phi_derivative,
    initial_dressed_coeffs,
)
from .qfi import (
    QfiSeries,
    classical_fisher,
    povm_statistics,
    qfi_bloch,
    qfi_pure,
    qfi_spectral,
    qfi_timeseries,
    sld,
)
from .quasimode import (
    DetuningProfile,
    Regime,
    classify_regime,
    detuning_profile,
    effective_detuning,
    sudden_change_point,
)
from .sweep import Dataset, run_figure, run_sweep, run_trace

__version__ = "0.1.0"
