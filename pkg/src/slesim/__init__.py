"""slesim: pseudospectral simulator, Gaussian-dynamics oracle and
diagnostics suite for the logarithmic Schrodinger-Langevin equation."""

from .core import (
    DiagnosticsRow,
    GaussianState,
    Grid1D,
    NonFiniteFieldError,
    PhysParams,
    WaveField,
    gaussian_field,
    gaussian_state,
    grid_new,
)
from .diagnostics import (
    EnergyBreakdown,
    PowerLawFit,
    RescaledDensity,
    csiszar_kullback_residual,
    energies,
    energy_lyapunov,
    energy_reg,
    fit_power_law,
    kinetic_split,
    log_sobolev_residual,
    mass,
    moments,
    profile_l1_distance,
    rescaled_density,
)
from .gaussian import (
    AsymptoticConstants,
    GaussianTrajectory,
    MovingCenterTrajectory,
    ScalingSolution,
    asymptotic_constants,
    elliptic_residual,
    envelope_bound,
    first_integral_residual,
    gaussian_rhs,
    gaussian_to_field,
    gausson_profile,
    integrate_gaussian,
    moving_center_integrate,
    stationary_phase,
    tau_solve,
)
from .spectral import (
    SpectralPlan,
    forward_dft,
    inverse_dft,
    kinetic_flow,
    spectral_gradient,
    wavenumbers,
)
from .splitting import (
    Snapshot,
    SplittingConfig,
    dissipation_flow,
    lie_trotter_step,
    log_flow,
    run_simulation,
)

__version__ = "0.1.0"
