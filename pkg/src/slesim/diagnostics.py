"""Observable functionals of fields and densities: mass, energies, moments,
profile distances, the tau-rescaling of densities, inequality residuals and
power-law fitting of time series.

All integrals are rectangle sums on the periodic grid. rho log rho uses the
0 log 0 = 0 convention with rho clamped at 1e-300; sqrt(rho) entering
gradient terms is clamped at 1e-14 to keep the spectral derivative tame at
vacuum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Grid1D, PhysParams, WaveField, grid_new
from .spectral import gradient_values

_RHO_TINY = 1e-300
_SQRT_CLAMP = 1e-14


def mass(field: WaveField) -> float:
    """Discrete L1 norm of the density, sum |psi_k|^2 dx."""
    return float(np.sum(field.density()) * field.grid.dx)


def _rho_log_rho(rho: np.ndarray) -> np.ndarray:
    return rho * np.log(np.maximum(rho, _RHO_TINY))


def energy_reg(field: WaveField, params: PhysParams) -> float:
    """Regularized energy

        E_eps = int |grad psi|^2 + 2 lam eps |psi|
                + lam |psi|^2 log(|psi|^2 + eps)
                - lam eps^2 log((1 + |psi|/eps)^2)  dx,

    the quantity the damped dynamics dissipates. The last term is defined as
    its eps -> 0 limit (zero) when eps = 0, and the log term falls back to
    rho log rho with the 0 log 0 convention.
    """
    grid = field.grid
    lam, eps = params.lam, params.eps
    grad = gradient_values(grid, field.values)
    integrand = grad.real**2 + grad.imag**2
    if lam != 0.0:
        rho = field.density()
        if eps > 0.0:
            m = np.sqrt(rho)
            integrand = integrand + lam * (
                2.0 * eps * m + rho * np.log(rho + eps) - 2.0 * eps * eps * np.log1p(m / eps)
            )
        else:
            integrand = integrand + lam * _rho_log_rho(rho)
    return float(np.sum(integrand) * grid.dx)


def energy_lyapunov(field: WaveField, params: PhysParams) -> float:
    """The exactly dissipated energy of the regularized flow,

        int |grad psi|^2 + 2 lam [(rho+eps) log(rho+eps) - rho - eps log eps] dx.

    The potential is the antiderivative of the nonlinearity 2 lam log(rho+eps),
    so along the damped dynamics this decays monotonically (up to splitting
    error); energy_reg's four-term form mixes |psi|- and |psi|^2-regularized
    potentials and is *not* monotone at the O(eps) level. At eps = 0 this
    reduces to int |grad psi|^2 + 2 lam (rho log rho - rho).
    """
    grid = field.grid
    lam, eps = params.lam, params.eps
    grad = gradient_values(grid, field.values)
    integrand = grad.real**2 + grad.imag**2
    if lam != 0.0:
        rho = field.density()
        if eps > 0.0:
            integrand = integrand + (2.0 * lam) * (
                (rho + eps) * np.log(rho + eps) - rho - eps * np.log(eps))
        else:
            integrand = integrand + (2.0 * lam) * (_rho_log_rho(rho) - rho)
    return float(np.sum(integrand) * grid.dx)


@dataclass(frozen=True)
class EnergyBreakdown:
    e_kin_total: float  # 0.5 int |grad psi|^2
    e_pot_log: float    # lam int rho log rho
    e_reg: float        # regularized energy E_eps


def energies(field: WaveField, params: PhysParams) -> EnergyBreakdown:
    """Kinetic, logarithmic-potential and regularized energies of a field."""
    dx = field.grid.dx
    grad = gradient_values(field.grid, field.values)
    grad2 = float(np.sum(grad.real**2 + grad.imag**2) * dx)
    rho = field.density()
    e_pot = params.lam * float(np.sum(_rho_log_rho(rho)) * dx)
    return EnergyBreakdown(0.5 * grad2, e_pot, energy_reg(field, params))


def kinetic_split(field: WaveField) -> tuple[float, float]:
    """Split 0.5 int |grad psi|^2 into the quantum part 0.5 int |grad
    sqrt(rho)|^2 and the classical part E_c = 0.5 int rho u^2 (by
    subtraction, never by dividing by rho). Returns (quantum, classical)."""
    dx = field.grid.dx
    grad = gradient_values(field.grid, field.values)
    total = 0.5 * float(np.sum(grad.real**2 + grad.imag**2) * dx)
    sq = np.sqrt(np.maximum(field.density(), _SQRT_CLAMP**2))
    gsq = gradient_values(field.grid, sq)
    quantum = 0.5 * float(np.sum(gsq.real**2 + gsq.imag**2) * dx)
    return quantum, total - quantum


def moments(field: WaveField) -> tuple[float, float]:
    """Raw density moments (int x rho dx, int x^2 rho dx), not normalized."""
    rho = field.density()
    x = field.grid.points
    dx = field.grid.dx
    return float(np.sum(x * rho) * dx), float(np.sum(x * x * rho) * dx)


def profile_l1_distance(grid: Grid1D, density_a: np.ndarray, density_b: np.ndarray) -> float:
    """L1 distance sum |rho_a - rho_b| dx of two densities on one grid."""
    density_a = np.asarray(density_a, dtype=float)
    density_b = np.asarray(density_b, dtype=float)
    if density_a.shape != (grid.n,) or density_b.shape != (grid.n,):
        raise ValueError("densities must both live on the given grid")
    return float(np.sum(np.abs(density_a - density_b)) * grid.dx)


@dataclass(frozen=True)
class RescaledDensity:
    """Density in the self-similar variable y = x/tau, on a fixed y-grid."""

    grid: Grid1D
    values: np.ndarray
    y_covered: float  # largest |y| for which tau*y stayed inside the source grid


def rescaled_density(field: WaveField, tau: float,
                     y_halfwidth: float = 12.0, n_y: int = 2400) -> RescaledDensity:
    """Mass-preserving rescaling rho~(y) = tau^d rho(tau y) (d = 1), linearly
    interpolated onto the reference y-grid [-y_halfwidth, y_halfwidth)."""
    if tau <= 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    ygrid = grid_new(-y_halfwidth, y_halfwidth, n_y)
    x = field.grid.points
    rho = field.density()
    xq = tau * ygrid.points
    vals = tau * np.interp(xq, x, rho, left=0.0, right=0.0)
    covered = min(-field.grid.a, field.grid.b - field.grid.dx) / tau
    return RescaledDensity(ygrid, vals, float(covered))


def log_sobolev_residual(grid: Grid1D, density: np.ndarray, alpha: float) -> float:
    """RHS - LHS of the logarithmic Sobolev inequality

        int rho log rho <= (alpha^2/pi) ||grad sqrt(rho)||^2
                           + (log ||rho||_1 - d (1 + log alpha)) ||rho||_1

    for d = 1 and any alpha > 0; nonnegative up to discretization error.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    density = np.asarray(density, dtype=float)
    dx = grid.dx
    l1 = float(np.sum(density) * dx)
    lhs = float(np.sum(_rho_log_rho(density)) * dx)
    sq = np.sqrt(np.maximum(density, _SQRT_CLAMP**2))
    gsq = gradient_values(grid, sq)
    grad2 = float(np.sum(gsq.real**2 + gsq.imag**2) * dx)
    rhs = (alpha * alpha / np.pi) * grad2 + (np.log(l1) - (1.0 + np.log(alpha))) * l1
    return rhs - lhs


def csiszar_kullback_residual(grid: Grid1D, density: np.ndarray,
                              mass_tol: float = 1e-3) -> float:
    """Relative-entropy lower bound against Gamma = exp(-y^2):

        int rho log(rho/Gamma) - (1/(2 ||Gamma||_1)) ||rho - Gamma||_1^2,

    which is >= 0 for rho of the same mass as Gamma (= sqrt(pi) in d = 1).
    The input must be mass-matched to within mass_tol.
    """
    density = np.asarray(density, dtype=float)
    dx = grid.dx
    y = grid.points
    gamma_mass = np.sqrt(np.pi)
    m = float(np.sum(density) * dx)
    if abs(m - gamma_mass) > mass_tol:
        raise ValueError(f"density mass {m:.6g} is not sqrt(pi) within {mass_tol}")
    gamma = np.exp(-y * y)
    # rho log(rho/Gamma) = rho log rho + rho y^2, with 0 log 0 = 0
    e_ent = float(np.sum(_rho_log_rho(density) + density * y * y) * dx)
    l1 = float(np.sum(np.abs(density - gamma)) * dx)
    return e_ent - l1 * l1 / (2.0 * gamma_mass)


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of v = C t^p on log-log axes."""

    coeff: float
    exponent: float
    rms_log_residual: float


def fit_power_law(times, values, window: tuple[float, float]) -> PowerLawFit:
    """Fit log v = log C + p log t over the samples with t in [t_lo, t_hi].

    Requires at least 10 samples in the window and strictly positive values
    there.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    t_lo, t_hi = window
    sel = (times >= t_lo) & (times <= t_hi)
    if np.count_nonzero(sel) < 10:
        raise ValueError(f"need >= 10 samples in window [{t_lo}, {t_hi}], got {np.count_nonzero(sel)}")
    t, v = times[sel], values[sel]
    if np.any(t <= 0) or np.any(v <= 0):
        raise ValueError("power-law fit needs positive times and values in the window")
    lt, lv = np.log(t), np.log(v)
    design = np.column_stack([lt, np.ones_like(lt)])
    (slope, icpt), *_ = np.linalg.lstsq(design, lv, rcond=None)
    resid = lv - (slope * lt + icpt)
    return PowerLawFit(float(np.exp(icpt)), float(slope),
                       float(np.sqrt(np.mean(resid**2))))
