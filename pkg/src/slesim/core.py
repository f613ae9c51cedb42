"""Domain types shared across the package: grids, wave fields, physical
parameters, Gaussian-ansatz state and diagnostics records.

Conventions pinned here and relied on everywhere else:
  * grids are uniform and periodic on [a, b), the right endpoint excluded,
    so x_k = a + k*dx with dx = (b - a)/n and k = 0..n-1;
  * quadratures are plain rectangle sums  sum f(x_k) * dx  (spectrally
    accurate for smooth periodic or decaying integrands);
  * densities rho = |psi|^2 are always computed on demand, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NonFiniteFieldError(RuntimeError):
    """A time step produced NaN/Inf values; carries the failing step/time."""

    def __init__(self, step: int, time: float):
        super().__init__(f"non-finite field values at step {step} (t = {time:.6g})")
        self.step = step
        self.time = time


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid on [a, b) with n points."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if self.b <= self.a:
            raise ValueError(f"grid needs b > a, got [{self.a}, {self.b}]")
        if self.n < 4 or self.n % 2 != 0:
            raise ValueError(f"grid size must be even and >= 4, got n = {self.n}")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def points(self) -> np.ndarray:
        return self.a + self.dx * np.arange(self.n)


def grid_new(a: float, b: float, n: int) -> Grid1D:
    """Build a periodic grid on [a, b) with n (even, >= 4) points."""
    return Grid1D(float(a), float(b), int(n))


@dataclass
class WaveField:
    """Complex wavefunction samples on a Grid1D. values is owned by whoever
    steps the field; everything else treats it as read-only."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.n,):
            raise ValueError(
                f"field length {self.values.shape} does not match grid n = {self.grid.n}"
            )

    def copy(self) -> "WaveField":
        return WaveField(self.grid, self.values.copy())

    def density(self) -> np.ndarray:
        v = self.values
        return v.real**2 + v.imag**2


@dataclass(frozen=True)
class PhysParams:
    """Equation parameters: lam is the signed log-nonlinearity coefficient,
    mu >= 0 the friction, eps >= 0 the vacuum saturation of the logarithm."""

    lam: float
    mu: float
    eps: float = 0.0

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError(f"friction mu must be >= 0, got {self.mu}")
        if self.eps < 0:
            raise ValueError(f"saturation eps must be >= 0, got {self.eps}")


@dataclass
class GaussianState:
    """Per-dimension Gaussian-ansatz parameters.

    The field is psi = b(t) * prod_j exp(-a_j(t) x_j^2 / 2) with
    a_j = alpha0_j / r_j^2 - i rdot_j / r_j, |b| = b0_mod / prod_j sqrt(r_j).
    The normalization r_j(0) = 1 makes alpha0_j the initial Re a_j and
    rdot_j(0) = -Im a_j(0).
    """

    alpha0: np.ndarray
    r: np.ndarray
    rdot: np.ndarray
    b0_mod: float = 1.0
    phase: np.ndarray | None = None
    time: float = 0.0

    def __post_init__(self):
        self.alpha0 = np.atleast_1d(np.asarray(self.alpha0, dtype=float))
        self.r = np.atleast_1d(np.asarray(self.r, dtype=float))
        self.rdot = np.atleast_1d(np.asarray(self.rdot, dtype=float))
        if not (self.alpha0.shape == self.r.shape == self.rdot.shape):
            raise ValueError("alpha0, r, rdot must have matching shapes")
        if np.any(self.alpha0 <= 0):
            raise ValueError("alpha0 components must be > 0")
        if np.any(self.r <= 0):
            raise ValueError("r components must be > 0")
        if self.b0_mod <= 0:
            raise ValueError("b0_mod must be > 0")
        if self.phase is not None:
            self.phase = np.atleast_1d(np.asarray(self.phase, dtype=float))

    @property
    def dim(self) -> int:
        return self.alpha0.size

    @property
    def modulus_coeff(self) -> float:
        """|b(t)| = |b(0)| / prod_j sqrt(r_j)."""
        return self.b0_mod / float(np.prod(np.sqrt(self.r)))


def gaussian_state(alpha0, rdot0=0.0, b0_mod=1.0) -> GaussianState:
    """Fresh t = 0 state with the r(0) = 1 normalization."""
    a0 = np.atleast_1d(np.asarray(alpha0, dtype=float))
    rd = np.broadcast_to(np.asarray(rdot0, dtype=float), a0.shape).copy()
    return GaussianState(alpha0=a0, r=np.ones_like(a0), rdot=rd, b0_mod=float(b0_mod))


@dataclass(frozen=True)
class DiagnosticsRow:
    """One time-stamped record of the standard observables.

    mean_x and mean_x2 are mass-normalized (so mean_x2 - mean_x^2 is the
    variance); e_reg is the regularized energy, e_kin_total = 0.5 int |grad
    psi|^2 and e_pot_log = lam int rho log rho.
    """

    t: float
    mass: float
    e_reg: float
    e_kin_total: float
    e_pot_log: float
    mean_x: float
    mean_x2: float
    linf: float
    l1_profile_dist: float = float("nan")
    # exactly dissipated energy; in-memory companion, not part of the pinned
    # CSV schema (run directories carry it in energy_audit.csv)
    e_lyap: float = float("nan")

    CSV_HEADER = "t,mass,e_reg,e_kin_total,e_pot_log,mean_x,mean_x2,linf,l1_profile_dist"

    def csv_line(self) -> str:
        vals = (self.t, self.mass, self.e_reg, self.e_kin_total, self.e_pot_log,
                self.mean_x, self.mean_x2, self.linf, self.l1_profile_dist)
        return ",".join("%.17g" % v for v in vals)


def gaussian_field(grid: Grid1D, b0: complex, a0: complex, center: float = 0.0) -> WaveField:
    """Sample b0 * exp(-a0 (x - center)^2 / 2) on the grid; needs Re a0 > 0."""
    a0 = complex(a0)
    if a0.real <= 0:
        raise ValueError(f"gaussian width parameter needs Re(a0) > 0, got {a0}")
    x = grid.points - center
    return WaveField(grid, complex(b0) * np.exp(-0.5 * a0 * x * x))
