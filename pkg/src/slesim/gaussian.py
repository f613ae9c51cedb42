"""Gaussian-ansatz dynamics: the width equation

    rddot = alpha0^2/r^3 + 2 lam alpha0 / r - mu rdot,   r(0) = 1,

its first integral, amplitude/phase reconstruction, the moving-center
system, the standing Gausson profile with its elliptic residual, the
tau-rescaling equation of the defocusing regime, and the closed-form
asymptotic constants.

This module is the independent oracle for the PDE solver: everything here
is fixed-step RK4 on scalar ODEs plus closed forms, sharing no code with
the spectral stepper.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GaussianState, Grid1D, WaveField
from .spectral import laplacian_values

_R_FLOOR = 1e-12


def gaussian_rhs(r: float, rdot: float, alpha0: float, lam: float, mu: float) -> float:
    """Acceleration of the Gaussian width: alpha0^2/r^3 + 2 lam alpha0/r - mu rdot."""
    if r <= 0:
        raise ValueError(f"width r must be > 0, got {r}")
    return alpha0 * alpha0 / (r * r * r) + 2.0 * lam * alpha0 / r - mu * rdot


def envelope_bound(alpha0: float, rdot0: float, lam: float) -> float:
    """exp(-(rdot0^2 + alpha0^2)/(4 lam alpha0)): an upper bound for r when
    lam < 0 (focusing) and a lower bound when lam > 0 (defocusing)."""
    return float(np.exp(-(rdot0 * rdot0 + alpha0 * alpha0) / (4.0 * lam * alpha0)))


@dataclass
class GaussianTrajectory:
    """Recorded (r, rdot) history per component, plus optional phase."""

    times: np.ndarray          # (m,)
    r: np.ndarray              # (d, m)
    rdot: np.ndarray           # (d, m)
    alpha0: np.ndarray         # (d,)
    b0_mod: float
    phase: np.ndarray | None = None  # (d, m)

    @property
    def dim(self) -> int:
        return self.r.shape[0]

    @property
    def modulus_coeff(self) -> np.ndarray:
        """|b(t)| = |b(0)| / prod_j sqrt(r_j(t))."""
        return self.b0_mod / np.sqrt(np.prod(self.r, axis=0))

    def state_at(self, i: int) -> GaussianState:
        ph = None if self.phase is None else self.phase[:, i]
        return GaussianState(alpha0=self.alpha0, r=self.r[:, i], rdot=self.rdot[:, i],
                             b0_mod=self.b0_mod, phase=ph, time=float(self.times[i]))


def _integrate_width(alpha0: float, lam: float, mu: float, r0: float, rd0: float,
                     b0_mod: float, phi0: float, dt: float, n_steps: int,
                     stride: int, track_phase: bool):
    """Inlined scalar RK4 on (r, rdot[, phi]); records every `stride` steps."""
    n_rec = n_steps // stride + 1
    out_r = np.empty(n_rec)
    out_rd = np.empty(n_rec)
    out_phi = np.empty(n_rec) if track_phase else None
    a2 = alpha0 * alpha0
    la2 = 2.0 * lam * alpha0
    lb2 = lam * np.log(b0_mod * b0_mod)
    r, rd, phi = r0, rd0, phi0
    out_r[0], out_rd[0] = r, rd
    if track_phase:
        out_phi[0] = phi
    half = 0.5 * dt
    sixth = dt / 6.0
    idx = 1
    for j in range(1, n_steps + 1):
        k1r = rd
        k1v = a2 / (r * r * r) + la2 / r - mu * rd
        r2 = r + half * k1r
        v2 = rd + half * k1v
        k2r = v2
        k2v = a2 / (r2 * r2 * r2) + la2 / r2 - mu * v2
        r3 = r + half * k2r
        v3 = rd + half * k2v
        k3r = v3
        k3v = a2 / (r3 * r3 * r3) + la2 / r3 - mu * v3
        r4 = r + dt * k3r
        v4 = rd + dt * k3v
        k4r = v4
        k4v = a2 / (r4 * r4 * r4) + la2 / r4 - mu * v4
        if track_phase:
            # phi' = -mu phi - alpha0/(2 r^2) - lam log|b0|^2 + lam log r
            k1p = -mu * phi - 0.5 * alpha0 / (r * r) - lb2 + lam * np.log(r)
            p2 = phi + half * k1p
            k2p = -mu * p2 - 0.5 * alpha0 / (r2 * r2) - lb2 + lam * np.log(r2)
            p3 = phi + half * k2p
            k3p = -mu * p3 - 0.5 * alpha0 / (r3 * r3) - lb2 + lam * np.log(r3)
            p4 = phi + dt * k3p
            k4p = -mu * p4 - 0.5 * alpha0 / (r4 * r4) - lb2 + lam * np.log(r4)
            phi = phi + sixth * (k1p + 2.0 * (k2p + k3p) + k4p)
        r = r + sixth * (k1r + 2.0 * (k2r + k3r) + k4r)
        rd = rd + sixth * (k1v + 2.0 * (k2v + k3v) + k4v)
        if r < _R_FLOOR:
            raise RuntimeError(
                f"gaussian width collapsed below {_R_FLOOR} at t = {j * dt:.6g}; "
                "reduce dt (positivity holds for the exact flow)")
        if j % stride == 0:
            out_r[idx] = r
            out_rd[idx] = rd
            if track_phase:
                out_phi[idx] = phi
            idx += 1
    return out_r, out_rd, out_phi


def integrate_gaussian(initial: GaussianState, lam: float, mu: float,
                       t_end: float, dt: float, record_stride: int = 1,
                       track_phase: bool = False) -> GaussianTrajectory:
    """Classical RK4 on the width equation, per component (the components are
    decoupled). Records every record_stride-th step, t = 0 included.

    track_phase augments each component with the uniform phase ODE
    phi' + mu phi = -alpha0/(2 r^2) - lam log|b0|^2 + lam log r
    (the real part of the complex phase equation; Im A = -log r).
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    if record_stride < 1:
        raise ValueError("record_stride must be >= 1")
    n_steps = int(round(t_end / dt))
    if n_steps < 1:
        raise ValueError(f"t_end = {t_end} shorter than one step dt = {dt}")
    d = initial.dim
    n_rec = n_steps // record_stride + 1
    r_out = np.empty((d, n_rec))
    rd_out = np.empty((d, n_rec))
    phi_out = np.empty((d, n_rec)) if track_phase else None
    phi0 = initial.phase if initial.phase is not None else np.zeros(d)
    for j in range(d):
        rj, rdj, pj = _integrate_width(
            float(initial.alpha0[j]), lam, mu, float(initial.r[j]),
            float(initial.rdot[j]), initial.b0_mod, float(phi0[j]),
            dt, n_steps, record_stride, track_phase)
        r_out[j], rd_out[j] = rj, rdj
        if track_phase:
            phi_out[j] = pj
    times = dt * record_stride * np.arange(n_rec)
    return GaussianTrajectory(times=times, r=r_out, rdot=rd_out,
                              alpha0=initial.alpha0.copy(), b0_mod=initial.b0_mod,
                              phase=phi_out)


def first_integral_residual(traj: GaussianTrajectory, alpha0, lam: float, mu: float) -> float:
    """Max over recorded times (and components) of the defect in

        rdot^2 = rdot(0)^2 + alpha0^2 (1 - 1/r^2) + 4 lam alpha0 log r
                 - 2 mu int_0^t rdot^2 ds,

    with the dissipation integral by trapezoid on the recorded grid."""
    alpha0 = np.atleast_1d(np.asarray(alpha0, dtype=float))
    t = traj.times
    worst = 0.0
    for j in range(traj.dim):
        a0 = alpha0[j] if alpha0.size > 1 else alpha0[0]
        r = traj.r[j]
        rd = traj.rdot[j]
        f = rd * rd
        diss = np.concatenate([[0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(t))])
        rhs = f[0] + a0 * a0 * (1.0 - 1.0 / (r * r)) + 4.0 * lam * a0 * np.log(r) - 2.0 * mu * diss
        worst = max(worst, float(np.max(np.abs(f - rhs))))
    return worst


def gaussian_to_field(state: GaussianState, grid: Grid1D) -> WaveField:
    """Sample the ansatz on the grid (d = 1):
    psi(x) = (b0/sqrt(r)) exp(i phi - alpha0 x^2/(2 r^2) + i (rdot/r) x^2/2).
    Without a tracked phase, phi = 0 and only the modulus is contract-bearing."""
    if state.dim != 1:
        raise ValueError(f"grid sampling needs a 1-d state, got d = {state.dim}")
    a0 = state.alpha0[0]
    r = state.r[0]
    rd = state.rdot[0]
    phi = 0.0 if state.phase is None else float(state.phase[0])
    x2 = grid.points**2
    b = state.modulus_coeff
    vals = b * np.exp(1j * phi - a0 * x2 / (2.0 * r * r) + 0.5j * (rd / r) * x2)
    return WaveField(grid, vals)


def gausson_profile(omega: float, lam: float, d: int = 1, norm_mass: float | None = None):
    """Standing Gausson profile for lam < 0, as a callable of position.

    With norm_mass M: the mass-matched stationary *density*
        rho(x) = M (-2 lam / pi)^{d/2} exp(2 lam |x|^2),
    the squared mass-M standing amplitude (int rho = M).

    Without norm_mass: the *amplitude* K exp(lam |x|^2) solving
    -(1/2) lap f + omega f + lam f log f^2 = 0, with K = exp(d/2 - omega/(2 lam))
    fixed by substitution (the elliptic residual is the arbiter).

    For d > 1 the argument is interpreted as the radial coordinate |x|.
    """
    if lam >= 0:
        raise ValueError(f"the Gausson exists for lam < 0 only, got {lam}")
    if norm_mass is not None:
        if norm_mass <= 0:
            raise ValueError("norm_mass must be > 0")
        c = norm_mass * (-2.0 * lam / np.pi) ** (d / 2.0)

        def density(x):
            x = np.asarray(x, dtype=float)
            return c * np.exp(2.0 * lam * x * x)

        return density
    K = float(np.exp(d / 2.0 - omega / (2.0 * lam)))

    def amplitude(x):
        x = np.asarray(x, dtype=float)
        return K * np.exp(lam * x * x)

    return amplitude


def elliptic_residual(grid: Grid1D, f: np.ndarray, omega: float, lam: float,
                      support_floor: float = 1e-10) -> float:
    """Max of |-(1/2) lap f + omega f + 2 lam f log f| over grid points with
    f > support_floor, the Laplacian computed spectrally. Zero (up to grid
    error) exactly when f is a standing profile for this omega."""
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.n,):
        raise ValueError("profile must be sampled on the given grid")
    lap = laplacian_values(grid, f).real
    mask = f > support_floor
    logf2 = np.zeros_like(f)
    logf2[mask] = 2.0 * np.log(f[mask])
    res = -0.5 * lap + omega * f + lam * f * logf2
    return float(np.max(np.abs(res[mask])))


def stationary_phase(omega: float, mu: float, t) -> float:
    """Uniform phase omega/mu + exp(-mu t) of the damped standing solution."""
    if mu <= 0:
        raise ValueError(f"mu must be > 0, got {mu}")
    return omega / mu + np.exp(-mu * np.asarray(t, dtype=float))


@dataclass
class ScalingSolution:
    """Self-similar dilation tau(t) with tau'' = 2 lam/tau - mu tau',
    tau(0) = 1, tau'(0) = 0, and the slow time s = (mu/lam) int 1/tau^2."""

    times: np.ndarray
    tau: np.ndarray
    taudot: np.ndarray
    s: np.ndarray


def tau_solve(lam: float, mu: float, t_end: float, dt: float,
              record_stride: int = 1) -> ScalingSolution:
    """RK4 on the dilation equation; s accumulated by trapezoid on the full
    step grid and recorded every record_stride steps."""
    if lam <= 0 or mu <= 0:
        raise ValueError("tau scaling needs lam > 0 and mu > 0")
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    n_steps = int(round(t_end / dt))
    if n_steps < 1:
        raise ValueError(f"t_end = {t_end} shorter than one step dt = {dt}")
    n_rec = n_steps // record_stride + 1
    out_t = np.empty(n_rec)
    out_td = np.empty(n_rec)
    out_s = np.empty(n_rec)
    la2 = 2.0 * lam
    ml = mu / lam
    tau, td, s = 1.0, 0.0, 0.0
    g_prev = ml / (tau * tau)
    out_t[0], out_td[0], out_s[0] = tau, td, s
    half = 0.5 * dt
    sixth = dt / 6.0
    idx = 1
    for j in range(1, n_steps + 1):
        k1t = td
        k1v = la2 / tau - mu * td
        t2 = tau + half * k1t
        v2 = td + half * k1v
        k2t = v2
        k2v = la2 / t2 - mu * v2
        t3 = tau + half * k2t
        v3 = td + half * k2v
        k3t = v3
        k3v = la2 / t3 - mu * v3
        t4 = tau + dt * k3t
        v4 = td + dt * k3v
        k4t = v4
        k4v = la2 / t4 - mu * v4
        tau = tau + sixth * (k1t + 2.0 * (k2t + k3t) + k4t)
        td = td + sixth * (k1v + 2.0 * (k2v + k3v) + k4v)
        if tau <= 0:
            raise RuntimeError(f"tau became nonpositive at t = {j * dt:.6g} (reduce dt)")
        g = ml / (tau * tau)
        s += half * (g_prev + g)
        g_prev = g
        if j % record_stride == 0:
            out_t[idx], out_td[idx], out_s[idx] = tau, td, s
            idx += 1
    times = dt * record_stride * np.arange(n_rec)
    return ScalingSolution(times=times, tau=out_t, taudot=out_td, s=out_s)


@dataclass
class MovingCenterTrajectory:
    """History of the moving-center Gaussian density
    rho = b(t) exp(-alpha(t) (x - xbar(t))^2), u = beta(t) x + c(t)."""

    times: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    xbar: np.ndarray
    c: np.ndarray
    amp: np.ndarray  # density amplitude b(t)

    def second_moment(self, density_mass: float) -> np.ndarray:
        """Closed form int x^2 rho = m (1/(2 alpha) + xbar^2) for mass m."""
        return density_mass * (0.5 / self.alpha + self.xbar**2)


def moving_center_integrate(b0: float, alpha0: float, beta0: float, c0: float,
                            xbar0: float, lam: float, mu: float, t_end: float,
                            dt: float, record_stride: int = 1) -> MovingCenterTrajectory:
    """RK4 on the coupled moving-center system

        alpha' = -2 alpha beta
        beta'  = -beta^2 - mu beta + 2 lam alpha + alpha^2
        xbar'  = beta xbar + c
        c'     = -beta c - mu c - (2 lam alpha + alpha^2) xbar
        b'     = b (alpha' xbar^2 + 2 alpha xbar (xbar' - c) - beta).
    """
    if alpha0 <= 0:
        raise ValueError(f"alpha0 must be > 0, got {alpha0}")
    if b0 <= 0:
        raise ValueError(f"b0 must be > 0, got {b0}")
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    n_steps = int(round(t_end / dt))
    if n_steps < 1:
        raise ValueError(f"t_end = {t_end} shorter than one step dt = {dt}")

    def rhs(y):
        al, be, xb, c, bb = y
        dal = -2.0 * al * be
        dbe = -be * be - mu * be + 2.0 * lam * al + al * al
        dxb = be * xb + c
        dc = -be * c - mu * c - (2.0 * lam * al + al * al) * xb
        dbb = bb * (dal * xb * xb + 2.0 * al * xb * (dxb - c) - be)
        return np.array([dal, dbe, dxb, dc, dbb])

    n_rec = n_steps // record_stride + 1
    out = np.empty((5, n_rec))
    y = np.array([alpha0, beta0, xbar0, c0, b0], dtype=float)
    out[:, 0] = y
    idx = 1
    for j in range(1, n_steps + 1):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if y[0] <= 0:
            raise RuntimeError(f"alpha became nonpositive at t = {j * dt:.6g} (reduce dt)")
        if j % record_stride == 0:
            out[:, idx] = y
            idx += 1
    times = dt * record_stride * np.arange(n_rec)
    return MovingCenterTrajectory(times=times, alpha=out[0], beta=out[1],
                                  xbar=out[2], c=out[3], amp=out[4])


@dataclass(frozen=True)
class AsymptoticConstants:
    """Closed-form long-time constants of the Gaussian dynamics."""

    regime: str                      # "focusing" or "defocusing"
    r_limit: float | None = None     # focusing: sqrt(alpha0 / (-2 lam))
    amp_limit: float | None = None   # focusing: lim |b(t)| = b0 (-2 lam/alpha0)^{d/4}
    linf_coeff: float | None = None  # defocusing: |psi|_inf ~ coeff t^{-d/4}
    grad_l2_coeff: float | None = None  # defocusing, d = 1: |grad psi|_2 ~ coeff/sqrt(t)


def asymptotic_constants(alpha0: float, b0_mod: float, lam: float, mu: float,
                         d: int = 1) -> AsymptoticConstants:
    """Limit values of the width dynamics.

    Focusing (lam < 0): r -> sqrt(alpha0/(-2 lam)) and the peak amplitude
    tends to b0 (-2 lam/alpha0)^{d/4}, which equals (-2 lam/pi)^{d/4} times
    the L2 norm of the initial Gaussian.

    Defocusing (lam > 0, mu > 0): |psi(t)|_inf = |b0|/sqrt(r)^d ~
    |b0| (mu/(4 lam alpha0))^{d/4} t^{-d/4}, and for d = 1 the gradient norm
    decays like coeff/sqrt(t) with
    coeff = |b0| sqrt( sqrt(pi) (mu/(4 lam) + lam/mu) / (2 sqrt(alpha0)) ).
    """
    if alpha0 <= 0 or b0_mod <= 0:
        raise ValueError("alpha0 and b0_mod must be > 0")
    if lam < 0:
        r_star = float(np.sqrt(alpha0 / (-2.0 * lam)))
        amp = b0_mod * (-2.0 * lam / alpha0) ** (d / 4.0)
        return AsymptoticConstants("focusing", r_limit=r_star, amp_limit=float(amp))
    if lam > 0:
        if mu <= 0:
            raise ValueError("defocusing constants need mu > 0")
        linf = b0_mod * (mu / (4.0 * lam * alpha0)) ** (d / 4.0)
        grad = None
        if d == 1:
            grad = b0_mod * float(np.sqrt(
                np.sqrt(np.pi) * (mu / (4.0 * lam) + lam / mu) / (2.0 * np.sqrt(alpha0))))
        return AsymptoticConstants("defocusing", linf_coeff=float(linf), grad_l2_coeff=grad)
    raise ValueError("lam = 0 has no focusing/defocusing limit constants")
