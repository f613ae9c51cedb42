"""Figure rendering: the spacetime density heatmap and the four-panel
diagnostics sheet.

Everything is read-only on the run directory and deterministic for fixed
inputs and library versions. Heatmap color is linear in density, normalized
to the run's maximum.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import RunDataError, load_diagnostics, load_snapshot, snapshot_files


def assemble_density_matrix(run_dir: str):
    """Stack snapshot densities into (times, x, density[t, x])."""
    pairs = snapshot_files(run_dir)
    times = np.array([t for t, _ in pairs])
    first = load_snapshot(pairs[0][1])
    x = first["x"]
    dens = np.empty((len(pairs), x.size))
    dens[0] = first["density"]
    for i, (_, path) in enumerate(pairs[1:], start=1):
        snap = load_snapshot(path)
        if snap["x"].size != x.size:
            raise RunDataError(f"{path}: snapshot grid size changed mid-run")
        dens[i] = snap["density"]
    return times, x, dens


def render_heatmap(run_dir: str, out_path: str | None = None) -> str:
    """Time-vs-x heatmap of |psi|^2 assembled from the snapshot files."""
    times, x, dens = assemble_density_matrix(run_dir)
    if out_path is None:
        out_path = os.path.basename(os.path.normpath(run_dir)) + "_heatmap.png"
    fig, ax = plt.subplots(figsize=(7.0, 4.8))
    mesh = ax.pcolormesh(x, times, dens, cmap="viridis", shading="nearest",
                         vmin=0.0, vmax=float(dens.max()) or 1.0, rasterized=True)
    fig.colorbar(mesh, ax=ax, label=r"$|\psi|^2$")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.set_title(os.path.basename(os.path.normpath(run_dir)))
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def linf_fit(diag: dict[str, np.ndarray]):
    """Log-log least-squares slope of |psi|_inf over the window
    [t_max/5, t_max]; None when the window is unusable."""
    t, v = diag["t"], diag["linf"]
    lo = t[-1] / 5.0
    sel = (t >= lo) & (t > 0) & (v > 0)
    if np.count_nonzero(sel) < 10:
        return None
    lt, lv = np.log(t[sel]), np.log(v[sel])
    slope, icpt = np.polyfit(lt, lv, 1)
    return float(slope), float(np.exp(icpt)), float(lo)


def render_diagnostics(run_dir: str, out_path: str | None = None):
    """Four panels: mass (flat, axis tightened to +-1e-6 relative), the
    regularized energy, the center of mass, and log-log |psi|_inf with the
    fitted slope annotated. Returns (path, slope or None)."""
    diag = load_diagnostics(run_dir)
    if out_path is None:
        out_path = os.path.basename(os.path.normpath(run_dir)) + "_diagnostics.png"
    t = diag["t"]
    fig, axes = plt.subplots(2, 2, figsize=(9.6, 6.4))

    ax = axes[0, 0]
    m = diag["mass"]
    ax.plot(t, m, lw=0.8)
    m0 = m[0]
    half = max(1e-6 * abs(m0), 1.05 * float(np.max(np.abs(m - m0))) if m.size > 1 else 0.0)
    ax.set_ylim(m0 - half, m0 + half)
    ax.set_title("mass (axis span max(drift, 1e-6 rel))")
    ax.set_xlabel("t")

    ax = axes[0, 1]
    ax.plot(t, diag["e_reg"], lw=0.8)
    ax.set_title("regularized energy")
    ax.set_xlabel("t")

    ax = axes[1, 0]
    ax.plot(t, diag["mean_x"], lw=0.8)
    ax.set_title("center of mass")
    ax.set_xlabel("t")

    ax = axes[1, 1]
    slope = None
    fit = linf_fit(diag)
    pos = (t > 0) & (diag["linf"] > 0)
    if np.count_nonzero(pos):
        ax.loglog(t[pos], diag["linf"][pos], lw=0.8, label=r"$\|\psi\|_\infty$")
    if fit is not None:
        slope, coeff, lo = fit
        tt = np.geomspace(lo, t[-1], 50)
        ax.loglog(tt, coeff * tt**slope, "--", lw=1.0,
                  label=f"fit slope {slope:.3f}")
        ax.legend(loc="lower left", fontsize=8)
        ax.set_title(f"sup norm, fitted slope {slope:.3f}")
    else:
        ax.set_title("sup norm (no usable fit window)")
    ax.set_xlabel("t")

    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path, slope
