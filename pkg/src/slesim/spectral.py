"""Discrete Fourier machinery: wavenumbers, transform pair, the exact
kinetic sub-flow and spectral differentiation.

DFT normalization is pinned: forward unnormalized, inverse carries 1/n
(numpy's default), so Parseval reads  sum |v_k|^2 * dx = (dx/n) sum |V_j|^2.
The kinetic multiplier is exp(-i dt k^2 / 2), matching the equation's
(1/2) Laplacian.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Grid1D, WaveField


def wavenumbers(grid: Grid1D) -> np.ndarray:
    """FFT-ordered wavenumbers (2 pi/(b-a)) * [0, 1, .., n/2-1, -n/2, .., -1]."""
    return 2.0 * np.pi * np.fft.fftfreq(grid.n, d=grid.dx)


@dataclass(frozen=True)
class SpectralPlan:
    """Grid with its wavenumber array, shareable across calls."""

    grid: Grid1D
    k: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "k", wavenumbers(self.grid))


def forward_dft(field: WaveField) -> np.ndarray:
    """Unnormalized forward DFT of the field samples."""
    return np.fft.fft(field.values)


def inverse_dft(coeffs: np.ndarray, grid: Grid1D) -> WaveField:
    """Inverse DFT (carries the 1/n) back to a field on the grid."""
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (grid.n,):
        raise ValueError(f"coefficient length {coeffs.shape} does not match grid n = {grid.n}")
    return WaveField(grid, np.fft.ifft(coeffs))


def kinetic_multiplier(grid: Grid1D, dt: float) -> np.ndarray:
    """Fourier multiplier exp(-i dt k^2 / 2) of the free-flight flow."""
    k = wavenumbers(grid)
    return np.exp(-0.5j * dt * k * k)


def _apply_kinetic(values: np.ndarray, mult: np.ndarray) -> np.ndarray:
    return np.fft.ifft(np.fft.fft(values) * mult)


def kinetic_flow(field: WaveField, dt: float) -> WaveField:
    """Exact free-Schrodinger flow over time dt (an l2 isometry)."""
    return WaveField(field.grid, _apply_kinetic(field.values, kinetic_multiplier(field.grid, dt)))


def gradient_values(grid: Grid1D, values: np.ndarray) -> np.ndarray:
    """Spectral derivative d/dx of samples (complex output)."""
    k = wavenumbers(grid)
    return np.fft.ifft(1j * k * np.fft.fft(values))


def spectral_gradient(field: WaveField) -> WaveField:
    """Spectral derivative of the field, as a field on the same grid."""
    return WaveField(field.grid, gradient_values(field.grid, field.values))


def laplacian_values(grid: Grid1D, values: np.ndarray) -> np.ndarray:
    """Spectral second derivative of samples (complex output)."""
    k = wavenumbers(grid)
    return np.fft.ifft(-(k * k) * np.fft.fft(values))
