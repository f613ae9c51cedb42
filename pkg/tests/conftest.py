"""Session-scoped fixtures for the expensive shipped runs.

The two million-step spectral runs (the focusing two-bump experiment and the
defocusing Gaussian run) and the long oracle trajectories are produced once
per session and shared by every acceptance criterion.
"""

import time
from dataclasses import replace

import numpy as np
import pytest

from slesim import (
    gausson_profile,
    grid_new,
    integrate_gaussian,
    tau_solve,
)
from slesim.cli import preset, run_scenario
from slesim.core import gaussian_state


@pytest.fixture(scope="session")
def runs_root(tmp_path_factory):
    return tmp_path_factory.mktemp("runs")


def _run_preset_dir(cfg, runs_root):
    out = runs_root / cfg.name
    t0 = time.perf_counter()
    status = run_scenario(cfg, str(out))
    elapsed = time.perf_counter() - t0
    assert status == 0, f"scenario {cfg.name} aborted"
    (out / "elapsed_seconds.txt").write_text(f"{elapsed:.3f}\n")
    return out


@pytest.fixture(scope="session")
def fig1_dir(runs_root):
    return _run_preset_dir(preset("fig1"), runs_root)


@pytest.fixture(scope="session")
def fig2_gaussian_dir(runs_root):
    cfg = replace(preset("fig2"), name="fig2_gaussian", initial="gaussian:1,0,1,0,0")
    return _run_preset_dir(cfg, runs_root)


@pytest.fixture(scope="session")
def fig3_dir(runs_root):
    return _run_preset_dir(preset("fig3"), runs_root)


@pytest.fixture(scope="session")
def fig4_dir(runs_root):
    return _run_preset_dir(preset("fig4"), runs_root)


# ---------------------------------------------------------------------------
# oracle trajectories

@pytest.fixture(scope="session")
def focusing_traj():
    t0 = time.perf_counter()
    traj = integrate_gaussian(gaussian_state(1.0), lam=-0.1, mu=1.0,
                              t_end=200.0, dt=1e-3)
    elapsed = time.perf_counter() - t0
    return traj, elapsed


@pytest.fixture(scope="session")
def defocusing_traj():
    # deep defocusing regime: in lam = alpha0 = mu = 1 the fit window
    # [1e3, 1e4] sits well inside the asymptotic regime
    return integrate_gaussian(gaussian_state(1.0), lam=1.0, mu=1.0,
                              t_end=1e4, dt=2e-3)


@pytest.fixture(scope="session")
def tau_checkpoints():
    # tau(t) of the fig-2 scaling at integer times 0..1000
    return tau_solve(lam=0.1, mu=1.0, t_end=1000.0, dt=1e-2, record_stride=100)


@pytest.fixture(scope="session")
def tau_long():
    # lam = mu makes the slow time s grow like log(t)/4
    return tau_solve(lam=1.0, mu=1.0, t_end=1e6, dt=0.1, record_stride=1000)


# ---------------------------------------------------------------------------
# CSV readers

def read_diagnostics(run_dir):
    return np.genfromtxt(run_dir / "diagnostics.csv", delimiter=",", names=True)


def read_snapshot(run_dir, t):
    path = run_dir / "snapshots" / f"t_{t:.6f}.csv"
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    return data[:, 0], data[:, 1] + 1j * data[:, 2], data[:, 3]


def snapshot_times(run_dir):
    names = sorted((run_dir / "snapshots").iterdir())
    return np.array([float(p.name[2:-4]) for p in names])


def read_summary(run_dir):
    out = {}
    for line in (run_dir / "summary.csv").read_text().splitlines()[1:]:
        key, _, val = line.partition(",")
        out[key] = float(val)
    return out


def scenario_grid(cfg_like_dir):
    from slesim.cli import parse_config
    cfg = parse_config(str(cfg_like_dir / "config.txt"))
    return grid_new(cfg.a, cfg.b, cfg.n), cfg


def mass_matched_gausson(lam, m0, x, center=0.0):
    density = gausson_profile(0.0, lam, d=1, norm_mass=m0)
    return density(x - center)
