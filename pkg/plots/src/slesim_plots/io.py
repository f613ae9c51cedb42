"""Readers for the slesim run-directory CSV schemas.

This package talks to the simulator only through its emitted files:
diagnostics.csv (header t,mass,e_reg,e_kin_total,e_pot_log,mean_x,mean_x2,
linf,l1_profile_dist), snapshots/t_<time>.csv (header x,re,im,density) and
summary.csv (key,value).
"""

from __future__ import annotations

import os

import numpy as np

DIAGNOSTIC_COLUMNS = ("t", "mass", "e_reg", "e_kin_total", "e_pot_log",
                      "mean_x", "mean_x2", "linf", "l1_profile_dist")
SNAPSHOT_COLUMNS = ("x", "re", "im", "density")


class RunDataError(ValueError):
    """Missing or malformed run-directory data."""


def load_diagnostics(run_dir: str) -> dict[str, np.ndarray]:
    path = os.path.join(run_dir, "diagnostics.csv")
    if not os.path.exists(path):
        raise RunDataError(f"no diagnostics.csv in {run_dir}")
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        missing = [c for c in DIAGNOSTIC_COLUMNS if c not in header]
        if missing:
            raise RunDataError(f"{path}: missing columns {missing}")
        try:
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise RunDataError(f"{path}: malformed numeric data: {exc}") from exc
    if data.shape[1] != len(header):
        raise RunDataError(f"{path}: rows have {data.shape[1]} fields, header has {len(header)}")
    return {name: data[:, i] for i, name in enumerate(header)}


def snapshot_files(run_dir: str) -> list[tuple[float, str]]:
    """(time, path) pairs sorted by time, parsed from t_<time>.csv names."""
    snap_dir = os.path.join(run_dir, "snapshots")
    if not os.path.isdir(snap_dir):
        raise RunDataError(f"no snapshots directory in {run_dir}")
    out = []
    for name in os.listdir(snap_dir):
        if not (name.startswith("t_") and name.endswith(".csv")):
            continue
        try:
            t = float(name[2:-4])
        except ValueError:
            raise RunDataError(f"snapshot file name {name!r} has no parsable time") from None
        out.append((t, os.path.join(snap_dir, name)))
    if not out:
        raise RunDataError(f"no snapshot files in {snap_dir}")
    out.sort(key=lambda pair: pair[0])
    return out


def load_snapshot(path: str) -> dict[str, np.ndarray]:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != SNAPSHOT_COLUMNS:
            raise RunDataError(f"{path}: expected header {','.join(SNAPSHOT_COLUMNS)}, "
                               f"got {','.join(header)}")
        try:
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise RunDataError(f"{path}: malformed numeric data: {exc}") from exc
    if data.shape[1] != 4:
        raise RunDataError(f"{path}: expected 4 columns, got {data.shape[1]}")
    return {name: data[:, i] for i, name in enumerate(SNAPSHOT_COLUMNS)}


def load_summary(run_dir: str) -> dict[str, float]:
    path = os.path.join(run_dir, "summary.csv")
    out: dict[str, float] = {}
    if not os.path.exists(path):
        return out
    with open(path, "r", encoding="utf-8") as fh:
        fh.readline()
        for line in fh:
            key, _, val = line.rstrip("\n").partition(",")
            if key:
                out[key] = float(val)
    return out
