"""Scenario configuration, the four experiment presets, simulation
orchestration and CSV emission, plus the `slesim` command line
(simulate / oracle / verify).

Output layout of a run directory:

    config.txt        normalized key=value config (re-parseable)
    diagnostics.csv   one DiagnosticsRow per line, pinned header
    snapshots/t_<time>.csv   columns x,re,im,density
    summary.csv       key,value pairs (fitted exponents, drifts, distances)
    error.txt         only for aborted runs (step/time of the blow-up)

All floats are written with 17 significant digits, so a rerun of the same
config on the same platform reproduces the files byte for byte.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import math
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from .core import DiagnosticsRow, NonFiniteFieldError, PhysParams, WaveField, gaussian_field, grid_new
from .diagnostics import fit_power_law, log_sobolev_residual, mass
from .gaussian import gausson_profile, integrate_gaussian, first_integral_residual
from .core import gaussian_state
from .splitting import SplittingConfig, run_simulation

_FMT = "%.17g"

CONFIG_KEYS = ("name", "initial", "lambda", "mu", "eps", "a", "b", "n",
               "dt", "t_max", "snapshot_stride", "diagnostics_stride")

PRESET_NAMES = ("fig1", "fig2", "fig3", "fig4")


class ConfigError(ValueError):
    """Bad scenario config file; message carries the offending line."""


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully pinned, deterministic simulation scenario."""

    name: str
    initial: str          # expr_fig1 | expr_fig4 | gaussian:re,im,re,im,center | gausson:mass
    params: PhysParams
    a: float
    b: float
    n: int
    dt: float
    t_max: float
    snapshot_stride: int
    diagnostics_stride: int

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))


def _default_strides(n_steps: int) -> tuple[int, int]:
    # ~500 snapshots per run regardless of horizon; diagnostics every 100 steps
    return max(1, n_steps // 500), 100


def preset(name: str) -> ScenarioConfig:
    """The four reference experiments on [-100, 100] with dx = 0.2.

    fig1: lam = -0.1, mu = 1, eps = 1e-3, dt = 1e-3, t_max = 1000, two-bump
          real data |sin x| e^{-0.1(x-3)^2} + |cos x| e^{-0.2(x+4)^2};
    fig2: same with lam = +0.1;
    fig3: free case lam = 0, mu = 0, dt = 1e-4, t_max = 10, two fast packets
          e^{-(x-10)^2 + 100ix} + e^{-(x+10)^2 - 100ix};
    fig4: lam = -0.1, mu = 10, otherwise as fig3.
    """
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    a, b, n = -100.0, 100.0, 1000
    if name in ("fig1", "fig2"):
        lam = -0.1 if name == "fig1" else 0.1
        dt, t_max = 1e-3, 1000.0
        params = PhysParams(lam=lam, mu=1.0, eps=1e-3)
        initial = "expr_fig1"
    else:
        dt, t_max = 1e-4, 10.0
        if name == "fig3":
            params = PhysParams(lam=0.0, mu=0.0, eps=1e-3)
        else:
            params = PhysParams(lam=-0.1, mu=10.0, eps=1e-3)
        initial = "expr_fig4"
    n_steps = int(round(t_max / dt))
    snap, diag = _default_strides(n_steps)
    return ScenarioConfig(name=name, initial=initial, params=params, a=a, b=b, n=n,
                          dt=dt, t_max=t_max, snapshot_stride=snap,
                          diagnostics_stride=diag)


def initial_field(config: ScenarioConfig) -> WaveField:
    """Build the initial wavefunction named by config.initial."""
    grid = grid_new(config.a, config.b, config.n)
    x = grid.points
    kind, _, arg = config.initial.partition(":")
    if kind == "expr_fig1":
        vals = (np.abs(np.sin(x)) * np.exp(-0.1 * (x - 3.0) ** 2)
                + np.abs(np.cos(x)) * np.exp(-0.2 * (x + 4.0) ** 2))
        return WaveField(grid, vals.astype(complex))
    if kind == "expr_fig4":
        vals = (np.exp(-((x - 10.0) ** 2) + 100j * x)
                + np.exp(-((x + 10.0) ** 2) - 100j * x))
        return WaveField(grid, vals)
    if kind == "gaussian":
        try:
            b0re, b0im, a0re, a0im, center = (float(p) for p in arg.split(","))
        except ValueError as exc:
            raise ConfigError(
                f"gaussian initial needs 'gaussian:b0re,b0im,a0re,a0im,center', got {config.initial!r}"
            ) from exc
        return gaussian_field(grid, complex(b0re, b0im), complex(a0re, a0im), center)
    if kind == "gausson":
        if config.params.lam >= 0:
            raise ConfigError("gausson initial data needs lam < 0")
        try:
            m = float(arg)
        except ValueError as exc:
            raise ConfigError(f"gausson initial needs 'gausson:mass', got {config.initial!r}") from exc
        density = gausson_profile(0.0, config.params.lam, d=1, norm_mass=m)
        return WaveField(grid, np.sqrt(density(x)).astype(complex))
    raise ConfigError(f"unknown initial condition {config.initial!r}")


def parse_config(path: str) -> ScenarioConfig:
    """Read a flat key=value scenario file.

    Keys: name, initial, lambda, mu, eps, a, b, n, dt, t_max,
    snapshot_stride, diagnostics_stride. Blank lines and '#' comments are
    skipped. `initial=preset:figN` starts from that preset and the remaining
    keys override it; otherwise initial/lambda/mu/eps/a/b/n/dt/t_max are all
    required (strides default as in the presets). Unknown keys, duplicate
    keys and unparsable numbers are errors naming the line.
    """
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    entries: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}")
            if key not in CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key in entries:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            bad = False
            if key in ("lambda", "mu", "eps", "a", "b", "dt", "t_max"):
                try:
                    bad = not math.isfinite(float(value))
                except ValueError:
                    bad = True
            elif key in ("n", "snapshot_stride", "diagnostics_stride"):
                try:
                    int(value)
                except ValueError:
                    bad = True
            if bad:
                raise ConfigError(f"{path}:{lineno}: key {key!r} has unparsable number {value!r}")
            entries[key] = value
    return _config_from_entries(entries, path)


def _config_from_entries(entries: dict[str, str], path: str) -> ScenarioConfig:
    initial = entries.get("initial")
    if initial is not None and initial.startswith("preset:"):
        base = preset(initial.removeprefix("preset:"))
    else:
        required = ("initial", "lambda", "mu", "eps", "a", "b", "n", "dt", "t_max")
        missing = [k for k in required if k not in entries]
        if missing:
            raise ConfigError(f"{path}: missing required keys {missing} (no preset given)")
        base = None
    name = entries.get("name", base.name if base else "run")
    get = entries.get
    if base is not None:
        params = PhysParams(lam=float(get("lambda", base.params.lam)),
                            mu=float(get("mu", base.params.mu)),
                            eps=float(get("eps", base.params.eps)))
        a = float(get("a", base.a))
        b = float(get("b", base.b))
        n = int(get("n", base.n))
        dt = float(get("dt", base.dt))
        t_max = float(get("t_max", base.t_max))
        init = base.initial
    else:
        params = PhysParams(lam=float(entries["lambda"]), mu=float(entries["mu"]),
                            eps=float(entries["eps"]))
        a, b, n = float(entries["a"]), float(entries["b"]), int(entries["n"])
        dt, t_max = float(entries["dt"]), float(entries["t_max"])
        init = initial
    n_steps = int(round(t_max / dt))
    snap_d, diag_d = _default_strides(n_steps)
    if base is not None and "snapshot_stride" not in entries:
        snap_d = base.snapshot_stride
    if base is not None and "diagnostics_stride" not in entries:
        diag_d = base.diagnostics_stride
    snap = int(get("snapshot_stride", snap_d))
    diag = int(get("diagnostics_stride", diag_d))
    cfg = ScenarioConfig(name=name, initial=init, params=params, a=a, b=b, n=n,
                         dt=dt, t_max=t_max, snapshot_stride=snap,
                         diagnostics_stride=diag)
    if (base is not None and "snapshot_stride" not in entries
            and ("dt" in entries or "t_max" in entries)):
        # horizon changed under a preset: recompute the snapshot cadence
        cfg = replace(cfg, snapshot_stride=_default_strides(cfg.n_steps)[0])
    return cfg


def write_config(config: ScenarioConfig, path: str) -> None:
    """Write the normalized (fully explicit) form; parse_config round-trips it."""
    lines = [
        f"name={config.name}",
        f"initial={config.initial}",
        "lambda=" + _FMT % config.params.lam,
        "mu=" + _FMT % config.params.mu,
        "eps=" + _FMT % config.params.eps,
        "a=" + _FMT % config.a,
        "b=" + _FMT % config.b,
        f"n={config.n}",
        "dt=" + _FMT % config.dt,
        "t_max=" + _FMT % config.t_max,
        f"snapshot_stride={config.snapshot_stride}",
        f"diagnostics_stride={config.diagnostics_stride}",
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _snapshot_path(out_dir: str, t: float) -> str:
    return os.path.join(out_dir, "snapshots", f"t_{t:.6f}.csv")


def _write_snapshot(path: str, x: np.ndarray, values: np.ndarray) -> None:
    rho = values.real**2 + values.imag**2
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,re,im,density\n")
        for xi, vr, vi, ri in zip(x, values.real, values.imag, rho):
            fh.write(f"{_FMT % xi},{_FMT % vr},{_FMT % vi},{_FMT % ri}\n")


def run_scenario(config: ScenarioConfig, out_dir: str) -> int:
    """Simulate one scenario into out_dir; returns a process exit status.

    For lam < 0 the diagnostics' l1_profile_dist column tracks the L1
    distance to the mass-matched standing Gausson centered at the initial
    center of mass; for lam >= 0 the column is nan.
    """
    os.makedirs(out_dir, exist_ok=True)
    os.makedirs(os.path.join(out_dir, "snapshots"), exist_ok=True)
    write_config(config, os.path.join(out_dir, "config.txt"))

    field = initial_field(config)
    grid = field.grid
    split = SplittingConfig(params=config.params, dt=config.dt, t_max=config.t_max,
                            snapshot_stride=config.snapshot_stride,
                            diagnostics_stride=config.diagnostics_stride)
    target = None
    if config.params.lam < 0:
        m0 = mass(field)
        rho0 = field.density()
        center0 = float(np.sum(grid.points * rho0) * grid.dx) / m0
        density = gausson_profile(0.0, config.params.lam, d=1, norm_mass=m0)
        target = density(grid.points - center0)

    diag_path = os.path.join(out_dir, "diagnostics.csv")
    try:
        rows, snapshots = run_simulation(field, split, profile_target=target)
    except NonFiniteFieldError as err:
        rows, snapshots = getattr(err, "partial", ([], []))
        _write_diagnostics(diag_path, rows)
        for snap in snapshots:
            _write_snapshot(_snapshot_path(out_dir, snap.t), grid.points, snap.values)
        with open(os.path.join(out_dir, "error.txt"), "w", encoding="utf-8") as fh:
            fh.write(f"aborted: {err}\nstep={err.step}\ntime={_FMT % err.time}\n")
        print(f"[{config.name}] ABORTED: {err}", file=sys.stderr)
        return 1

    _write_diagnostics(diag_path, rows)
    with open(os.path.join(out_dir, "energy_audit.csv"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("t,e_lyap\n")
        for row in rows:
            fh.write(f"{_FMT % row.t},{_FMT % row.e_lyap}\n")
    for snap in snapshots:
        _write_snapshot(_snapshot_path(out_dir, snap.t), grid.points, snap.values)
    _write_summary(os.path.join(out_dir, "summary.csv"), config, rows)
    return 0


def _write_diagnostics(path: str, rows: list[DiagnosticsRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(DiagnosticsRow.CSV_HEADER + "\n")
        for row in rows:
            fh.write(row.csv_line() + "\n")


def _write_summary(path: str, config: ScenarioConfig, rows: list[DiagnosticsRow]) -> None:
    t = np.array([r.t for r in rows])
    msum = np.array([r.mass for r in rows])
    linf = np.array([r.linf for r in rows])
    ereg = np.array([r.e_reg for r in rows])
    dist = np.array([r.l1_profile_dist for r in rows])
    entries: list[tuple[str, float]] = []
    mass_drift = float(np.max(np.abs(msum - msum[0])) / msum[0]) if msum.size else float("nan")
    entries.append(("mass_drift_rel", mass_drift))
    entries.append(("energy_max_increase", float(np.max(np.diff(ereg))) if ereg.size > 1 else float("nan")))
    entries.append(("final_mass", float(msum[-1])))
    entries.append(("final_linf", float(linf[-1])))
    entries.append(("final_l1_profile_dist", float(dist[-1])))
    lo, hi = config.t_max / 5.0, config.t_max
    try:
        fit = fit_power_law(t, linf, (lo, hi))
        entries += [("linf_exponent", fit.exponent), ("linf_coeff", fit.coeff),
                    ("linf_fit_rms_log", fit.rms_log_residual),
                    ("linf_fit_t_lo", lo), ("linf_fit_t_hi", hi)]
    except ValueError:
        entries += [("linf_exponent", float("nan")), ("linf_coeff", float("nan")),
                    ("linf_fit_rms_log", float("nan")),
                    ("linf_fit_t_lo", lo), ("linf_fit_t_hi", hi)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("key,value\n")
        for key, val in entries:
            fh.write(f"{key},{_FMT % val}\n")


# ---------------------------------------------------------------------------
# verify: re-check invariants on an emitted run directory

def _read_csv_columns(path: str) -> dict[str, np.ndarray]:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = [[] for _ in header]
        for line in fh:
            for col, tok in zip(data, line.rstrip("\n").split(",")):
                col.append(float(tok))
    return {name: np.array(col) for name, col in zip(header, data)}


def verify_run(run_dir: str, report=print) -> int:
    """Re-check the conservation/monotonicity/inequality invariants on the
    CSV files of a finished run; returns 0 when all hold."""
    cfg = parse_config(os.path.join(run_dir, "config.txt"))
    diag = _read_csv_columns(os.path.join(run_dir, "diagnostics.csv"))
    failures = 0

    def check(label: str, ok: bool, detail: str = ""):
        nonlocal failures
        line = f"{'PASS' if ok else 'FAIL'}: {label}"
        if detail:
            line += f" ({detail})"
        report(line)
        if not ok:
            failures += 1

    t = diag["t"]
    check("time strictly increasing", bool(np.all(np.diff(t) > 0)))
    m = diag["mass"]
    drift = float(np.max(np.abs(m - m[0])) / m[0])
    check("mass drift <= 1e-9 relative", drift <= 1e-9, f"drift {drift:.3e}")
    if cfg.params.mu > 0:
        audit_path = os.path.join(run_dir, "energy_audit.csv")
        if os.path.exists(audit_path):
            el = _read_csv_columns(audit_path)["e_lyap"]
            slack = 1e-6 * max(abs(el[0]), 1.0)
            worst = float(np.max(np.diff(el))) if el.size > 1 else 0.0
            check("dissipated (Lyapunov) energy non-increasing", worst <= slack,
                  f"worst increase {worst:.3e}, slack {slack:.3e}")
        # the four-term regularized energy is not the exact Lyapunov
        # functional: tolerate its intrinsic O(eps)-scale wiggle
        e = diag["e_reg"]
        slack = 1e-3 * max(abs(e[0]), 1.0)
        worst = float(np.max(np.diff(e))) if e.size > 1 else 0.0
        check("regularized energy non-increasing (loose)", worst <= slack,
              f"worst increase {worst:.3e}, slack {slack:.3e}")
    var = diag["mean_x2"] - diag["mean_x"] ** 2
    check("moment variance nonnegative", bool(np.all(var >= -1e-10)))

    snap_dir = os.path.join(run_dir, "snapshots")
    names = sorted(os.listdir(snap_dir)) if os.path.isdir(snap_dir) else []
    grid = grid_new(cfg.a, cfg.b, cfg.n)
    worst_ls = np.inf
    worst_consistency = 0.0
    for fname in names:
        cols = _read_csv_columns(os.path.join(snap_dir, fname))
        rho = cols["density"]
        worst_consistency = max(worst_consistency, float(
            np.max(np.abs(rho - (cols["re"] ** 2 + cols["im"] ** 2)))))
        for alpha in (0.5, 1.0, 2.0):
            worst_ls = min(worst_ls, log_sobolev_residual(grid, rho, alpha))
    if names:
        check("snapshot density = re^2 + im^2", worst_consistency <= 1e-12,
              f"max defect {worst_consistency:.3e}")
        check("log-Sobolev residual >= -1e-8 (alpha in {0.5,1,2})", worst_ls >= -1e-8,
              f"min residual {worst_ls:.3e}")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# command line

def _run_named(spec: str, out_dir: str) -> int:
    cfg = preset(spec) if spec in PRESET_NAMES else parse_config(spec)
    return run_scenario(cfg, out_dir)


def _cmd_simulate(args) -> int:
    specs = args.config
    if len(specs) == 1:
        cfg = preset(specs[0]) if specs[0] in PRESET_NAMES else parse_config(specs[0])
        return run_scenario(cfg, args.out)
    targets = []
    for spec in specs:
        cfg = preset(spec) if spec in PRESET_NAMES else parse_config(spec)
        targets.append((spec, os.path.join(args.out, cfg.name)))
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            statuses = list(pool.map(_run_named, [s for s, _ in targets],
                                     [d for _, d in targets]))
    else:
        statuses = [_run_named(s, d) for s, d in targets]
    return max(statuses)


def _cmd_oracle(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    state = gaussian_state(alpha0=args.alpha0, rdot0=args.rdot0, b0_mod=args.b0)
    traj = integrate_gaussian(state, args.lam, args.mu, args.t_end, args.dt,
                              record_stride=args.record_stride)
    path = os.path.join(args.out, "oracle.csv")
    bmod = traj.modulus_coeff
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,r,rdot,b_mod\n")
        for i in range(traj.times.size):
            fh.write(",".join(_FMT % v for v in
                              (traj.times[i], traj.r[0, i], traj.rdot[0, i], bmod[i])) + "\n")
    resid = first_integral_residual(traj, state.alpha0, args.lam, args.mu)
    with open(os.path.join(args.out, "oracle_summary.csv"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("key,value\n")
        fh.write("first_integral_residual," + _FMT % resid + "\n")
        fh.write("r_final," + _FMT % traj.r[0, -1] + "\n")
        fh.write("rdot_final," + _FMT % traj.rdot[0, -1] + "\n")
    print(f"oracle: r({args.t_end}) = {traj.r[0, -1]:.8g}, "
          f"first-integral residual {resid:.3e}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="slesim",
        description="Simulator for the logarithmic Schrodinger-Langevin equation")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one or more scenarios")
    sim.add_argument("config", nargs="+",
                     help="preset name (fig1..fig4) or config file path")
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--jobs", type=int, default=1,
                     help="run independent scenarios in parallel")
    sim.set_defaults(func=_cmd_simulate)

    orc = sub.add_parser("oracle", help="integrate the Gaussian width ODE only")
    orc.add_argument("--alpha0", type=float, required=True)
    orc.add_argument("--rdot0", type=float, default=0.0)
    orc.add_argument("--b0", type=float, default=1.0)
    orc.add_argument("--lambda", dest="lam", type=float, required=True)
    orc.add_argument("--mu", type=float, required=True)
    orc.add_argument("--t-end", dest="t_end", type=float, required=True)
    orc.add_argument("--dt", type=float, default=1e-3)
    orc.add_argument("--record-stride", dest="record_stride", type=int, default=1)
    orc.add_argument("--out", required=True)
    orc.set_defaults(func=_cmd_oracle)

    ver = sub.add_parser("verify", help="re-check invariants on a run directory")
    ver.add_argument("run_dir")
    ver.set_defaults(func=lambda args: verify_run(args.run_dir))

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
