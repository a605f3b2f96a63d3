"""Command-line front end: ``mockq <subcommand> [options]``.

Parameters come from built-in defaults, then an optional flat JSON config file
(``--config``), then command-line flags, in increasing precedence. Every run
writes its CSV outputs plus ``manifest.json`` into ``--out``.

Exit codes: 0 success, 1 domain/IO error, 2 usage error. Errors are printed as a
single ``code: message`` line on standard error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from . import __version__
from .errors import MockqError, UsageError
from .io import git_describe, read_csv, sha256_file, write_csv, write_json_atomic


# -- parameter tables ---------------------------------------------------------------

@dataclass(frozen=True)
class Param:
    name: str
    kind: type
    default: Any
    check: Optional[Tuple[Callable[[Any], bool], str]] = None
    choices: Optional[Tuple[str, ...]] = None
    help: str = ""


POS = (lambda v: v > 0, "> 0")
NONNEG = (lambda v: v >= 0, ">= 0")
POW2 = (lambda v: v >= 8 and v & (v - 1) == 0, "a power of two >= 8")


def _p(name, kind, default, check=None, choices=None, help=""):
    return Param(name, kind, default, check, choices, help)


COMMANDS: Dict[str, List[Param]] = {
    "spectrum": [
        _p("variant", str, "harmonic-lv", choices=("harmonic-lv", "canonical", "full-lv")),
        _p("a", float, 1.0, help="LV rate a (HarmonicLV requires a > 0)"),
        _p("d", float, 1.0, help="LV rate d (HarmonicLV requires d > 0)"),
        _p("mass", float, 1.0, POS), _p("omega", float, 1.0, POS),
        _p("hbar", float, 1.0, POS), _p("levels", int, 5, POS),
        _p("n", int, 512, POW2, help="grid points"),
        _p("widths", float, 12.0, POS, help="domain half-width in ground-state widths"),
        _p("half_width", float, 6.0, POS, help="domain half-width for full-lv"),
    ],
    "evolve": [
        _p("a", float, 1.0, POS), _p("d", float, 1.0, POS), _p("hbar", float, 1.0, POS),
        _p("state", int, 0, NONNEG), _p("center", float, 0.0),
        _p("n", int, 256, POW2), _p("widths", float, 12.0, POS),
        _p("dt", float, 5e-4, POS), _p("steps", int, 2000, POS), _p("stride", int, 200, POS),
    ],
    "bohm": [
        _p("states", str, "0,1", help="comma-separated Hermite indices (polynomial convention)"),
        _p("mass", float, 1.0, POS), _p("omega", float, 1.0, POS), _p("hbar", float, 1.0, POS),
        _p("n", int, 128, POW2), _p("half_width", float, 8.0, POS),
        _p("walkers", int, 10000, NONNEG), _p("periods", float, 2.0, POS),
        _p("dt", float, 5e-4, POS), _p("stride", int, 5, POS), _p("checkpoints", int, 8, POS),
    ],
    "lv classical": [
        _p("a", float, 1.0, POS), _p("b", float, 1.0, POS), _p("c", float, 1.0, POS),
        _p("d", float, 1.0, POS), _p("N1", float, 1.2, POS), _p("N2", float, 0.9, POS),
        _p("t_end", float, 50.0, POS), _p("dt", float, 1e-3, POS), _p("stride", int, 100, POS),
    ],
    "lv mock": [
        _p("a", float, 4.0, POS), _p("d", float, 1.0, POS), _p("hbar", float, 1.0, POS),
        _p("Q0", float, 0.1), _p("P0", float, 0.0),
        _p("t_end", float, 10.0, POS), _p("dt", float, 0.01, POS),
        _p("mode", str, "consistent", choices=("consistent", "literal")),
    ],
    "lv vacuum": [
        _p("n_min", int, -5), _p("n_max", int, 5), _p("a", float, 1.0),
        _p("hbar", float, 0.5, POS), _p("phi", float, 0.0),
        _p("samples", int, 100, POS), _p("radius", float, 5.0, POS),
    ],
    "langevin": [
        _p("lam", float, 1.0, POS), _p("k", float, 1.0, NONNEG), _p("kappa", float, 1.0, POS),
        _p("phi0", float, 0.0), _p("dt", float, 0.01, POS), _p("steps", int, 10000, POS),
    ],
    "msr": [
        _p("lam", float, 1.0, POS), _p("k", float, 1.0, NONNEG), _p("kappa", float, 1.0, POS),
        _p("phi0", float, 0.5), _p("dt", float, 0.01, POS), _p("steps", int, 1000, POS),
        _p("scheme", str, "trapezoid", choices=("trapezoid", "ito")),
    ],
    "ergodicity": [
        _p("state", int, 0, NONNEG), _p("target", int, -1, help="score against this state (-1: same)"),
        _p("mass", float, 1.0, POS), _p("omega", float, 1.0, POS), _p("hbar", float, 1.0, POS),
        _p("n", int, 256, POW2), _p("half_width", float, 10.0, POS),
        _p("dt", float, 1e-3, POS), _p("steps", int, 100000, POS),
        _p("burn_in", int, 1000, NONNEG), _p("walkers", int, 32, POS),
    ],
    "hydro residual": [
        _p("hbar", float, 1.0, POS), _p("mass", float, 1.0, POS), _p("omega", float, 1.0, POS),
        _p("displacement", float, 1.5), _p("n", int, 256, POW2), _p("half_width", float, 10.0, POS),
        _p("interval", float, 0.01, POS, help="time between snapshots"),
        _p("snapshots", int, 101, (lambda v: v >= 3, ">= 3")),
        _p("method", str, "spectral", choices=("spectral", "fd")),
    ],
    "hydro scaling": [
        _p("input", str, "", help="CSV with the field in its last column; empty: synthetic"),
        _p("hurst", float, 1 / 3, (lambda v: 0 < v < 1, "in (0, 1)")),
        _p("length", int, 65536, (lambda v: v >= 1024, ">= 1024")),
        _p("dx", float, 1.0, POS), _p("lags", int, 12, (lambda v: v >= 8, ">= 8")),
    ],
    "variety": [
        _p("input", str, "", help="view CSV element_id,v1,...,vk or density CSV x,rho"),
        _p("kind", str, "views", choices=("views", "density")),
        _p("mass", float, 1.0, POS), _p("hbar", float, 1.0, POS),
    ],
}

COMMON = ("seed", "out", "threads", "config")


@dataclass
class RunConfig:
    command: str
    params: Dict[str, Any]
    seed: int
    out: Path
    threads: int
    config_file: Optional[str] = None

    def echo(self) -> Dict[str, Any]:
        return {"command": self.command, "params": self.params, "seed": self.seed, "threads": self.threads}


# -- parsing --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _bool(s: str) -> bool:
    if s.lower() in ("1", "true", "yes"):
        return True
    if s.lower() in ("0", "false", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {s!r}")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", default=None, help="flat JSON object of parameters")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (fallback: $MOCKQ_SEED, then 0)")
    p.add_argument("--out", default=argparse.SUPPRESS, help="output directory (default: .)")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="worker thread cap (default: logical cores)")


def _add_params(p: argparse.ArgumentParser, params: List[Param]):
    for prm in params:
        kind = _bool if prm.kind is bool else prm.kind
        p.add_argument(f"--{prm.name}", dest=prm.name, type=kind, default=argparse.SUPPRESS,
                       choices=prm.choices, help=prm.help or None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mockq", description="Mock-quantum simulation toolkit.")
    parser.add_argument("--version", action="version", version=f"mockq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    groups: Dict[str, Any] = {}
    for name, params in COMMANDS.items():
        if " " in name:
            head, tail = name.split(" ")
            if head not in groups:
                gp = sub.add_parser(head, help=f"{head} subcommands")
                groups[head] = gp.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
            p = groups[head].add_parser(tail)
        else:
            p = sub.add_parser(name)
        _add_common(p)
        _add_params(p, params)
    return parser


def _coerce(prm: Param, value: Any, source: str):
    if prm.kind is bool:
        ok = isinstance(value, bool)
    elif prm.kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif prm.kind is float:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
        value = float(value) if ok else value
    else:
        ok = isinstance(value, str)
    if not ok:
        raise UsageError(f"{prm.name}: expected {prm.kind.__name__}, got {value!r} ({source})")
    return value


def _validate(command: str, params: Dict[str, Any]):
    if command in ("spectrum",) and params["variant"] == "harmonic-lv":
        for key in ("a", "d"):
            if not params[key] > 0:
                raise UsageError(f"{key}: must be > 0 for HarmonicLV (got {params[key]})")
    for prm in COMMANDS[command]:
        v = params[prm.name]
        if prm.choices and v not in prm.choices:
            raise UsageError(f"{prm.name}: must be one of {', '.join(prm.choices)} (got {v!r})")
        if prm.check and not prm.check[0](v):
            raise UsageError(f"{prm.name}: must be {prm.check[1]} (got {v})")


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    command = ns.command if not getattr(ns, "subcommand", None) else f"{ns.command} {ns.subcommand}"
    table = {p.name: p for p in COMMANDS[command]}
    params = {p.name: p.default for p in COMMANDS[command]}
    common: Dict[str, Any] = {}
    if ns.config:
        path = Path(ns.config)
        if not path.is_file():
            from .errors import IONotFoundError
            raise IONotFoundError(ns.config)
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"config: invalid JSON ({exc})")
        if not isinstance(data, dict):
            raise UsageError("config: expected a flat JSON object")
        for key, value in data.items():
            if key in table:
                params[key] = _coerce(table[key], value, "config file")
            elif key in COMMON and key != "config":
                common[key] = value
            else:
                raise UsageError(f"{key}: unknown key for '{command}'")
    for key in table:
        if hasattr(ns, key):
            params[key] = getattr(ns, key)
    for key in ("seed", "out", "threads"):
        if hasattr(ns, key):
            common[key] = getattr(ns, key)
    _validate(command, params)
    seed = common.get("seed", os.environ.get("MOCKQ_SEED", 0))
    try:
        seed = int(seed)
    except (TypeError, ValueError):
        raise UsageError(f"seed: expected an integer, got {seed!r}")
    if not 0 <= seed < 2 ** 63:
        raise UsageError(f"seed: must be in [0, 2^63) (got {seed})")
    threads = common.get("threads", os.cpu_count() or 1)
    if not isinstance(threads, int) or threads < 1:
        raise UsageError(f"threads: must be an integer >= 1 (got {threads!r})")
    return RunConfig(command, params, seed, Path(common.get("out", ".")), threads, ns.config)


# -- runners ----------------------------------------------------------------------------

Outputs = Dict[str, Tuple[List[str], np.ndarray]]


def _run_spectrum(p, seed):
    from .core import Canonical, FullLV, Grid1D, HarmonicLV
    from .spectral import discretize, eigensolve
    if p["variant"] == "harmonic-lv":
        spec = HarmonicLV(p["a"], p["d"])
        grid = Grid1D.centered(p["widths"] * spec.ground_width(p["hbar"]), p["n"])
    elif p["variant"] == "canonical":
        spec = Canonical.harmonic(p["mass"], p["omega"])
        w = math.sqrt(p["hbar"] / (p["mass"] * p["omega"]))
        grid = Grid1D.centered(p["widths"] * w, p["n"])
    else:
        spec = FullLV(p["a"], p["d"])
        grid = Grid1D.centered(p["half_width"], p["n"])
    s = eigensolve(discretize(spec, grid, p["hbar"]), p["levels"])
    return {"spectrum.csv": (["n", "re_E", "im_E", "residual"], s.rows())}, {
        "ground_energy": float(np.real(s.eigenvalues[0]))}


def _run_evolve(p, seed):
    from .bohm import evolve_snapshots
    from .core import Grid1D, HarmonicLV
    from .spectral import hermite_eigenstate
    spec = HarmonicLV(p["a"], p["d"])
    grid = Grid1D.centered(p["widths"] * spec.ground_width(p["hbar"]), p["n"])
    psi = hermite_eigenstate(p["state"], spec.mass, spec.omega, p["hbar"], grid, center=p["center"])
    snaps = evolve_snapshots(psi, spec, p["dt"], p["steps"], p["stride"])
    rows = []
    for i, s in enumerate(snaps):
        t = np.full(grid.n, i * p["stride"] * p["dt"])
        rows.append(np.column_stack([t, grid.x, s.amplitudes.real, s.amplitudes.imag]))
    norms = [s.norm() for s in snaps]
    return {"evolve.csv": (["t", "x", "re_psi", "im_psi"], np.vstack(rows))}, {
        "norm_drift": float(max(norms) - min(norms))}


def _run_bohm(p, seed):
    from .bohm import (evolve_snapshots, ks_distance, propagate_trajectories,
                       quantum_potential_canonical, sample_walkers)
    from .core import Canonical, Grid1D
    from .spectral import hermite_polynomial_superposition
    try:
        idx = [int(s) for s in p["states"].split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"states: expected comma-separated integers (got {p['states']!r})")
    if not idx or min(idx) < 0:
        raise UsageError("states: need at least one non-negative index")
    grid = Grid1D.centered(p["half_width"], p["n"])
    psi = hermite_polynomial_superposition(idx, p["mass"], p["omega"], p["hbar"], grid)
    vq = quantum_potential_canonical(psi, p["mass"])
    outputs = {"vq.csv": (["x", "vq_re", "vq_im", "masked"], vq.rows())}
    results = {"pole_count": vq.pole_count}
    if p["walkers"] > 0:
        spec = Canonical.harmonic(p["mass"], p["omega"])
        T = p["periods"] * 2 * math.pi / p["omega"]
        steps = int(round(T / p["dt"] / p["stride"])) * p["stride"]
        snaps = evolve_snapshots(psi, spec, p["dt"], steps, p["stride"])
        every = max(1, (len(snaps) - 1) // p["checkpoints"])
        ks_rows = []
        ens = sample_walkers(psi, p["walkers"], seed)
        ids = np.arange(p["walkers"], dtype=float)
        traj = [np.column_stack([np.zeros(p["walkers"]), ids, ens.positions])]

        def record(j, x):
            if j % every == 0:
                t = j * p["stride"] * p["dt"]
                ks_rows.append((t, ks_distance(x, snaps[j])))
                traj.append(np.column_stack([np.full(p["walkers"], t), ids, x]))
        out = propagate_trajectories(ens, snaps, p["mass"], p["dt"] * p["stride"], record=record)
        outputs["ks.csv"] = (["t", "ks"], np.array(ks_rows))
        outputs["trajectories.csv"] = (["t", "walker_id", "Q"], np.vstack(traj))
        results.update(max_ks=max(k for _, k in ks_rows), reflections=out.reflections)
    return outputs, results


def _run_lv_classical(p, seed):
    from .lv import LVParams, LVState, lv_integrate
    prm = LVParams(p["a"], p["b"], p["c"], p["d"])
    tr = lv_integrate(prm, LVState(p["N1"], p["N2"]), p["t_end"], p["dt"], p["stride"])
    return {"trajectory.csv": (["t", "N1", "N2", "Q", "P", "H"], tr.rows())}, {
        "energy_drift": tr.energy_drift()}


def _run_lv_mock(p, seed):
    from .lv import mock_quadratic_flow
    fl = mock_quadratic_flow(p["a"], p["d"], p["hbar"], (p["Q0"], p["P0"]), p["t_end"], p["dt"], p["mode"])
    return {"flow.csv": (["t", "Q", "P", "invariant"], fl.rows())}, {
        "kappa": fl.kappa, "frequency_squared": fl.frequency_squared}


def _run_lv_vacuum(p, seed):
    from .lv import FullLVVacuum, complex_disk_samples, full_lv_vq_constants
    if p["n_max"] < p["n_min"]:
        raise UsageError("n_max: must be >= n_min")
    rows = []
    Q = complex_disk_samples(p["samples"], p["radius"], seed)
    for n in range(p["n_min"], p["n_max"] + 1):
        vac = FullLVVacuum(n, p["a"], p["hbar"], p["phi"])
        r = vac.residuals(Q)
        c = full_lv_vq_constants(n, p["a"], -p["a"], p["hbar"])
        E = vac.energy
        rows.append([n, E.real, E.imag, r["functional"], r["differential"], r["consistency"],
                     c.quadratic, c.lv_exact.real, c.lv_exact.imag,
                     c.lv_exact_operator.real, c.lv_exact_operator.imag])
    header = ["n", "re_E", "im_E", "functional", "differential", "consistency", "vq_quadratic",
              "re_vq_lv", "im_vq_lv", "re_vq_lv_operator", "im_vq_lv_operator"]
    return {"vacuum.csv": (header, np.array(rows))}, {}


def _linear_spec(p, seed):
    from .stochastic import LangevinSpec
    kappa = p["kappa"]
    return LangevinSpec(p["lam"], p["k"], lambda x: -kappa * x, seed=seed)


def _run_langevin(p, seed):
    from .stochastic import langevin_integrate
    path = langevin_integrate(_linear_spec(p, seed), p["phi0"], p["dt"], p["steps"])
    return {"path.csv": (["t", "phi"], path.rows())}, {"variance": float(np.var(path.phi))}


def _run_msr(p, seed):
    from .stochastic import DiscretePath, langevin_integrate, msr_parts
    spec = _linear_spec(p, seed)
    path = langevin_integrate(spec, p["phi0"], p["dt"], p["steps"])
    tilde = np.random.default_rng([seed, 1]).standard_normal(len(path.phi))
    path = DiscretePath(path.dt, path.phi, tilde)
    j1, j2 = msr_parts(path, spec, p["scheme"])
    return {"path.csv": (["t", "phi", "phi_tilde"], path.rows()),
            "msr.csv": (["J", "J1", "J2"], np.array([[j1 + j2, j1, j2]]))}, {"J": j1 + j2}


def _run_ergodicity(p, seed):
    from .core import Grid1D
    from .spectral import hermite_eigenstate
    from .stochastic import born_ergodicity
    grid = Grid1D.centered(p["half_width"], p["n"])
    psi = hermite_eigenstate(p["state"], p["mass"], p["omega"], p["hbar"], grid)
    target = None
    if p["target"] >= 0:
        target = hermite_eigenstate(p["target"], p["mass"], p["omega"], p["hbar"], grid)
    r = born_ergodicity(psi, p["mass"], p["dt"], p["steps"], p["burn_in"], p["walkers"], seed,
                        target=target)
    return {"histogram.csv": (["bin_left", "bin_right", "count", "born_density"], r.rows())}, {
        "ks": r.ks, "reflections": r.reflections}


def _run_hydro_residual(p, seed):
    from .bohm import evolve_snapshots, stable_dt
    from .core import Canonical, Grid1D
    from .hydro import HydroFields, continuity_residual, euler_residual
    from .spectral import hermite_eigenstate
    m, w, h = p["mass"], p["omega"], p["hbar"]
    spec = Canonical.harmonic(m, w)
    grid = Grid1D.centered(p["half_width"], p["n"])
    psi = hermite_eigenstate(0, m, w, h, grid, center=p["displacement"])
    stride = max(1, math.ceil(p["interval"] / stable_dt(grid, spec, h)))
    snaps = evolve_snapshots(psi, spec, p["interval"] / stride, stride * (p["snapshots"] - 1), stride)
    fields = [HydroFields.from_wavefunction(s, m, p["method"]) for s in snaps]
    V = lambda x: 0.5 * m * w * w * x ** 2
    e = euler_residual(fields, p["interval"], V)
    c = continuity_residual(fields, p["interval"])
    dx = grid.spacing
    t = np.arange(1, len(fields) - 1) * p["interval"]
    rows = np.column_stack([t, np.sqrt((e.field ** 2).sum(axis=1) * dx), np.sqrt((c.field ** 2).sum(axis=1) * dx)])
    return {"residual.csv": (["t", "euler", "continuity"], rows)}, {
        "euler_norm": e.norm, "euler_relative": e.relative,
        "continuity_norm": c.norm, "continuity_relative": c.relative}


def _run_hydro_scaling(p, seed):
    from .hydro import hurst_field, structure_scaling
    if p["input"]:
        _, data = read_csv(p["input"], display=p["input"])
        f = data[:, -1]
    else:
        f = hurst_field(p["length"], p["hurst"], seed)
    fit = structure_scaling(f, p["dx"], n_lags=p["lags"])
    return {"scaling.csv": (["l", "D2", "fit_value"], fit.rows())}, {
        "exponent": fit.exponent, "stderr": fit.stderr, "prefactor": fit.prefactor,
        "fit_residual": fit.residual, "velocity_reference": fit.velocity_reference,
        "phase_reference": fit.phase_reference}


def _run_variety(p, seed):
    from .core import Grid1D
    from .variety import RelationalSystem, continuum_variety, discrete_variety, variety_fisher_identity
    if not p["input"]:
        raise UsageError("input: a CSV path is required")
    header, data = read_csv(p["input"], display=p["input"])
    if p["kind"] == "views":
        value = discrete_variety(RelationalSystem(data[:, 1:]))
        return {"variety.csv": (["discrete_variety"], np.array([[value]]))}, {"discrete_variety": value}
    x, rho = data[:, 0], data[:, 1]
    n = len(x)
    dx = x[1] - x[0]
    grid = Grid1D(float(x[0]), float(x[0] + n * dx), n)
    cv = continuum_variety(rho, grid)
    rep = variety_fisher_identity(rho, grid, p["mass"], p["hbar"])
    row = [[cv, rep.potential_energy, rep.variety_term, rep.residual, float(rep.applicable)]]
    return {"variety.csv": (["continuum_variety", "potential_energy", "variety_term", "residual",
                             "applicable"], np.array(row))}, {"continuum_variety": cv}


RUNNERS = {
    "spectrum": _run_spectrum, "evolve": _run_evolve, "bohm": _run_bohm,
    "lv classical": _run_lv_classical, "lv mock": _run_lv_mock, "lv vacuum": _run_lv_vacuum,
    "langevin": _run_langevin, "msr": _run_msr, "ergodicity": _run_ergodicity,
    "hydro residual": _run_hydro_residual, "hydro scaling": _run_hydro_scaling,
    "variety": _run_variety,
}


def _limit_threads(n: int):
    try:
        from threadpoolctl import threadpool_limits
        return threadpool_limits(n)
    except ImportError:
        return None


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def dispatch(cfg: RunConfig) -> Dict[str, Any]:
    """Run the configured command; write CSVs and manifest.json into ``cfg.out``."""
    start = time.perf_counter()
    _limit_threads(cfg.threads)
    outputs, results = RUNNERS[cfg.command](cfg.params, cfg.seed)
    cfg.out.mkdir(parents=True, exist_ok=True)
    digests = {}
    for name, (header, rows) in outputs.items():
        path = write_csv(cfg.out / name, header, rows)
        digests[name] = sha256_file(path)
    inputs = {}
    for key in ("input",):
        if cfg.params.get(key):
            inputs[cfg.params[key]] = sha256_file(cfg.params[key])
    if cfg.config_file:
        inputs[cfg.config_file] = sha256_file(cfg.config_file)
    manifest = {
        "config": cfg.echo(),
        "seed": cfg.seed,
        "version": __version__,
        "git_describe": git_describe(),
        "wall_time_s": time.perf_counter() - start,
        "outputs": digests,
        "inputs": inputs,
        "results": {k: _jsonable(v) for k, v in results.items()},
    }
    write_json_atomic(cfg.out / "manifest.json", manifest)
    return manifest


def main(argv: Optional[List[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
        dispatch(cfg)
    except UsageError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 2
    except MockqError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"io_not_found: {exc.filename or exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"domain: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
