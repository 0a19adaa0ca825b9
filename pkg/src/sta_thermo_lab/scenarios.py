"""One runner per CLI command: compute rows, write the CSV, optionally draw the figure."""

from __future__ import annotations

import csv
import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import cdengine, config, frontier, models, plotting, propagator, states, thermo
from .config import ConfigError, Scenario
from .quantum import thermal_state

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    csv_path: Path
    rows: list[dict]
    plot_path: Path | None = None


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def write_csv(path: Path, columns, rows: list[dict]) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row[c]) for c in columns])
    return path


def _with_tau(model: models.Model, tau: float) -> models.Model:
    return dataclasses.replace(model, tau=float(tau))


# -- shortcut (closed form vs numerical shortcut along s) ------------------------

def run_shortcut(sc: Scenario):
    frame = cdengine.build_eigenframe(models.schedule(sc.model), sc.grid)
    points = config.option(sc, "points", 201, int)
    stride = max((frame.n_grid - 1) // max(points - 1, 1), 1)
    elements = {"single_qubit": {"H12": (0, 1)}, "two_qubit": {"H14": (0, 3), "H23": (1, 2)}}[sc.model_id]
    rows = []
    for k in range(0, frame.n_grid, stride):
        s = float(frame.grid[k])
        analytic = models.cd_analytic(sc.model, s)
        numeric = cdengine.counterdiabatic_numeric(frame, k)
        for name, (i, j) in elements.items():
            rows.append({"model_id": sc.model_id, "s": s, "element": name,
                         "analytic_abs": abs(analytic[i, j]), "numeric_abs": abs(numeric[i, j])})
    columns = ("model_id", "s", "element", "analytic_abs", "numeric_abs")
    return columns, rows, lambda: plotting.shortcut_figure(rows, sc.model_id)


# -- evolve (fidelity against duration) ------------------------------------------------

def initial_and_target(model: models.Model, initial: str, beta: float):
    """Initial lab state and its transitionless image (diagonal states carry no phase)."""
    if initial == "up":
        if model.dim != 2:
            raise ConfigError("[evolve] initial: 'up' needs the single-qubit model")
        rho0 = np.diag([1.0, 0.0]).astype(complex)
    elif initial == "thermal":
        rho0 = thermal_state(models.hamiltonian(model, 0.0), beta)
    else:
        raise ConfigError(f"[evolve] initial: expected 'up' or 'thermal', got {initial!r}")
    frame = thermo.model_frame(model)
    return rho0, propagator.adiabatic_transport(rho0, frame)


def run_evolve(sc: Scenario):
    taus = config.float_list(sc, "taus", "0.01, 0.1, 0.5, 1, 2, 5, 10, 20, 50")
    if not taus or any(t <= 0 for t in taus):
        raise ConfigError("[evolve] taus: need at least one positive duration")
    mode = config.option(sc, "with_tqd", "both")
    flags = {"both": (True, False), "yes": (True,), "no": (False,)}.get(mode)
    if flags is None:
        raise ConfigError(f"[evolve] with_tqd: expected both/yes/no, got {mode!r}")
    default_initial = "up" if sc.model_id == "single_qubit" else "thermal"
    rho0, target = initial_and_target(sc.model, config.option(sc, "initial", default_initial), sc.beta)
    rows = []
    for flag in flags:
        curve = propagator.fidelity_curve(lambda t: models.schedule(_with_tau(sc.model, t)),
                                          taus, flag, rho0, target, sc.steps)
        rows += propagator.fidelity_rows(curve, flag, sc.model_id)
    return propagator.FIDELITY_COLUMNS, rows, lambda: plotting.fidelity_figure(rows, sc.model_id)


# -- scatter / coherence (sampled initial states) ----------------------------------------

def sample_state(tag: str, model: models.Model, beta: float, seed: int) -> np.ndarray:
    """A level-basis state of family ``tag`` with randomly drawn family parameters."""
    rng = np.random.default_rng(seed)
    dim = model.dim
    two_level = dim == 2
    if tag in ("haar_pure", "random_mixed"):
        return states.family(tag, {"dim": dim}, rng)
    if tag == "diagonal":
        params = {"a": rng.uniform()} if two_level else {"pops": rng.dirichlet(np.ones(dim))}
        return states.family(tag, params)
    if tag == "max_coherent":
        if two_level:
            return states.family(tag, {"a": rng.uniform(), "phase": rng.uniform(0, 2 * np.pi)})
        return states.family(tag, {"pops": rng.dirichlet(np.ones(dim)),
                                   "phases": rng.uniform(0, 2 * np.pi, dim)})
    if tag == "coherent_thermal":
        T = states.final_thermal_populations(model, beta)
        if two_level:
            return states.family(tag, {"c_prime": rng.uniform() * np.sqrt(T[0] * T[1]),
                                       "beta": beta, "model": model})
        return states.family(tag, {"strength": rng.uniform(), "beta": beta, "model": model}, rng)
    if tag in ("red_boundary_1", "red_boundary_2"):
        if two_level:
            raise ConfigError(f"samples: {tag!r} needs the two-qubit model")
        return states.family(tag, {"a": rng.uniform(), "phase": rng.uniform(0, 2 * np.pi)})
    if tag in ("work_max", "entropy_zero"):
        return states.family(tag, {"model": model, "beta": beta})
    raise ConfigError(f"samples: unknown family tag {tag!r}")


def stroke_rows(sc: Scenario, default_samples: str) -> list[dict]:
    if sc.seed is None:
        raise ConfigError("[run] seed: required when sampling states")
    frame = thermo.model_frame(sc.model)
    rows = []
    counter = 0
    for tag, count in config.sample_counts(sc, default_samples):
        for _ in range(count):
            seed = sc.seed + counter
            counter += 1
            outcome = thermo.stroke(sample_state(tag, sc.model, sc.beta, seed), sc.model, sc.beta, frame)
            rows.append(thermo.stroke_row(outcome, sc.model_id, tag, seed))
    return rows


DEFAULT_SCATTER = {
    "single_qubit": "random_mixed:5000, diagonal:200, max_coherent:200, coherent_thermal:100",
    "two_qubit": "random_mixed:2000, haar_pure:2000, diagonal:2000, coherent_thermal:300",
}
DEFAULT_COHERENCE = {
    "single_qubit": "random_mixed:2000, diagonal:200, max_coherent:200, coherent_thermal:200",
    "two_qubit": "max_coherent:2000, red_boundary_1:300, red_boundary_2:300, coherent_thermal:500",
}


def boundary_curves(model: models.Model, beta: float, n_points: int) -> dict:
    return {f: frontier.trace_frontier(model, beta, f, n_points) for f in frontier.FAMILIES}


def run_scatter(sc: Scenario):
    rows = stroke_rows(sc, DEFAULT_SCATTER[sc.model_id])
    n_points = config.option(sc, "boundary_points", 201, int)
    curves = boundary_curves(sc.model, sc.beta, n_points)
    return (thermo.stroke_columns(sc.model.dim), rows,
            lambda: plotting.scatter_figure(rows, curves, sc.model_id))


def run_coherence(sc: Scenario):
    rows = stroke_rows(sc, DEFAULT_COHERENCE[sc.model_id])
    return thermo.stroke_columns(sc.model.dim), rows, lambda: plotting.coherence_figure(rows, sc.model_id)


# -- frontier ---------------------------------------------------------------------------

def run_frontier(sc: Scenario):
    families = [f.strip() for f in config.option(sc, "families", "diagonal, pure").split(",") if f.strip()]
    for f in families:
        if f not in frontier.FAMILIES:
            raise ConfigError(f"[frontier] families: unknown family {f!r}")
    n_points = config.option(sc, "n_points", 201, int)
    if n_points < 2:
        raise ConfigError("[frontier] n_points: must be >= 2")
    curves = {f: frontier.trace_frontier(sc.model, sc.beta, f, n_points) for f in families}
    rows = [frontier.frontier_row(p, sc.model_id, f) for f, pts in curves.items() for p in pts]
    return frontier.frontier_columns(sc.model.dim), rows, lambda: plotting.frontier_figure(curves, sc.model_id)


# -- sweep ------------------------------------------------------------------------------

def sweep_values(sc: Scenario) -> np.ndarray:
    if "values" in sc.options:
        values = np.array(config.float_list(sc, "values", ""))
    else:
        start = config.option(sc, "start", 0.0, float)
        stop = config.option(sc, "stop", 5.0, float)
        count = config.option(sc, "count", 501, int)
        if count < 2 or stop <= start:
            raise ConfigError("[sweep] need start < stop and count >= 2")
        values = np.linspace(start, stop, count)
    if len(values) < 2 or np.any(np.diff(values) <= 0):
        raise ConfigError("[sweep] values: must be strictly ascending")
    return values


def run_sweep(sc: Scenario):
    if sc.model_id != "two_qubit":
        raise ConfigError("[model] model_id: sweep needs the two-qubit model")
    param = config.option(sc, "param", "gamma")
    if param not in frontier.SWEEP_PARAMS:
        raise ConfigError(f"[sweep] param: expected alpha or gamma, got {param!r}")
    points = frontier.sweep_parameter(sc.model, param, sweep_values(sc), sc.beta)
    rows = [frontier.sweep_row(p) for p in points]
    for p in points:
        if p.crossing_at is not None:
            log.info("crossing of final levels at %s = %.9g", param, p.crossing_at)
    return frontier.SWEEP_COLUMNS, rows, lambda: plotting.sweep_figure(points, param)


# -- verify -----------------------------------------------------------------------------

class VerificationFailed(RuntimeError):
    pass


def run_verify(sc: Scenario):
    tolerance = config.option(sc, "tolerance", 1e-6, float)
    refine = config.option(sc, "refine", True, bool)
    grids = [sc.grid, 2 * sc.grid - 1] if refine else [sc.grid]
    rows, previous = [], None
    for n in grids:
        err = cdengine.verify_against_analytic(sc.model, n)
        ratio = err / previous if previous else float("nan")
        rows.append({"model_id": sc.model_id, "n_grid": n, "sup_error": err, "ratio": ratio})
        previous = err
    columns = ("model_id", "n_grid", "sup_error", "ratio")

    def check():
        if rows[0]["sup_error"] > tolerance:
            raise VerificationFailed(f"sup error {rows[0]['sup_error']:.3e} exceeds {tolerance:.1e}")

    return columns, rows, lambda: plotting.verify_figure(rows, sc.model_id), check


RUNNERS: dict[str, Callable] = {
    "shortcut": run_shortcut,
    "evolve": run_evolve,
    "scatter": run_scatter,
    "coherence": run_coherence,
    "frontier": run_frontier,
    "sweep": run_sweep,
    "verify": run_verify,
}


def run(sc: Scenario, out_dir: Path) -> RunResult:
    """Execute a scenario, writing ``<command>_<model_id>.csv`` (and ``.svg``) into ``out_dir``."""
    out = RUNNERS[sc.command](sc)
    columns, rows, figure = out[:3]
    stem = f"{sc.command}_{sc.model_id}"
    csv_path = out_dir / (sc.csv_name or f"{stem}.csv")
    write_csv(csv_path, columns, rows)
    plot_path = None
    if sc.plot:
        plot_path = plotting.save(figure(), out_dir / f"{stem}.svg")
    if len(out) > 3:
        out[3]()
    return RunResult(csv_path, rows, plot_path)
