"""Work / entropy-production frontiers and anisotropy sweeps.

Under an ideal shortcut the outcome of an initial state depends on its level
populations ``d`` and its entropy only:

    work  = sum_i d_i shift_i
    S_irr = -S(rho) - sum_i d_i ln p_i

so at fixed work ``C`` diagonal states minimise ``S_irr`` (it reduces to
``KL(d || p)``) and pure states maximise it (a linear form).  Both extremal
problems live on the polytope ``{d in simplex : d . shift = C}``.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.special import logsumexp

from . import models
from .thermo import DEFAULT_BETA, level_data

log = logging.getLogger(__name__)

FAMILIES = ("diagonal", "pure")
FEASIBILITY_TOL = 1e-12
LAMBDA_TOL = 1e-12
MAX_BISECTIONS = 200


class InfeasibleTarget(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


class Extremum(NamedTuple):
    value: float
    populations: np.ndarray


@dataclass(frozen=True)
class FrontierPoint:
    work_target: float
    s_min: float
    s_max: float
    d_min: np.ndarray
    d_max: np.ndarray


def _prepare(C, shifts, p):
    shifts = np.asarray(shifts, dtype=float)
    p = np.asarray(p, dtype=float)
    if shifts.shape != p.shape:
        raise ValueError("shifts and populations differ in length")
    if np.any(p <= 0):
        raise ValueError("thermal populations must be strictly positive")
    C = np.atleast_1d(np.asarray(C, dtype=float))
    lo, hi = shifts.min(), shifts.max()
    tol = FEASIBILITY_TOL * max(1.0, abs(lo), abs(hi))
    if np.any(C < lo - tol) or np.any(C > hi + tol):
        bad = C[(C < lo - tol) | (C > hi + tol)][0]
        raise InfeasibleTarget(f"work target {bad!r} outside [{lo!r}, {hi!r}]")
    return np.clip(C, lo, hi), shifts, p, tol


def _family(family: str) -> str:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return family


# -- exponential tilting --------------------------------------------------------

def tilted(lam, shifts, p) -> np.ndarray:
    """``d_i ∝ p_i exp(lam shift_i)``; ``lam`` may be an array (one row per value)."""
    lam = np.asarray(lam, dtype=float)[..., None]
    logw = np.log(p) + lam * shifts
    return np.exp(logw - logsumexp(logw, axis=-1, keepdims=True))


def _tilt_mean(lam, shifts, p):
    return tilted(lam, shifts, p) @ shifts


def solve_tilt(C, shifts, p) -> np.ndarray:
    """Tilting parameter ``lam`` with ``<shift>_lam = C`` for every strictly interior ``C``."""
    C = np.asarray(C, dtype=float)
    lo = -np.ones_like(C)
    hi = np.ones_like(C)
    for _ in range(200):
        below = _tilt_mean(lo, shifts, p) > C
        above = _tilt_mean(hi, shifts, p) < C
        if not (below.any() or above.any()):
            break
        lo = np.where(below, 2 * lo, lo)
        hi = np.where(above, 2 * hi, hi)
    else:
        raise ConvergenceError("could not bracket the tilting parameter")
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        up = _tilt_mean(mid, shifts, p) < C
        lo = np.where(up, mid, lo)
        hi = np.where(up, hi, mid)
        if np.all(hi - lo <= LAMBDA_TOL * np.maximum(1.0, np.abs(mid))):
            return 0.5 * (lo + hi)
    raise ConvergenceError(f"bisection did not converge in {MAX_BISECTIONS} steps")


def _kl_min_many(C, shifts, p, tol):
    """Minimal ``KL(d || p)`` subject to ``d . shift = C`` for an array of targets."""
    n = len(p)
    d = np.empty((len(C), n))
    span = shifts.max() - shifts.min()
    if span <= tol:
        d[:] = p
    else:
        top = C >= shifts.max() - tol
        bottom = C <= shifts.min() + tol
        inner = ~(top | bottom)
        for mask, level in ((top, shifts.max()), (bottom, shifts.min())):
            if mask.any():
                # only the levels at the extreme shift can carry weight
                w = np.where(np.abs(shifts - level) <= tol, p, 0.0)
                d[mask] = w / w.sum()
        if inner.any():
            d[inner] = tilted(solve_tilt(C[inner], shifts, p), shifts, p)
    return _kl(d, p), d


def _kl(d, p):
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(d > 0, d * np.log(d / p), 0.0)
    return np.maximum(terms.sum(axis=-1), 0.0)


# -- vertex enumeration ---------------------------------------------------------

def vertex_candidates(C, shifts, tol=FEASIBILITY_TOL):
    """Extreme points of ``{d in simplex : d . shift = C}`` for an array of targets.

    Every vertex has at most two nonzero entries.  Returns populations of shape
    ``(len(C), K, n)`` and a feasibility mask ``(len(C), K)``.
    """
    C = np.atleast_1d(np.asarray(C, dtype=float))
    n = len(shifts)
    pairs = [(i, j) for i, j in itertools.combinations(range(n), 2) if abs(shifts[i] - shifts[j]) > tol]
    K = len(pairs) + n
    d = np.zeros((len(C), K, n))
    ok = np.zeros((len(C), K), dtype=bool)
    for k, (i, j) in enumerate(pairs):
        t = (C - shifts[j]) / (shifts[i] - shifts[j])
        ok[:, k] = (t >= -tol) & (t <= 1 + tol)
        t = np.clip(t, 0.0, 1.0)
        d[:, k, i] = t
        d[:, k, j] = 1 - t
    for i in range(n):
        k = len(pairs) + i
        d[:, k, i] = 1.0
        ok[:, k] = np.abs(C - shifts[i]) <= tol
    return d, ok


def _objective(d, p, family):
    if family == "diagonal":
        return _kl(d, p)
    return -(d @ np.log(p))


def _vertex_extreme(C, shifts, p, family, tol, sense):
    d, ok = vertex_candidates(C, shifts, tol)
    values = _objective(d, p, family)
    fill = -np.inf if sense == "max" else np.inf
    values = np.where(ok, values, fill)
    idx = np.argmax(values, axis=1) if sense == "max" else np.argmin(values, axis=1)
    rows = np.arange(len(C))
    return values[rows, idx], d[rows, idx]


# -- public extremal problems ---------------------------------------------------

def min_sirr_many(C, shifts, p, family: str = "diagonal"):
    C, shifts, p, tol = _prepare(C, shifts, p)
    if _family(family) == "diagonal":
        return _kl_min_many(C, shifts, p, tol)
    return _vertex_extreme(C, shifts, p, family, tol, "min")


def max_sirr_many(C, shifts, p, family: str = "diagonal"):
    C, shifts, p, tol = _prepare(C, shifts, p)
    return _vertex_extreme(C, shifts, p, _family(family), tol, "max")


def min_sirr_at_work(C: float, shifts, p, family: str = "diagonal") -> Extremum:
    """Smallest entropy production among ``family`` states producing work ``C``.

    Diagonal states: exponential tilting ``d ∝ p exp(lam shift)`` with ``lam``
    found by bracketing and bisection.  Pure states: the linear objective is
    minimised at a vertex of the feasible polytope.
    """
    values, d = min_sirr_many(C, shifts, p, family)
    return Extremum(float(values[0]), d[0])


def max_sirr_at_work(C: float, shifts, p, family: str = "diagonal") -> Extremum:
    """Largest entropy production among ``family`` states producing work ``C`` (a polytope vertex)."""
    values, d = max_sirr_many(C, shifts, p, family)
    return Extremum(float(values[0]), d[0])


def frontier_point(C: float, shifts, p, family: str = "diagonal") -> FrontierPoint:
    lo = min_sirr_at_work(C, shifts, p, family)
    hi = max_sirr_at_work(C, shifts, p, family)
    return FrontierPoint(float(C), lo.value, hi.value, lo.populations, hi.populations)


def sirr_bounds(C, shifts, p) -> tuple[np.ndarray, np.ndarray]:
    """Envelope of all states: the diagonal minimum and the pure maximum at each work value."""
    lower, _ = min_sirr_many(C, shifts, p, "diagonal")
    upper, _ = max_sirr_many(C, shifts, p, "pure")
    return lower, upper


def trace_frontier(model: models.Model, beta: float = DEFAULT_BETA, family: str = "diagonal",
                   n_points: int = 101) -> list[FrontierPoint]:
    """Sweep the work target uniformly over its feasible interval."""
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    shifts, p = level_data(model, beta)
    targets = np.linspace(shifts.min(), shifts.max(), n_points)
    s_min, d_min = min_sirr_many(targets, shifts, p, family)
    s_max, d_max = max_sirr_many(targets, shifts, p, family)
    return [FrontierPoint(float(c), float(a), float(b), x, y)
            for c, a, b, x, y in zip(targets, s_min, s_max, d_min, d_max)]


def frontier_columns(dim: int) -> tuple[str, ...]:
    return (("model_id", "family", "C", "s_min", "s_max")
            + tuple(f"d_min_{i + 1}" for i in range(dim))
            + tuple(f"d_max_{i + 1}" for i in range(dim)))


def frontier_row(point: FrontierPoint, model_id: str, family: str) -> dict:
    row = {"model_id": model_id, "family": family, "C": point.work_target,
           "s_min": point.s_min, "s_max": point.s_max}
    for i, (a, b) in enumerate(zip(point.d_min, point.d_max)):
        row[f"d_min_{i + 1}"] = a
        row[f"d_max_{i + 1}"] = b
    return row


# -- anisotropy sweeps -------------------------------------------------------------

SWEEP_PARAMS = {"alpha": "alpha", "gamma": "gamma_aniso"}
SWEEP_COLUMNS = ("param", "value", "work_max", "s_irr_max_state", "s_irr_zero_work_work", "crossing_flag")
CROSSING_TOL = 1e-6


@dataclass(frozen=True)
class SweepPoint:
    """One sweep value.

    ``zero_entropy_work`` is the work of the state that ends exactly on the
    final Gibbs state; ``crossing_at`` is the localised crossing inside the
    interval ending at this value, when ``crossing_flag`` is set.
    """

    param_name: str
    param_value: float
    work_max_extract: float
    s_irr_at_work_max: float
    zero_entropy_work: float
    crossing_flag: bool
    work_max_level: int
    crossing_at: float | None = None


def _with_param(model: models.TwoQubitModel, param: str, value: float) -> models.TwoQubitModel:
    if param not in SWEEP_PARAMS:
        raise ValueError(f"param must be one of {sorted(SWEEP_PARAMS)}")
    return dataclasses.replace(model, **{SWEEP_PARAMS[param]: float(value)})


def _final_gaps(model) -> np.ndarray:
    E = models.eigenvalues_two_closed(model, 1.0)
    return np.array([E[i] - E[j] for i, j in itertools.combinations(range(4), 2)])


def zero_entropy_work(model: models.Model, beta: float = DEFAULT_BETA) -> float:
    shifts, p = level_data(model, beta)
    return float(p @ shifts)


def locate_crossing(model_base, param: str, lo: float, hi: float, pair: int,
                    tol: float = CROSSING_TOL) -> float:
    """Bisect the sign change of one final-level gap between ``lo`` and ``hi``."""
    g_lo = _final_gaps(_with_param(model_base, param, lo))[pair]
    if g_lo == 0.0:
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = _final_gaps(_with_param(model_base, param, mid))[pair]
        if g_mid == 0.0:
            return mid
        if np.sign(g_mid) == np.sign(g_lo):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sweep_parameter(model_base: models.TwoQubitModel, param: str, values: Sequence[float],
                    beta: float = DEFAULT_BETA) -> list[SweepPoint]:
    values = np.asarray(values, dtype=float)
    if np.any(np.diff(values) <= 0):
        raise ValueError("sweep values must be strictly ascending")
    points = []
    prev_gaps = None
    for k, v in enumerate(values):
        model = _with_param(model_base, param, v)
        shifts, p = level_data(model, beta)
        level = int(np.argmin(shifts))
        gaps = _final_gaps(model)
        flag, where = False, None
        if prev_gaps is not None:
            crossed = (np.sign(prev_gaps) * np.sign(gaps) < 0) | ((gaps == 0) & (prev_gaps != 0))
            if crossed.any():
                flag = True
                pair = int(np.flatnonzero(crossed)[0])
                where = locate_crossing(model_base, param, values[k - 1], v, pair)
                log.info("final-level crossing in %s at %.9g", param, where)
        points.append(SweepPoint(param, float(v), float(shifts[level]), float(-np.log(p[level])),
                                 float(p @ shifts), flag, level + 1, where))
        prev_gaps = gaps
    return points


def sweep_row(point: SweepPoint) -> dict:
    return {
        "param": point.param_name,
        "value": point.param_value,
        "work_max": point.work_max_extract,
        "s_irr_max_state": point.s_irr_at_work_max,
        "s_irr_zero_work_work": point.zero_entropy_work,
        "crossing_flag": int(point.crossing_flag),
    }


def locate_discontinuities(fn: Callable[[float], float], values: Sequence[float],
                           width: float = CROSSING_TOL, jump_tol: float = 1e-4) -> list[float]:
    """Points where ``fn`` jumps by more than ``jump_tol`` across an interval narrower than ``width``.

    Each sampling interval is bisected towards the half with the larger change
    until it is ``width`` wide; a continuous ``fn`` leaves a change of order
    ``slope * width`` there.
    """
    jumps = []
    for a, b in zip(values[:-1], values[1:]):
        fa, fb = fn(a), fn(b)
        while b - a > width:
            m = 0.5 * (a + b)
            fm = fn(m)
            if abs(fm - fa) >= abs(fb - fm):
                b, fb = m, fm
            else:
                a, fa = m, fm
        if abs(fb - fa) > jump_tol:
            jumps.append(0.5 * (a + b))
    return jumps
