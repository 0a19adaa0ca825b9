"""Numerical counterdiabatic (transitionless) driving for an arbitrary Hermitian schedule.

The shortcut term is ``H_cd = -U H'_nd U^-1`` where ``H'_nd`` is the
off-diagonal part of ``i (dU^-1/dt) U`` and ``U = sum_n |n(t)><n(0)|``.
Since ``U^-1 U = 1`` this is the same operator as
``(i / tau) sum_{m != n} |m><m|d_s n><n|``, which is what gets evaluated,
with ``d_s |n>`` taken by finite differences on a gauge-fixed eigenframe.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import models
from .models import DriveSchedule

log = logging.getLogger(__name__)

DEGENERACY_GAP = 1e-9
AMBIGUITY_TOL = 1e-3
COUPLING_TOL = 1e-8
STATIC_TOL = 1e-14


class FrameError(RuntimeError):
    """Eigenvector tracking failed or the shortcut is undefined at a grid point."""


@dataclass(frozen=True)
class EigenFrame:
    """Instantaneous eigenbasis of a schedule sampled on a uniform ``s`` grid.

    ``vectors[k][:, i]`` is level ``i`` at ``grid[k]``; columns keep their
    identity along the grid (continuity labels, or the schedule's own level
    labels when it provides them).  Consecutive overlaps are real positive.
    """

    grid: np.ndarray
    values: np.ndarray
    vectors: np.ndarray
    tau: float
    degenerate: np.ndarray
    singular: np.ndarray
    static_ends: tuple[bool, bool] = (False, False)

    @property
    def n_grid(self) -> int:
        return len(self.grid)

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])


def _clusters(values: np.ndarray) -> list[np.ndarray]:
    groups, current = [], [0]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] < DEGENERACY_GAP:
            current.append(i)
        else:
            groups.append(np.array(current))
            current = [i]
    groups.append(np.array(current))
    return groups


def _seed_phase(V: np.ndarray) -> np.ndarray:
    # make the first largest-magnitude component of each column real positive
    V = V.copy()
    for j in range(V.shape[1]):
        mags = np.abs(V[:, j])
        idx = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
        V[:, j] *= np.exp(-1j * np.angle(V[idx, j]))
    return V


def _initial_basis(values, vectors, H0, H1):
    """Order levels at ``s = 0`` and lift degeneracies with the first step's perturbation."""
    cols, keys = [], []
    pert = H1 - H0
    for group in _clusters(values):
        Q = vectors[:, group]
        if len(group) == 1:
            cols.append(Q)
            keys.append((values[group[0]], 0.0))
            continue
        M = Q.conj().T @ pert @ Q
        mu, W = np.linalg.eigh(0.5 * (M + M.conj().T))
        cols.append(Q @ W)
        keys.extend((values[group].mean(), m) for m in mu)
    V = np.concatenate(cols, axis=1)
    order = sorted(range(len(keys)), key=lambda i: keys[i], reverse=True)
    return _seed_phase(V[:, order])


def _polar(P: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(P)
    return u @ vh


def _continue(prev: np.ndarray, values: np.ndarray, vectors: np.ndarray, s: float) -> tuple[np.ndarray, bool]:
    """Match the eigenvectors at one grid point to the previous frame columns."""
    groups = _clusters(values)
    dim = prev.shape[1]
    weights = np.empty((len(groups), dim))
    projections = []
    for c, group in enumerate(groups):
        P = vectors[:, group].conj().T @ prev
        projections.append(P)
        weights[c] = np.sum(np.abs(P) ** 2, axis=0)

    if len(groups) > 1:
        ranked = np.sort(weights, axis=0)
        if np.any(ranked[-1] - ranked[-2] < AMBIGUITY_TOL):
            raise FrameError(f"ambiguous level assignment near s={s:.9g}")

    slots = np.concatenate([[c] * len(g) for c, g in enumerate(groups)])
    rows, cols = linear_sum_assignment(-weights[slots])
    new = np.empty_like(prev)
    for c, group in enumerate(groups):
        assigned = np.sort(cols[slots[rows] == c])
        W = _polar(projections[c][:, assigned])
        new[:, assigned] = vectors[:, group] @ W
    return new, any(len(g) > 1 for g in groups)


def _label_permutation(schedule: DriveSchedule, grid: np.ndarray, values: np.ndarray) -> np.ndarray:
    labelled = np.array([schedule.level_energies(s) for s in grid])
    cost = np.max(np.abs(values[:, :, None] - labelled[:, None, :]), axis=0)
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(len(cols), dtype=int)
    perm[cols] = rows
    return perm


def _dH(schedule: DriveSchedule, grid: np.ndarray, k: int) -> np.ndarray:
    if schedule.derivative is not None:
        return schedule.derivative(grid[k])
    h = grid[1] - grid[0]
    lo, hi = max(k - 1, 0), min(k + 1, len(grid) - 1)
    return (schedule.hamiltonian(grid[hi]) - schedule.hamiltonian(grid[lo])) / ((hi - lo) * h)


def fix_gauge(schedule: DriveSchedule, grid, raw_values, raw_vectors) -> EigenFrame:
    """Build a tracked, phase-continuous frame from raw ``eigh`` output on ``grid``."""
    grid = np.asarray(grid, dtype=float)
    n = len(grid)
    H0 = schedule.hamiltonian(grid[0])
    H1 = schedule.hamiltonian(grid[1])
    vectors = np.empty((n, schedule.dim, schedule.dim), dtype=complex)
    degenerate = np.zeros(n, dtype=bool)
    vectors[0] = _initial_basis(raw_values[0], raw_vectors[0], H0, H1)
    degenerate[0] = any(len(g) > 1 for g in _clusters(raw_values[0]))
    for k in range(1, n):
        vectors[k], degenerate[k] = _continue(vectors[k - 1], raw_values[k], raw_vectors[k], grid[k])

    hams = np.array([schedule.hamiltonian(s) for s in grid])
    values = np.real(np.einsum("kji,kjl,kli->ki", vectors.conj(), hams, vectors))
    if schedule.level_energies is not None:
        perm = _label_permutation(schedule, grid, values)
        vectors = vectors[:, :, perm]
        values = values[:, perm]

    singular = np.zeros(n, dtype=bool)
    for k in np.flatnonzero(degenerate):
        V = vectors[k]
        coupling = V.conj().T @ _dH(schedule, grid, k) @ V
        close = np.abs(values[k][:, None] - values[k][None, :]) < DEGENERACY_GAP
        np.fill_diagonal(close, False)
        if np.any(np.abs(coupling[close]) > COUPLING_TOL):
            singular[k] = True
            log.warning("coupled degeneracy at s=%.9g", grid[k])

    static = (False, False)
    if schedule.derivative is not None:
        static = tuple(bool(np.max(np.abs(schedule.derivative(grid[k]))) <= STATIC_TOL) for k in (0, -1))
    return EigenFrame(grid, values, vectors, schedule.tau, degenerate, singular, static)


def build_eigenframe(schedule: DriveSchedule, n_grid: int) -> EigenFrame:
    if n_grid < 3 or n_grid % 2 == 0:
        raise ValueError("n_grid must be an odd integer >= 3")
    grid = np.linspace(0.0, 1.0, n_grid)
    raw_values = np.empty((n_grid, schedule.dim))
    raw_vectors = np.empty((n_grid, schedule.dim, schedule.dim), dtype=complex)
    for k, s in enumerate(grid):
        H = np.asarray(schedule.hamiltonian(s), dtype=complex)
        if np.max(np.abs(H - H.conj().T)) > 1e-12:
            raise ValueError(f"schedule is not Hermitian at s={s}")
        raw_values[k], raw_vectors[k] = np.linalg.eigh(H)
    return fix_gauge(schedule, grid, raw_values, raw_vectors)


def _frame_derivative(frame: EigenFrame, k: int) -> np.ndarray:
    V, h = frame.vectors, frame.step
    if k == 0:
        return (-3 * V[0] + 4 * V[1] - V[2]) / (2 * h)
    if k == frame.n_grid - 1:
        return (3 * V[-1] - 4 * V[-2] + V[-3]) / (2 * h)
    return (V[k + 1] - V[k - 1]) / (2 * h)


def counterdiabatic_numeric(frame: EigenFrame, k: int) -> np.ndarray:
    """Shortcut Hamiltonian at ``frame.grid[k]``, in the lab basis."""
    if not -frame.n_grid <= k < frame.n_grid:
        raise IndexError(k)
    k %= frame.n_grid
    if frame.singular[k]:
        raise FrameError(f"shortcut undefined at coupled degeneracy s={frame.grid[k]:.9g}")
    dim = frame.vectors.shape[1]
    if (k == 0 and frame.static_ends[0]) or (k == frame.n_grid - 1 and frame.static_ends[1]):
        return np.zeros((dim, dim), dtype=complex)
    V = frame.vectors[k]
    A = V.conj().T @ _frame_derivative(frame, k)
    np.fill_diagonal(A, 0.0)
    H = 1j / frame.tau * (V @ A @ V.conj().T)
    return 0.5 * (H + H.conj().T)


def counterdiabatic_series(frame: EigenFrame) -> np.ndarray:
    return np.array([counterdiabatic_numeric(frame, k) for k in range(frame.n_grid)])


def verify_against_analytic(model: models.Model, n_grid: int) -> float:
    """Largest entrywise gap between the numerical and closed-form shortcuts over the grid."""
    frame = build_eigenframe(models.schedule(model), n_grid)
    numeric = counterdiabatic_series(frame)
    analytic = np.array([models.cd_analytic(model, s) for s in frame.grid])
    return float(np.max(np.abs(numeric - analytic)))
