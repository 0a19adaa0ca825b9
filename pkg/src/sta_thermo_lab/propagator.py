"""Finite-time unitary evolution with and without the counterdiabatic term."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.integrate import simpson

from . import cdengine
from .cdengine import EigenFrame
from .models import DriveSchedule
from .quantum import as_density, expm_hermitian, fidelity

DEFAULT_STEPS = 5000
QUICK_STEPS = 500
UNITARITY_LIMIT = 1e-6


class EvolutionError(RuntimeError):
    pass


@dataclass(frozen=True)
class EvolutionResult:
    final_state: np.ndarray
    unitary: np.ndarray
    steps: int
    max_unitarity_defect: float


def _numeric_shortcut(schedule: DriveSchedule, steps: int) -> Callable[[float], np.ndarray]:
    # a frame on a 2*steps+1 grid puts every step midpoint on a grid point
    frame = cdengine.build_eigenframe(schedule, 2 * steps + 1)
    table = {round(float(s) * 2 * steps): k for k, s in enumerate(frame.grid)}
    return lambda s: cdengine.counterdiabatic_numeric(frame, table[round(s * 2 * steps)])


def evolve(schedule: DriveSchedule, with_tqd: bool, rho0, steps: int = DEFAULT_STEPS) -> EvolutionResult:
    """Midpoint exponential stepping: ``U = prod_k exp(-i H(s_k + ds/2) tau ds)``.

    With ``with_tqd`` the schedule's closed-form shortcut is added when it has
    one; otherwise the shortcut is built numerically from an eigenframe.
    """
    if steps < 100:
        raise ValueError("steps must be at least 100")
    rho0 = as_density(rho0)
    shortcut = None
    if with_tqd:
        shortcut = schedule.counterdiabatic or _numeric_shortcut(schedule, steps)

    ds = 1.0 / steps
    U = np.eye(schedule.dim, dtype=complex)
    for k in range(steps):
        s = (k + 0.5) * ds
        H = np.asarray(schedule.hamiltonian(s), dtype=complex)
        if shortcut is not None:
            H = H + shortcut(s)
        U = expm_hermitian(H, -1j * schedule.tau * ds) @ U

    defect = float(np.max(np.abs(U.conj().T @ U - np.eye(schedule.dim))))
    if defect > UNITARITY_LIMIT:
        raise EvolutionError(f"unitarity defect {defect:.2e}; increase steps")
    final = U @ rho0 @ U.conj().T
    return EvolutionResult(0.5 * (final + final.conj().T), U, steps, defect)


def fidelity_curve(
    schedule_for_tau: Callable[[float], DriveSchedule],
    tau_list: Sequence[float],
    with_tqd: bool,
    rho0,
    target,
    steps: int = DEFAULT_STEPS,
) -> list[tuple[float, float]]:
    """Final-state fidelity to ``target`` for each total duration in ``tau_list``."""
    if len(tau_list) == 0:
        raise ValueError("tau_list is empty")
    out = []
    for tau in tau_list:
        if not tau > 0:
            raise ValueError("every tau must be positive")
        result = evolve(schedule_for_tau(tau), with_tqd, rho0, steps)
        out.append((float(tau), fidelity(result.final_state, target)))
    return out


def dynamical_phases(frame: EigenFrame) -> np.ndarray:
    """``tau * integral E_i ds`` per level, by composite Simpson on the frame grid."""
    return frame.tau * simpson(frame.values, x=frame.grid, axis=0)


def adiabatic_transport(rho0, frame: EigenFrame) -> np.ndarray:
    """Map ``rho0`` to ``s = 1`` keeping every instantaneous-basis amplitude fixed up to dynamical phases."""
    rho0 = as_density(rho0)
    if frame.singular.any():
        raise cdengine.FrameError("frame crosses a coupled degeneracy")
    V0, V1 = frame.vectors[0], frame.vectors[-1]
    local = V0.conj().T @ rho0 @ V0
    phase = np.exp(-1j * dynamical_phases(frame))
    local = phase[:, None] * local * phase.conj()[None, :]
    final = V1 @ local @ V1.conj().T
    return 0.5 * (final + final.conj().T)


def instantaneous_populations(rho, frame: EigenFrame, k: int) -> np.ndarray:
    V = frame.vectors[k]
    return np.real(np.einsum("ji,jl,li->i", V.conj(), rho, V))


FIDELITY_COLUMNS = ("tau", "fidelity", "with_tqd", "model_id")


def fidelity_rows(curve: Iterable[tuple[float, float]], with_tqd: bool, model_id: str) -> list[dict]:
    return [
        {"tau": tau, "fidelity": f, "with_tqd": int(with_tqd), "model_id": model_id}
        for tau, f in curve
    ]
