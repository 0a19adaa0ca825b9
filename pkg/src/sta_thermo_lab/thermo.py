"""Work, irreversible entropy production and coherence for one driven stroke.

Sign convention: ``work = <H_tau>_final - <H_0>_initial``; negative values
mean energy was extracted from the medium.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import cdengine, models
from .propagator import adiabatic_transport
from .quantum import (
    as_density,
    rel_entropy_of_coherence,
    relative_entropy,
    thermal_state,
    von_neumann_entropy,
)
from .states import final_thermal_populations, levels_to_lab

DEFAULT_BETA = 1.0
TRANSPORT_GRID = 401


@dataclass(frozen=True)
class StrokeOutcome:
    work: float
    s_irr: float
    coherence_in: float
    populations_in: np.ndarray


def work(rho0, H0, rho_tau, H_tau) -> float:
    rho0, rho_tau = np.asarray(rho0), np.asarray(rho_tau)
    H0, H_tau = np.asarray(H0), np.asarray(H_tau)
    if not rho0.shape == H0.shape == rho_tau.shape == H_tau.shape:
        raise ValueError("dimension mismatch")
    return float(np.real(np.trace(rho_tau @ H_tau)) - np.real(np.trace(rho0 @ H0)))


def work_adiabatic(populations, E0, Etau) -> float:
    """Work when level populations are carried unchanged from ``E0`` to ``Etau``."""
    d, E0, Etau = (np.asarray(x, dtype=float) for x in (populations, E0, Etau))
    if not len(d) == len(E0) == len(Etau):
        raise ValueError("length mismatch")
    return float(d @ (Etau - E0))


def sirr(rho_tau, H_tau, beta: float = DEFAULT_BETA) -> float:
    """Relative entropy of the final state to the Gibbs state of ``H_tau``."""
    return relative_entropy(rho_tau, thermal_state(H_tau, beta))


def sirr_adiabatic(rho0, thermal_pops) -> float:
    """Closed form ``-S(rho0) - sum_i d_i ln p_i`` for a level-basis ``rho0``."""
    p = np.asarray(thermal_pops, dtype=float)
    if np.any(p <= 0):
        raise ValueError("thermal populations must be strictly positive")
    rho0 = as_density(rho0)
    if rho0.shape[0] != len(p):
        raise ValueError("length mismatch")
    d = np.real(np.diag(rho0))
    return max(-von_neumann_entropy(rho0) - float(d @ np.log(p)), 0.0)


@functools.lru_cache(maxsize=32)
def model_frame(model: models.Model, n_grid: int = TRANSPORT_GRID) -> cdengine.EigenFrame:
    return cdengine.build_eigenframe(models.schedule(model), n_grid)


def level_data(model: models.Model, beta: float = DEFAULT_BETA) -> tuple[np.ndarray, np.ndarray]:
    """Per-level energy shifts ``E_tau - E_0`` and final Gibbs populations."""
    shifts = models.level_energies(model, 1.0) - models.level_energies(model, 0.0)
    return shifts, final_thermal_populations(model, beta)


def stroke(rho0, model: models.Model, beta: float = DEFAULT_BETA, frame=None) -> StrokeOutcome:
    """Outcome of an ideal shortcut stroke for a level-basis initial state."""
    rho0 = as_density(rho0)
    frame = frame or model_frame(model)
    lab0 = levels_to_lab(rho0, frame)
    H0 = models.hamiltonian(model, 0.0)
    H_tau = models.hamiltonian(model, 1.0)
    final = adiabatic_transport(lab0, frame)
    return StrokeOutcome(
        work=work(lab0, H0, final, H_tau),
        s_irr=sirr(final, H_tau, beta),
        coherence_in=rel_entropy_of_coherence(lab0, frame.vectors[0]),
        populations_in=np.real(np.diag(rho0)).copy(),
    )


def stroke_columns(dim: int) -> tuple[str, ...]:
    pops = tuple(f"pop_{i + 1}" for i in range(dim))
    return ("model_id", "work", "s_irr", "coherence") + pops + ("family_tag", "seed")


def stroke_row(outcome: StrokeOutcome, model_id: str, family_tag: str, seed) -> dict:
    row = {
        "model_id": model_id,
        "work": outcome.work,
        "s_irr": outcome.s_irr,
        "coherence": outcome.coherence_in,
        "family_tag": family_tag,
        "seed": "" if seed is None else seed,
    }
    for i, p in enumerate(outcome.populations_in):
        row[f"pop_{i + 1}"] = p
    return row
