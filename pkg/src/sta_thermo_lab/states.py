"""Initial-state generators: random samples and the named families.

States are written in the *level basis*: index ``i`` is the ``i``-th labelled
eigenstate of the initial Hamiltonian (see :mod:`sta_thermo_lab.models`).
:func:`levels_to_lab` maps them to the lab (product) basis through an
eigenframe, which matters when the initial spectrum is degenerate.
"""

from __future__ import annotations

import enum
from typing import Mapping, NamedTuple

import numpy as np

from . import models
from .quantum import gibbs_populations, ket_to_dm

POP_TOL = 1e-12


class StateFamily(str, enum.Enum):
    DIAGONAL = "diagonal"
    MAX_COHERENT = "max_coherent"
    COHERENT_THERMAL = "coherent_thermal"
    RED_BOUNDARY_1 = "red_boundary_1"
    RED_BOUNDARY_2 = "red_boundary_2"
    HAAR_PURE = "haar_pure"
    RANDOM_MIXED = "random_mixed"
    WORK_MAX = "work_max"
    ENTROPY_ZERO = "entropy_zero"


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _check_dim(dim: int) -> int:
    if dim not in (2, 4):
        raise ValueError(f"dim must be 2 or 4, got {dim}")
    return dim


def haar_pure(dim: int, seed=None) -> np.ndarray:
    """Pure state drawn from the unitarily invariant measure."""
    rng = _rng(seed)
    psi = rng.standard_normal(_check_dim(dim)) + 1j * rng.standard_normal(dim)
    return ket_to_dm(psi)


def random_mixed(dim: int, seed=None) -> np.ndarray:
    """Hilbert-Schmidt random state ``G G^dag / tr(G G^dag)`` from a square Ginibre matrix."""
    rng = _rng(seed)
    dim = _check_dim(dim)
    G = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = G @ G.conj().T
    rho = rho / np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


def _populations(pops) -> np.ndarray:
    p = np.asarray(pops, dtype=float)
    if np.any(p < -POP_TOL) or abs(p.sum() - 1.0) > 1e-10:
        raise ValueError("populations must lie on the probability simplex")
    return np.clip(p, 0.0, None)


def _fraction(a: float) -> float:
    a = float(a)
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"a={a!r} outside [0, 1]")
    return a


def pure_with_populations(pops, phases=None) -> np.ndarray:
    """``|psi> = sum_i sqrt(d_i) e^{i phi_i} |i>``."""
    p = _populations(pops)
    phi = np.zeros(len(p)) if phases is None else np.asarray(phases, dtype=float)
    return ket_to_dm(np.sqrt(p) * np.exp(1j * phi))


def with_coherence(pops, strength: float, seed=None) -> np.ndarray:
    """State with diagonal ``pops`` and random coherences scaled by ``strength`` in [0, 1].

    The off-diagonals are ``strength * sqrt(d_i d_j) <u_i|u_j>`` for random unit
    vectors ``u_i``, which keeps the matrix positive semidefinite.
    """
    p = _populations(pops)
    r = _fraction(strength)
    rng = _rng(seed)
    n = len(p)
    u = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    u /= np.linalg.norm(u, axis=0)
    G = (1 - r) * np.eye(n) + r * (u.conj().T @ u)
    np.fill_diagonal(G, 1.0)
    rho = np.sqrt(np.outer(p, p)) * G
    return 0.5 * (rho + rho.conj().T)


def _two_level_block(dim: int, i: int, j: int, a: float, fraction: float, phase: float) -> np.ndarray:
    a = _fraction(a)
    c = np.sqrt(a - a * a) * _fraction(fraction) * np.exp(1j * phase)
    rho = np.zeros((dim, dim), dtype=complex)
    rho[i, i], rho[j, j] = a, 1 - a
    rho[i, j], rho[j, i] = c, np.conj(c)
    return rho


def final_thermal_populations(model: models.Model, beta: float = 1.0) -> np.ndarray:
    """Gibbs populations of the final Hamiltonian, indexed by level label."""
    return gibbs_populations(models.level_energies(model, 1.0), beta)


def family(tag, params: Mapping | None = None, seed=None) -> np.ndarray:
    """Build a member of a named family.  Recognised ``params`` per tag:

    diagonal          a (dim 2) or pops (dim 4)
    max_coherent      a, phase (dim 2) or pops, phases (dim 4)
    coherent_thermal  c_prime, phase, beta (dim 2); strength, beta, model (dim 4)
    red_boundary_1/2  a, fraction (share of maximal coherence, default 1), phase
    haar_pure, random_mixed   dim
    work_max, entropy_zero    model, beta
    """
    tag = StateFamily(tag)
    params = dict(params or {})
    dim = int(params.get("dim", len(params["pops"]) if "pops" in params else 2))
    phase = float(params.get("phase", 0.0))

    if tag is StateFamily.DIAGONAL:
        if "pops" in params:
            return np.diag(_populations(params["pops"])).astype(complex)
        a = _fraction(params["a"])
        return np.diag([a, 1 - a]).astype(complex)

    if tag is StateFamily.MAX_COHERENT:
        if "pops" in params:
            return pure_with_populations(params["pops"], params.get("phases"))
        return _two_level_block(2, 0, 1, params["a"], 1.0, phase)

    if tag is StateFamily.COHERENT_THERMAL:
        beta = float(params.get("beta", 1.0))
        model = params.get("model") or (models.SingleQubitModel() if dim == 2 else models.TwoQubitModel())
        T = final_thermal_populations(model, beta)
        if len(T) == 2 and "c_prime" in params:
            c_max = np.sqrt(T[0] * T[1])
            c_prime = float(params["c_prime"])
            if not 0.0 <= c_prime <= c_max + 1e-15:
                raise ValueError(f"c_prime={c_prime!r} outside [0, {c_max}]")
            return _two_level_block(2, 0, 1, T[0], min(c_prime / c_max, 1.0), phase)
        return with_coherence(T, float(params.get("strength", 0.0)), seed)

    if tag is StateFamily.RED_BOUNDARY_1:
        return _two_level_block(4, 0, 2, params["a"], params.get("fraction", 1.0), phase)

    if tag is StateFamily.RED_BOUNDARY_2:
        return _two_level_block(4, 0, 1, params["a"], params.get("fraction", 1.0), phase)

    if tag is StateFamily.HAAR_PURE:
        return haar_pure(dim, seed)

    if tag is StateFamily.RANDOM_MIXED:
        return random_mixed(dim, seed)

    special = special_states(params.get("model") or models.TwoQubitModel(), float(params.get("beta", 1.0)))
    return special.work_max if tag is StateFamily.WORK_MAX else special.entropy_zero


class SpecialStates(NamedTuple):
    work_max: np.ndarray
    entropy_zero: np.ndarray
    work_max_levels: tuple[int, ...]


def special_states(model: models.Model, beta: float = 1.0) -> SpecialStates:
    """The maximal-work eigenstate and the state transported onto the final Gibbs state.

    ``work_max_levels`` lists every level attaining the largest energy drop; the
    returned ``work_max`` is the first of them.
    """
    drop = models.level_energies(model, 0.0) - models.level_energies(model, 1.0)
    best = np.flatnonzero(drop >= drop.max() - 1e-12)
    work_max = np.zeros((model.dim, model.dim), dtype=complex)
    work_max[best[0], best[0]] = 1.0
    entropy_zero = np.diag(final_thermal_populations(model, beta)).astype(complex)
    return SpecialStates(work_max, entropy_zero, tuple(int(i) for i in best))


def special_states_two_qubit(model: models.TwoQubitModel, beta: float = 1.0) -> SpecialStates:
    return special_states(model, beta)


def levels_to_lab(rho_levels, frame) -> np.ndarray:
    V = frame.vectors[0]
    return V @ np.asarray(rho_levels) @ V.conj().T


def lab_to_levels(rho_lab, frame) -> np.ndarray:
    V = frame.vectors[0]
    return V.conj().T @ np.asarray(rho_lab) @ V
