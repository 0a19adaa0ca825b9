"""Work-medium Hamiltonians: a Landau-Zener qubit and an anisotropic Heisenberg pair.

Time enters through the normalised parameter ``s = t / tau`` in ``[0, 1]``.
Two-qubit operators use the product basis ``|uu>, |ud>, |du>, |dd>`` with
``sigma_z |u> = +|u>``.  Energy levels are labelled by the closed-form
expressions (level 1 is the top of the ``{|uu>, |dd>}`` block, 2 and 3 the
``{|ud>, |du>}`` block, 4 the bottom of the outer block), not by sorting,
so labels follow each level through crossings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, ClassVar, Optional

import numpy as np

from .quantum import IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z

HALF_PI = np.pi / 2

XX = np.kron(SIGMA_X, SIGMA_X)
YY = np.kron(SIGMA_Y, SIGMA_Y)
ZZ = np.kron(SIGMA_Z, SIGMA_Z)
Z1 = np.kron(SIGMA_Z, IDENTITY2)
Z2 = np.kron(IDENTITY2, SIGMA_Z)


def _check_s(s: float) -> float:
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s={s!r} outside [0, 1]")
    return s


@dataclass(frozen=True)
class DriveSchedule:
    """A Hamiltonian path ``s -> H(s)`` traversed in total time ``tau``.

    ``derivative`` (dH/ds), ``counterdiabatic`` (an exact shortcut term) and
    ``level_energies`` (labelled eigenvalues) are optional extras that the
    built-in models supply; generic schedules may omit them.
    """

    hamiltonian: Callable[[float], np.ndarray]
    tau: float
    dim: int
    name: str = "custom"
    derivative: Optional[Callable[[float], np.ndarray]] = field(default=None, compare=False)
    counterdiabatic: Optional[Callable[[float], np.ndarray]] = field(default=None, compare=False)
    level_energies: Optional[Callable[[float], np.ndarray]] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")


# -- scalar schedules ---------------------------------------------------------

def _field_angle(s: float) -> float:
    # B(s) = sin(angle), sqrt(1 - B^2) = cos(angle) with angle in [0, pi/2]
    return HALF_PI * np.sin(np.pi * s / 2) ** 2


def schedule_B(s: float) -> float:
    s = _check_s(s)
    return float(np.sin(_field_angle(s)))


def schedule_omega(s: float) -> float:
    s = _check_s(s)
    return float(1.0 + np.tanh(np.pi * s / 2))


def schedule_J(s: float) -> float:
    """``cos[(pi/2) cos(pi s/2)]``, written as ``sin[pi sin^2(pi s/4)]`` so both endpoints are exact."""
    s = _check_s(s)
    return float(np.sin(np.pi * np.sin(np.pi * s / 4) ** 2))


def schedule_J_prime(s: float) -> float:
    s = _check_s(s)
    return float(np.pi**2 / 4 * np.sin(np.pi * s / 2) * np.sin(HALF_PI * np.cos(np.pi * s / 2)))


# -- single qubit -------------------------------------------------------------

@dataclass(frozen=True)
class SingleQubitModel:
    tau: float = 1.0

    model_id: ClassVar[str] = "single_qubit"
    dim: ClassVar[int] = 2

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")


def hamiltonian_single(m: SingleQubitModel, s: float) -> np.ndarray:
    s = _check_s(s)
    theta = _field_angle(s)
    omega = schedule_omega(s)
    return omega / 2 * (np.sin(theta) * SIGMA_X + np.cos(theta) * SIGMA_Z)


def hamiltonian_single_derivative(m: SingleQubitModel, s: float) -> np.ndarray:
    s = _check_s(s)
    theta = _field_angle(s)
    dtheta = np.pi**2 / 4 * np.sin(np.pi * s)
    omega = schedule_omega(s)
    domega = HALF_PI / np.cosh(np.pi * s / 2) ** 2
    direction = np.sin(theta) * SIGMA_X + np.cos(theta) * SIGMA_Z
    turn = np.cos(theta) * SIGMA_X - np.sin(theta) * SIGMA_Z
    return domega / 2 * direction + omega / 2 * dtheta * turn


def cd_analytic_single(m: SingleQubitModel, s: float) -> np.ndarray:
    s = _check_s(s)
    h12 = -1j * np.pi**2 / (8 * m.tau) * np.sin(np.pi * s)
    return np.array([[0, h12], [np.conj(h12), 0]], dtype=complex)


def eigenvalues_single_closed(m: SingleQubitModel, s: float) -> np.ndarray:
    """Level 1 is the field-aligned (upper) state, ``|u>`` at ``s = 0``."""
    w = schedule_omega(s)
    return np.array([w / 2, -w / 2])


# -- two qubits ---------------------------------------------------------------

@dataclass(frozen=True)
class TwoQubitModel:
    eps1: float = 1.0
    eps2: float = 1.0
    alpha: float = 1.0
    beta_aniso: float = 1.0
    gamma_aniso: float = 0.0
    tau: float = 1.0

    model_id: ClassVar[str] = "two_qubit"
    dim: ClassVar[int] = 4

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")


def _coupling(m: TwoQubitModel) -> np.ndarray:
    return (m.alpha * XX + m.beta_aniso * YY + m.gamma_aniso * ZZ) / 2


def hamiltonian_two(m: TwoQubitModel, s: float) -> np.ndarray:
    J = schedule_J(s)
    return m.eps1 * Z1 + m.eps2 * Z2 + J * _coupling(m)


def hamiltonian_two_derivative(m: TwoQubitModel, s: float) -> np.ndarray:
    return schedule_J_prime(s) * _coupling(m)


def _block_rate(coupling: float, splitting: float, m: TwoQubitModel, s: float) -> float:
    # mixing-angle rate of a two-level block [[splitting, c J/2], [c J/2, -splitting]]
    s = _check_s(s)
    J = schedule_J(s)
    denom = m.tau * (coupling**2 * J**2 + 4 * splitting**2)
    if denom == 0.0:
        return 0.0
    return coupling * splitting * schedule_J_prime(s) / denom


def cd_analytic_two(m: TwoQubitModel, s: float) -> np.ndarray:
    """Shortcut term with the anti-diagonal pattern ``H14`` (outer block), ``H23`` (inner block)."""
    h14 = -1j * _block_rate(m.alpha - m.beta_aniso, m.eps1 + m.eps2, m, s)
    h23 = -1j * _block_rate(m.alpha + m.beta_aniso, m.eps1 - m.eps2, m, s)
    H = np.zeros((4, 4), dtype=complex)
    H[0, 3], H[3, 0] = h14, np.conj(h14)
    H[1, 2], H[2, 1] = h23, np.conj(h23)
    return H


def eigenvalues_two_closed(m: TwoQubitModel, s: float) -> np.ndarray:
    J = schedule_J(s)
    outer = np.sqrt((m.alpha - m.beta_aniso) ** 2 * J**2 + 4 * (m.eps1 + m.eps2) ** 2)
    inner = np.sqrt((m.alpha + m.beta_aniso) ** 2 * J**2 + 4 * (m.eps1 - m.eps2) ** 2)
    gJ = m.gamma_aniso * J
    return 0.5 * np.array([gJ + outer, -gJ + inner, -gJ - inner, gJ - outer])


# -- dispatch -----------------------------------------------------------------

Model = SingleQubitModel | TwoQubitModel


def hamiltonian(m: Model, s: float) -> np.ndarray:
    if isinstance(m, SingleQubitModel):
        return hamiltonian_single(m, s)
    return hamiltonian_two(m, s)


def cd_analytic(m: Model, s: float) -> np.ndarray:
    if isinstance(m, SingleQubitModel):
        return cd_analytic_single(m, s)
    return cd_analytic_two(m, s)


def level_energies(m: Model, s: float) -> np.ndarray:
    if isinstance(m, SingleQubitModel):
        return eigenvalues_single_closed(m, s)
    return eigenvalues_two_closed(m, s)


def schedule(m: Model) -> DriveSchedule:
    if isinstance(m, SingleQubitModel):
        deriv = hamiltonian_single_derivative
    else:
        deriv = hamiltonian_two_derivative
    return DriveSchedule(
        hamiltonian=lambda s: hamiltonian(m, s),
        tau=m.tau,
        dim=m.dim,
        name=m.model_id,
        derivative=lambda s: deriv(m, s),
        counterdiabatic=lambda s: cd_analytic(m, s),
        level_energies=lambda s: level_energies(m, s),
    )
