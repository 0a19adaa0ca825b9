import dataclasses
import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from sta_thermo_lab import models, propagator
from sta_thermo_lab.cdengine import build_eigenframe
from sta_thermo_lab.models import DriveSchedule, SingleQubitModel, TwoQubitModel
from sta_thermo_lab.propagator import (
    FIDELITY_COLUMNS,
    EvolutionError,
    adiabatic_transport,
    evolve,
    fidelity_curve,
    fidelity_rows,
    instantaneous_populations,
)
from sta_thermo_lab.quantum import fidelity, ket_to_dm, purity, thermal_state

SZ = np.diag([1.0, -1.0]).astype(complex)
UP = ket_to_dm([1, 0])
PLUS = ket_to_dm(np.array([1, 1]) / math.sqrt(2))
FIG1A = TwoQubitModel(eps1=1.4, eps2=2.0, alpha=0.3, beta_aniso=1.2)


def single(tau):
    return models.schedule(SingleQubitModel(tau=tau))


def two(tau, base=FIG1A):
    return models.schedule(dataclasses.replace(base, tau=tau))


def random_density(rng, dim):
    G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def ode_unitary(H_of_s, tau, dim):
    """Propagator from an adaptive Runge-Kutta solve of i dU/ds = tau H(s) U."""
    def rhs(s, y):
        U = y.reshape(dim, dim)
        return (-1j * tau * H_of_s(s) @ U).ravel()

    sol = solve_ivp(rhs, (0.0, 1.0), np.eye(dim, dtype=complex).ravel(), method="DOP853", rtol=1e-12, atol=1e-13)
    return sol.y[:, -1].reshape(dim, dim)


def test_steps_lower_bound():
    with pytest.raises(ValueError):
        evolve(single(1.0), False, UP, steps=99)


def test_full_larmor_period_returns_state():
    sched = DriveSchedule(lambda s: 0.5 * SZ, tau=2 * math.pi, dim=2)
    result = evolve(sched, False, PLUS, steps=100)
    assert fidelity(result.final_state, PLUS) == pytest.approx(1.0, abs=1e-12)
    assert result.max_unitarity_defect <= 1e-8


def test_unitarity_failure_is_reported(monkeypatch):
    monkeypatch.setattr(propagator, "expm_hermitian", lambda H, f: 1.001 * np.eye(len(H)))
    with pytest.raises(EvolutionError):
        evolve(single(1.0), False, UP, steps=100)


@pytest.mark.parametrize("make,tau", [(single, 0.7), (two, 3.0)], ids=["single", "fig1a"])
@pytest.mark.parametrize("with_tqd", [False, True], ids=["bare", "tqd"])
def test_matches_runge_kutta_oracle(make, tau, with_tqd):
    sched = make(tau)
    H_of_s = sched.hamiltonian
    if with_tqd:
        H_of_s = lambda s: sched.hamiltonian(s) + sched.counterdiabatic(s)  # noqa: E731
    oracle = ode_unitary(H_of_s, tau, sched.dim)
    result = evolve(sched, with_tqd, np.eye(sched.dim) / sched.dim, steps=5000)
    assert np.max(np.abs(result.unitary - oracle)) <= 1e-6


@pytest.mark.parametrize("tau", [0.01, 0.1, 1.0, 10.0])
def test_single_qubit_tqd_reaches_plus(tau):
    result = evolve(single(tau), True, UP, steps=5000)
    assert fidelity(result.final_state, PLUS) >= 1 - 1e-6


def test_bare_sudden_limit():
    result = evolve(single(1e-4), False, UP, steps=100)
    assert fidelity(result.final_state, PLUS) == pytest.approx(0.5, abs=1e-3)


def test_bare_adiabatic_trend_single():
    curve = dict(fidelity_curve(single, [0.5, 20.0], False, UP, PLUS, steps=2000))
    assert curve[20.0] > curve[0.5]


def test_bare_two_qubit_thermal_approaches_target():
    rho0 = thermal_state(models.hamiltonian(FIG1A, 0.0), 1.0)
    target = adiabatic_transport(rho0, build_eigenframe(models.schedule(FIG1A), 401))
    curve = dict(fidelity_curve(two, [0.5, 50.0], False, rho0, target, steps=5000))
    assert curve[50.0] >= 0.99
    assert curve[50.0] > curve[0.5]


def test_fidelity_curve_rejects_bad_input():
    with pytest.raises(ValueError):
        fidelity_curve(single, [], True, UP, PLUS)
    with pytest.raises(ValueError):
        fidelity_curve(single, [1.0, -2.0], True, UP, PLUS, steps=100)


def test_purity_and_spectrum_conserved():
    rho0 = random_density(np.random.default_rng(37), 4)
    result = evolve(two(2.0), False, rho0, steps=500)
    assert purity(result.final_state) == pytest.approx(purity(rho0), abs=1e-8)
    assert np.allclose(np.linalg.eigvalsh(result.final_state), np.linalg.eigvalsh(rho0), atol=1e-8)
    assert np.allclose(result.final_state, result.unitary @ rho0 @ result.unitary.conj().T, atol=1e-12)


@pytest.mark.parametrize("sched", [single(0.3), two(0.3)], ids=["single", "fig1a"])
def test_populations_invariant_under_tqd(sched):
    frame = build_eigenframe(sched, 401)
    U = evolve(sched, True, np.eye(sched.dim) / sched.dim, steps=5000).unitary
    rng = np.random.default_rng(41)
    for _ in range(100):
        rho0 = random_density(rng, sched.dim)
        before = instantaneous_populations(rho0, frame, 0)
        after = instantaneous_populations(U @ rho0 @ U.conj().T, frame, -1)
        assert np.max(np.abs(after - before)) <= 1e-5


def test_midpoint_is_second_order():
    sched = single(1.0)
    frame = build_eigenframe(sched, 401)
    rho0 = random_density(np.random.default_rng(43), 2)
    target = instantaneous_populations(adiabatic_transport(rho0, frame), frame, -1)

    def deviation(steps):
        final = evolve(sched, True, rho0, steps=steps).final_state
        return np.max(np.abs(instantaneous_populations(final, frame, -1) - target))

    assert deviation(100) / deviation(200) >= 3.0


def test_numerical_shortcut_path():
    # without a closed-form term the propagator builds the shortcut from an eigenframe
    sched = dataclasses.replace(two(0.5), counterdiabatic=None)
    frame = build_eigenframe(sched, 401)
    rho0 = thermal_state(sched.hamiltonian(0.0), 1.0)
    result = evolve(sched, True, rho0, steps=1000)
    assert fidelity(result.final_state, adiabatic_transport(rho0, frame)) >= 1 - 1e-6


class TestAdiabaticTransport:
    def test_diagonal_stays_diagonal(self):
        frame = build_eigenframe(two(1.0), 401)
        pops = np.array([0.1, 0.2, 0.3, 0.4])
        rho0 = frame.vectors[0] @ np.diag(pops) @ frame.vectors[0].conj().T
        final = adiabatic_transport(rho0, frame)
        local = frame.vectors[-1].conj().T @ final @ frame.vectors[-1]
        assert np.allclose(local, np.diag(pops), atol=1e-12)

    def test_up_goes_to_plus(self):
        frame = build_eigenframe(single(1.0), 401)
        assert fidelity(adiabatic_transport(UP, frame), PLUS) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("make", [single, two], ids=["single", "fig1a"])
    def test_agrees_with_shortcut_evolution(self, make):
        sched = make(1.3)
        frame = build_eigenframe(sched, 801)
        rho0 = random_density(np.random.default_rng(47), sched.dim)
        final = evolve(sched, True, rho0, steps=5000).final_state
        transported = adiabatic_transport(rho0, frame)
        pops = instantaneous_populations(final, frame, -1)
        assert np.allclose(pops, instantaneous_populations(transported, frame, -1), atol=1e-6)
        # dynamical phases make the coherences agree too
        assert np.max(np.abs(final - transported)) <= 1e-6


def test_fidelity_rows_schema():
    rows = fidelity_rows([(0.1, 0.99), (1.0, 1.0)], True, "single_qubit")
    assert FIDELITY_COLUMNS == ("tau", "fidelity", "with_tqd", "model_id")
    assert all(tuple(r) == FIDELITY_COLUMNS for r in rows)
    assert rows[0]["with_tqd"] == 1
