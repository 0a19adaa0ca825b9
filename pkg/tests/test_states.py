import math

import numpy as np
import pytest

from sta_thermo_lab import models, states
from sta_thermo_lab.cdengine import build_eigenframe
from sta_thermo_lab.models import SingleQubitModel, TwoQubitModel
from sta_thermo_lab.quantum import as_density, purity, rel_entropy_of_coherence, von_neumann_entropy
from sta_thermo_lab.states import StateFamily, family, haar_pure, random_mixed, special_states

ISOTROPIC = TwoQubitModel()
T1 = 1 / (1 + math.exp(1 + math.tanh(math.pi / 2)))


def binary_entropy(a):
    return -sum(x * math.log(x) for x in (a, 1 - a) if x > 0)


def assert_density(rho):
    as_density(rho)


class TestRandom:
    @pytest.mark.parametrize("dim", [2, 4])
    def test_haar_pure_is_pure_and_seeded(self, dim):
        rho = haar_pure(dim, 5)
        assert purity(rho) == pytest.approx(1.0, abs=1e-12)
        assert np.array_equal(rho, haar_pure(dim, 5))
        assert not np.array_equal(rho, haar_pure(dim, 6))

    @pytest.mark.parametrize("dim", [2, 4])
    def test_haar_first_moment(self, dim):
        rng = np.random.default_rng(53)
        samples = np.array([haar_pure(dim, rng) for _ in range(10_000)])
        mean = samples.mean(axis=0)
        se = samples.std(axis=0) / math.sqrt(len(samples))
        assert np.all(np.abs(mean - np.eye(dim) / dim) <= 3 * se + 1e-12)

    def test_haar_second_moment(self):
        # E|<0|psi>|^4 = 2 / (d (d + 1))
        rng = np.random.default_rng(59)
        x = np.array([abs(haar_pure(4, rng)[0, 0]) ** 2 for _ in range(10_000)])
        assert x.mean() == pytest.approx(2 / 20, abs=3 * x.std() / 100)

    @pytest.mark.parametrize("dim", [2, 4])
    def test_random_mixed_valid_and_full_rank(self, dim):
        rng = np.random.default_rng(61)
        for _ in range(10_000):
            rho = random_mixed(dim, rng)
            assert_density(rho)
        assert np.linalg.eigvalsh(rho)[0] > 0

    def test_hilbert_schmidt_qubit_statistics(self):
        # HS measure on a qubit is uniform in the Bloch ball: E r = 3/4, E lambda_max = 7/8
        rng = np.random.default_rng(67)
        lam = np.array([np.linalg.eigvalsh(random_mixed(2, rng))[-1] for _ in range(20_000)])
        r = 2 * lam - 1
        assert r.mean() == pytest.approx(0.75, abs=3 * r.std() / math.sqrt(len(r)))
        assert lam.mean() == pytest.approx(0.875, abs=3 * lam.std() / math.sqrt(len(lam)))

    def test_random_mixed_coherence_fills_range(self):
        rng = np.random.default_rng(71)
        c = np.array([rel_entropy_of_coherence(random_mixed(2, rng), np.eye(2)) for _ in range(5000)])
        hist, _ = np.histogram(c, bins=10, range=(0, math.log(2)))
        assert c.max() < math.log(2)
        assert np.all(hist[:-1] > 0)

    def test_bad_dimension(self):
        with pytest.raises(ValueError):
            haar_pure(3, 0)


class TestFamilies:
    def test_tags(self):
        assert {t.value for t in StateFamily} == {
            "diagonal", "max_coherent", "coherent_thermal", "red_boundary_1", "red_boundary_2",
            "haar_pure", "random_mixed", "work_max", "entropy_zero"}
        with pytest.raises(ValueError):
            family("bogus", {})

    def test_diagonal(self):
        assert np.array_equal(family("diagonal", {"a": 0.3}), np.diag([0.3, 0.7]))
        assert np.allclose(family("diagonal", {"pops": [0.1, 0.2, 0.3, 0.4]}), np.diag([0.1, 0.2, 0.3, 0.4]))
        with pytest.raises(ValueError):
            family("diagonal", {"a": 1.5})
        with pytest.raises(ValueError):
            family("diagonal", {"pops": [0.5, 0.6, 0.0, -0.1]})

    def test_max_coherent_half(self):
        rho = family("max_coherent", {"a": 0.5})
        assert rho[0, 1] == pytest.approx(0.5)
        assert np.linalg.matrix_rank(rho) == 1

    def test_max_coherent_is_pure(self):
        rng = np.random.default_rng(73)
        for _ in range(200):
            rho2 = family("max_coherent", {"a": rng.uniform(), "phase": rng.uniform(0, 6.28)})
            rho4 = family("max_coherent", {"pops": rng.dirichlet(np.ones(4)), "phases": rng.uniform(0, 6.28, 4)})
            assert von_neumann_entropy(rho2) == pytest.approx(0.0, abs=1e-10)
            assert von_neumann_entropy(rho4) == pytest.approx(0.0, abs=1e-10)

    def test_coherent_thermal_zero_coherence(self):
        rho = family("coherent_thermal", {"c_prime": 0.0, "model": SingleQubitModel()})
        assert np.allclose(rho, np.diag([T1, 1 - T1]), atol=1e-15)
        assert rel_entropy_of_coherence(rho, np.eye(2)) == 0.0

    def test_coherent_thermal_range(self):
        c_max = math.sqrt(T1 * (1 - T1))
        rho = family("coherent_thermal", {"c_prime": c_max, "model": SingleQubitModel()})
        assert abs(rho[0, 1]) == pytest.approx(c_max)
        assert purity(rho) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            family("coherent_thermal", {"c_prime": 1.01 * c_max, "model": SingleQubitModel()})

    def test_coherent_thermal_four_levels_keeps_gibbs_diagonal(self):
        p = states.final_thermal_populations(ISOTROPIC)
        rng = np.random.default_rng(79)
        for _ in range(500):
            rho = family("coherent_thermal", {"strength": rng.uniform(), "model": ISOTROPIC}, rng)
            assert_density(rho)
            assert np.allclose(np.diag(rho).real, p, atol=1e-15)

    @pytest.mark.parametrize("tag,pair", [("red_boundary_1", (0, 2)), ("red_boundary_2", (0, 1))])
    def test_red_pattern_and_coherence(self, tag, pair):
        i, j = pair
        for a in (0.05, 0.3, 0.5, 0.9):
            rho = family(tag, {"a": a})
            mask = np.zeros((4, 4), dtype=bool)
            mask[i, i] = mask[j, j] = mask[i, j] = mask[j, i] = True
            assert np.all(rho[~mask] == 0)
            assert np.count_nonzero(np.diag(rho)) == 2
            assert abs(rho[i, j]) == pytest.approx(math.sqrt(a - a * a))
            assert rel_entropy_of_coherence(rho, np.eye(4)) == pytest.approx(binary_entropy(a), abs=1e-9)

    @pytest.mark.parametrize("tag", [t.value for t in StateFamily])
    def test_every_family_yields_valid_states(self, tag):
        rng = np.random.default_rng(83)
        dim = 2 if tag in ("max_coherent", "diagonal") else 4
        for _ in range(10_000 if tag in ("haar_pure", "random_mixed") else 500):
            params = {
                "diagonal": {"a": rng.uniform()},
                "max_coherent": {"a": rng.uniform(), "phase": rng.uniform(0, 6.28)},
                "coherent_thermal": {"strength": rng.uniform(), "model": ISOTROPIC},
                "red_boundary_1": {"a": rng.uniform(), "fraction": rng.uniform()},
                "red_boundary_2": {"a": rng.uniform(), "phase": rng.uniform(0, 6.28)},
                "haar_pure": {"dim": dim},
                "random_mixed": {"dim": dim},
                "work_max": {"model": ISOTROPIC},
                "entropy_zero": {"model": ISOTROPIC},
            }[tag]
            assert_density(family(tag, params, rng))

    def test_seeded_reproducibility(self):
        for tag in ("haar_pure", "random_mixed"):
            assert np.array_equal(family(tag, {"dim": 4}, 99), family(tag, {"dim": 4}, 99))
        a = family("coherent_thermal", {"strength": 0.4, "model": ISOTROPIC}, 3)
        assert np.array_equal(a, family("coherent_thermal", {"strength": 0.4, "model": ISOTROPIC}, 3))


class TestSpecialStates:
    def test_isotropic(self):
        sp = special_states(ISOTROPIC)
        assert np.array_equal(sp.work_max, np.diag([0, 0, 1, 0]))
        assert sp.work_max_levels == (2,)
        w = np.exp([-2.0, -1.0, 1.0, 2.0])
        assert np.allclose(np.diag(sp.entropy_zero).real, w / w.sum(), atol=1e-15)

    def test_two_qubit_alias(self):
        a, b = states.special_states_two_qubit(ISOTROPIC), special_states(ISOTROPIC)
        assert np.array_equal(a.work_max, b.work_max) and np.array_equal(a.entropy_zero, b.entropy_zero)

    def test_tied_maximisers_are_all_reported(self):
        # no transverse coupling: every level shift is zero
        sp = special_states(TwoQubitModel(alpha=0.0, beta_aniso=0.0))
        assert sp.work_max_levels == (0, 1, 2, 3)
        assert np.array_equal(sp.work_max, np.diag([1, 0, 0, 0]))

    def test_populations_permuted_after_gamma_crossing(self):
        before = np.diag(special_states(TwoQubitModel(gamma_aniso=0.5)).entropy_zero).real
        after = np.diag(special_states(TwoQubitModel(gamma_aniso=2.0)).entropy_zero).real
        assert np.all(np.diff(before) > 0)
        assert not np.all(np.diff(after) > 0)
        assert after[3] < after[2]


def test_level_basis_round_trip():
    frame = build_eigenframe(models.schedule(ISOTROPIC), 101)
    rho = random_mixed(4, 3)
    assert np.allclose(states.lab_to_levels(states.levels_to_lab(rho, frame), frame), rho, atol=1e-14)
    # level 2 of the degenerate isotropic start is the triplet combination
    lab = states.levels_to_lab(np.diag([0, 1, 0, 0]).astype(complex), frame)
    triplet = np.array([0, 1, 1, 0]) / math.sqrt(2)
    assert np.allclose(lab, np.outer(triplet, triplet), atol=1e-12)
