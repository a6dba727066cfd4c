"""Tests for the shooting eigenvalue solver."""

import math
from fractions import Fraction

import numpy as np
import pytest

from qm_jeopardy.errors import DomainError, NotAnEigenvalueError
from qm_jeopardy.model import DeltaPotential, WellConfig, make_potential
from qm_jeopardy.spectrum import (
    SERIES_THRESHOLD,
    count_nodes,
    default_scan_window,
    eigenstate_samples,
    find_eigenvalues,
    propagate,
    shoot,
    transfer_coefficients,
)

PI2 = math.pi**2


class TestTransferCoefficients:
    def test_oscillatory(self) -> None:
        c, s = transfer_coefficients(4.0, 0.5, 1.0)
        assert abs(c - math.cos(1.0)) < 1e-15
        assert abs(s - math.sin(1.0) / 2) < 1e-15

    def test_tunnelling(self) -> None:
        c, s = transfer_coefficients(-1.0, 1.0, 1.0)
        assert abs(c - math.cosh(1.0)) < 1e-14
        assert abs(s - math.sinh(1.0)) < 1e-14

    def test_zero_energy_is_free_motion(self) -> None:
        c, s = transfer_coefficients(0.0, 2.0, 1.0)
        assert c == 1.0
        assert s == 2.0

    @pytest.mark.parametrize("factor", [0.999, 1.001, -0.999, -1.001])
    def test_accurate_on_both_sides_of_series_switch(self, factor: float) -> None:
        energy = SERIES_THRESHOLD * factor
        k = math.sqrt(abs(energy))
        if energy > 0:
            expected = (math.cos(k), math.sin(k) / k)
        else:
            expected = (math.cosh(k), math.sinh(k) / k)
        c, s = transfer_coefficients(energy, 1.0, 1.0)
        assert abs(c - expected[0]) < 1e-15
        assert abs(s - expected[1]) < 1e-15

    def test_vectorised_over_energy(self) -> None:
        c, s = transfer_coefficients(np.array([-1.0, 0.0, 1.0]), 1.0, 1.0)
        assert c.shape == (3,)
        assert s.shape == (3,)


class TestShoot:
    def test_bare_well_at_zero_energy(self, bare_well: DeltaPotential) -> None:
        assert shoot(0.0, bare_well) == 2.0

    def test_tuned_spike_at_zero_energy(self, tuned_spike: DeltaPotential) -> None:
        assert abs(shoot(0.0, tuned_spike)) < 1e-15

    def test_bare_well_eigenvalue_root(self, bare_well: DeltaPotential) -> None:
        assert abs(shoot(PI2 / 4, bare_well)) < 1e-12

    def test_array_input(self, bare_well: DeltaPotential) -> None:
        values = shoot(np.array([0.0, PI2 / 4]), bare_well)
        assert isinstance(values, np.ndarray)
        assert values[0] == 2.0

    def test_propagate_visits_every_spike(self, v2: DeltaPotential) -> None:
        states = propagate(0.0, v2)
        assert len(states) == len(v2.spikes) + 2
        assert abs(states[-1].psi) < 1e-14
        # psi just right of the first spike is the M-state knot value 2/3
        assert abs(states[1].psi - 2 / 3) < 1e-15

    def test_generated_solutions_close_at_zero_energy(self, generated_problems) -> None:
        for problem in generated_problems:
            assert abs(shoot(0.0, problem.solution)) < 1e-12, problem.id

    @pytest.mark.parametrize("seed", range(20))
    def test_continuous_across_zero_energy(self, seed: int) -> None:
        rng = np.random.default_rng(seed)
        positions = np.sort(rng.uniform(-0.9, 0.9, 3))
        coefficients = rng.uniform(-3.0, 3.0, 3)
        potential = make_potential(zip(positions.tolist(), coefficients.tolist(), strict=True))
        # f is smooth, so the jump over [-eps, eps] is 2 eps f'(0) up to O(eps^3)
        slope = (shoot(1e-3, potential) - shoot(-1e-3, potential)) / 2e-3
        jump = shoot(1e-9, potential) - shoot(-1e-9, potential)
        assert abs(jump) < 1e-8 * max(1.0, abs(slope))

    def test_continuous_across_zero_energy_tuned(self, tuned_spike: DeltaPotential) -> None:
        assert abs(shoot(1e-9, tuned_spike) - shoot(-1e-9, tuned_spike)) < 1e-8


class TestFindEigenvalues:
    def test_bare_well_levels(self, bare_well: DeltaPotential) -> None:
        result = find_eigenvalues(bare_well)
        expected = [PI2 / 4, PI2, 9 * PI2 / 4]
        for eigenvalue, energy in zip(result.eigenvalues[:3], expected, strict=True):
            assert abs(eigenvalue.energy - energy) / energy < 1e-8
        assert [e.nodes for e in result.eigenvalues[:3]] == [0, 1, 2]
        assert result.sturm_ordered
        assert result.failures == []

    def test_tuned_spike_has_zero_energy_ground_state(self, tuned_spike: DeltaPotential) -> None:
        result = find_eigenvalues(tuned_spike, -5.0, 15.0)
        assert len(result.eigenvalues) == 2
        ground, excited = result.eigenvalues
        assert abs(ground.energy) < 1e-8
        assert ground.nodes == 0
        assert abs(excited.energy - PI2) < 1e-8
        assert excited.nodes == 1

    @pytest.mark.parametrize("coefficient", ["-202/100", "-198/100"])
    def test_detuning_moves_the_ground_state(self, coefficient: str) -> None:
        result = find_eigenvalues(make_potential([(0, coefficient)]), -5.0, 15.0)
        assert abs(result.eigenvalues[0].energy) > 1e-3

    def test_overtuned_spike_binds(self) -> None:
        result = find_eigenvalues(make_potential([(0, "-5/2")]), -5.0, 15.0)
        ground = result.eigenvalues[0]
        assert ground.energy < 0
        assert ground.nodes == 0

    def test_samples_are_scaled(self, bare_well: DeltaPotential) -> None:
        eigenvalue = find_eigenvalues(bare_well).eigenvalues[0]
        assert len(eigenvalue.samples) == 4097
        assert max(abs(p) for _, p in eigenvalue.samples) == pytest.approx(1.0)

    def test_empty_window_rejected(self, bare_well: DeltaPotential) -> None:
        with pytest.raises(DomainError):
            find_eigenvalues(bare_well, 5.0, 5.0)

    def test_grid_too_small_rejected(self, bare_well: DeltaPotential) -> None:
        with pytest.raises(DomainError):
            find_eigenvalues(bare_well, 0.0, 10.0, grid_n=1)

    def test_narrow_well_converges_at_high_energy(self) -> None:
        # Float spacing near 1e6 is wider than the 1e-12 bisection tolerance
        potential = make_potential([], WellConfig(Fraction(0), Fraction(1, 100)))
        result = find_eigenvalues(potential, node_intervals=256)
        assert result.failures == []
        expected = [n * n * PI2 * 1e4 for n in range(1, 5)]
        assert len(result.eigenvalues) == 4
        for eigenvalue, energy in zip(result.eigenvalues, expected, strict=True):
            assert abs(eigenvalue.energy - energy) / energy < 1e-10
        assert result.sturm_ordered

    @pytest.mark.parametrize("potential_name", ["bare_well", "tuned_spike", "v2"])
    def test_halving_the_grid_step_keeps_the_eigenvalues(
        self, potential_name: str, request: pytest.FixtureRequest
    ) -> None:
        potential = request.getfixturevalue(potential_name)
        coarse = find_eigenvalues(potential, grid_n=2000, node_intervals=64)
        fine = find_eigenvalues(potential, grid_n=3999, node_intervals=64)
        assert len(coarse.eigenvalues) == len(fine.eigenvalues) > 0
        for a, b in zip(coarse.energies, fine.energies, strict=True):
            assert abs(a - b) <= coarse.tol

    def test_default_window_follows_the_well(self) -> None:
        config = WellConfig(Fraction(0), Fraction(4), Fraction(2))
        assert default_scan_window(config) == (-5.0, 20.0)


class TestEigenstateSamples:
    def test_tuned_spike_at_zero_energy_is_the_tent(self, tuned_spike: DeltaPotential) -> None:
        samples = eigenstate_samples(tuned_spike, 0.0)
        assert max(abs(psi - (1 - abs(x))) for x, psi in samples) < 1e-10

    def test_bare_well_ground_state(self, bare_well: DeltaPotential) -> None:
        samples = eigenstate_samples(bare_well, PI2 / 4)
        assert len(samples) == 4097
        assert samples[0] == (-1.0, 0.0)
        assert samples[-1] == (1.0, 0.0)
        middle = samples[2048]
        assert middle[0] == 0.0
        assert abs(middle[1] - 1.0) < 1e-12

    def test_spike_positions_are_sampled(self) -> None:
        potential = make_potential([("1/3", -1)])
        samples = eigenstate_samples(potential, find_eigenvalues(potential).energies[0])
        assert len(samples) == 4098
        assert 1 / 3 in [x for x, _ in samples]

    def test_not_an_eigenvalue(self, bare_well: DeltaPotential) -> None:
        with pytest.raises(NotAnEigenvalueError):
            eigenstate_samples(bare_well, 5.0)

    def test_too_few_samples(self, bare_well: DeltaPotential) -> None:
        with pytest.raises(DomainError):
            eigenstate_samples(bare_well, PI2 / 4, n_samples=1)


class TestCountNodes:
    def test_sine_samples(self) -> None:
        xs = np.linspace(0.0, 1.0, 1001)
        for n in range(1, 5):
            samples = np.column_stack((xs, np.sin(n * np.pi * xs)))
            assert count_nodes(samples) == n - 1

    def test_node_on_a_sample_counted_once(self) -> None:
        samples = np.array([[0.0, 0.0], [0.25, 1.0], [0.5, 0.0], [0.75, -1.0], [1.0, 0.0]])
        assert count_nodes(samples) == 1
