"""Unit tests for empirical frequencies, means and the average gate."""

import itertools

import numpy as np
import pytest

from app.helper.error_handler import EmptySampleError, InvalidSampleSizeError
from app.services import statistics_service as statistics
from app.services.ensemble_service import draw_relevant_set
from app.services.model_service import resolve_state
from app.services.physical_state_service import relevant_values


class TestEmpirical:
    """Tests for empirical_mean, empirical_event_frequency and doubling_trail."""

    def test_mean(self):
        """Should average ±1 samples."""
        assert statistics.empirical_mean([1, -1, 1, 1]) == 0.5

    def test_mean_empty(self):
        """Should reject an empty sample."""
        with pytest.raises(EmptySampleError):
            statistics.empirical_mean([])

    def test_event_frequency(self):
        """Should count samples at or below the threshold."""
        assert statistics.empirical_event_frequency([1, -1, 1, 1], 0) == 0.25
        assert statistics.empirical_event_frequency([1, -1, 1, 1], 1) == 1.0

    def test_trail_checkpoints(self):
        """Should report powers of two and the full size."""
        trail = statistics.doubling_trail(np.ones(10))
        assert [point.n for point in trail] == [1, 2, 4, 8, 10]
        assert all(point.mean == 1.0 for point in trail)


class TestVerifyQuantumAverage:
    """Tests for verify_quantum_average."""

    def test_eigenstate_is_exact(self, qubit_model):
        """Should reproduce σ_z = 1 in its own eigenstate with zero deviation."""
        psi = resolve_state(qubit_model, "sz+")
        report = statistics.verify_quantum_average(psi, qubit_model.observables["sz"], 1000, seed=7)
        assert report.empirical_mean == pytest.approx(1.0)
        assert report.deviation == pytest.approx(0.0, abs=1e-12)
        assert report.passed

    def test_complementary_observable(self, qubit_model):
        """Should converge to Ψ(σ_x) = 0 within 0.03 for n = 10⁴."""
        psi = resolve_state(qubit_model, "sz+")
        report = statistics.verify_quantum_average(psi, qubit_model.observables["sx"], 10_000, seed=7)
        assert report.target == pytest.approx(0.0, abs=1e-12)
        assert report.sigma_max == pytest.approx(1.0)
        assert report.bound == pytest.approx(0.03)
        assert report.passed
        assert report.trail[-1].n == 10_000
        assert report.trail[-1].mean == pytest.approx(report.empirical_mean)

    def test_tilted_axis(self, qubit_model):
        """Should target 1/√2 for the tilted spin."""
        psi = resolve_state(qubit_model, "sz+")
        report = statistics.verify_quantum_average(psi, qubit_model.observables["sxz"], 5000, seed=11)
        assert report.target == pytest.approx(1 / np.sqrt(2))
        assert report.passed

    def test_reproducible(self, qubit_model):
        """Should give bit-identical means for equal seed and partitions."""
        psi = resolve_state(qubit_model, "sz+")
        sx = qubit_model.observables["sx"]
        first = statistics.verify_quantum_average(psi, sx, 2000, seed=3, partitions=4)
        second = statistics.verify_quantum_average(psi, sx, 2000, seed=3, partitions=4)
        assert first.empirical_mean == second.empirical_mean
        assert first.trail == second.trail

    def test_samples_out(self, qubit_model):
        """Should hand back one (trial id, value) row per trial."""
        psi = resolve_state(qubit_model, "sz+")
        rows = []
        statistics.verify_quantum_average(psi, qubit_model.observables["sx"], 200, seed=1, samples_out=rows)
        assert len(rows) == 200
        assert len({trial_id for trial_id, _ in rows}) == 200

    def test_too_few_samples(self, qubit_model):
        """Should reject n below the minimum."""
        psi = resolve_state(qubit_model, "sz+")
        with pytest.raises(InvalidSampleSizeError):
            statistics.verify_quantum_average(psi, qubit_model.observables["sx"], 99, seed=7)


QUBIT_PAIRS = list(itertools.product(("sz+", "sz-", "sx+", "sx-", "sy+", "sy-"), ("sx", "sy", "sz", "sxz")))[:20]


@pytest.mark.slow
class TestConvergenceAtScale:
    """Full-size convergence runs on the qubit model."""

    def test_event_frequency_of_complementary_spin(self, qubit_model):
        """Should give P(σ_x ≤ 0) within 0.015 of 1/2 over 10⁴ trials in σ_z = +1."""
        psi = resolve_state(qubit_model, "sz+")
        sx = qubit_model.observables["sx"]
        samples = relevant_values(draw_relevant_set(psi, sx, 10_000, seed=7), sx)
        assert statistics.empirical_event_frequency(samples, 0.0) == pytest.approx(0.5, abs=0.015)

    @pytest.mark.parametrize("state,observable", [("sz+", "sx"), ("sx+", "sxz"), ("sy-", "sz")])
    def test_event_frequency_at_largest_sample(self, qubit_model, state, observable):
        """Should count every sample at or below the largest one."""
        a = qubit_model.observables[observable]
        samples = relevant_values(draw_relevant_set(resolve_state(qubit_model, state), a, 5000, seed=13), a)
        assert statistics.empirical_event_frequency(samples, float(np.max(samples))) == 1.0

    def test_twenty_qubit_pairs(self, qubit_model):
        """Should pass the 3σ gate in at least 19 of 20 state and observable pairs at n = 10⁴."""
        passed = [
            statistics.verify_quantum_average(
                resolve_state(qubit_model, state), qubit_model.observables[observable], 10_000, seed=k
            ).passed
            for k, (state, observable) in enumerate(QUBIT_PAIRS)
        ]
        assert len(passed) == 20
        assert sum(passed) >= 19

    def test_pass_rate_over_seeds(self, qubit_model):
        """Should pass the 3σ gate for at least 95 of 100 seeds."""
        psi = resolve_state(qubit_model, "sz+")
        sx = qubit_model.observables["sx"]
        passed = [statistics.verify_quantum_average(psi, sx, 1000, seed=seed).passed for seed in range(100)]
        assert sum(passed) >= 95
