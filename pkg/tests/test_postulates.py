"""Tests for the randomized invariant suite."""

import pytest

from app.services import postulate_service


class TestPostulateSuite:
    """Tests for run_postulate_suite."""

    def test_small_run_passes(self):
        """Should pass every named check on small algebras."""
        report = postulate_service.run_postulate_suite(dims=[2, 3], trials=3, seed=7)
        failed = [check.name for check in report.checks if not check.passed]
        assert failed == []
        assert report.passed
        assert report.dims == [2, 3]

    def test_named_checks(self):
        """Should report every invariant by name."""
        report = postulate_service.run_postulate_suite(dims=[2], trials=1, seed=1)
        names = {check.name for check in report.checks}
        assert {
            "associativity",
            "maximality",
            "multiplicativity",
            "born consistency",
            "c-star identity",
            "gns state recovery",
            "nonadditivity across contexts",
        } <= names
        assert len(names) == len(report.checks)

    def test_reproducible(self):
        """Should serialize identically for equal seeds."""
        first = postulate_service.run_postulate_suite(dims=[2, 4], trials=2, seed=5)
        second = postulate_service.run_postulate_suite(dims=[2, 4], trials=2, seed=5)
        assert first.model_dump_json() == second.model_dump_json()

    def test_larger_algebra(self):
        """Should pass on M_8."""
        assert postulate_service.run_postulate_suite(dims=[8], trials=2, seed=3).passed

    def test_gns_cadence(self):
        """Should still verify GNS when most trials skip it."""
        report = postulate_service.run_postulate_suite(dims=[3], trials=postulate_service.GNS_EVERY + 1, seed=2)
        gns_checks = [check for check in report.checks if check.name.startswith("gns")]
        assert len(gns_checks) == 3
        assert all(check.passed for check in gns_checks)

    def test_character_evaluation(self):
        """Should report character values consistent with the context diagonals."""
        report = postulate_service.run_postulate_suite(dims=[4], trials=2, seed=9)
        (check,) = [check for check in report.checks if check.name == "character evaluation"]
        assert check.passed
        assert check.max_defect <= 1e-12

    @pytest.mark.slow
    def test_default_suite(self):
        """Should pass dims 2 to 8 with 50 trials each."""
        report = postulate_service.run_postulate_suite(seed=7)
        failed = [check.name for check in report.checks if not check.passed]
        assert failed == []
        assert report.dims == list(postulate_service.DEFAULT_DIMS)
        assert report.trials == 50
