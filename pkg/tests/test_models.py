"""Unit tests for the canned models, model files and name resolution."""

import json

import numpy as np
import pytest

from app.helper.error_handler import InvalidDimensionError, ModelFormatError, UnknownNameError
from app.services import model_service as models
from app.services.algebra_service import spectral_points
from app.services.ensemble_service import expectation


class TestCannedModels:
    """Tests for the qubit, singlet and oscillator models."""

    def test_qubit(self, qubit_model):
        """Should expose the Pauli observables and six axis states."""
        assert qubit_model.dim == 2
        assert {"I", "sx", "sy", "sz", "sxz"} <= set(qubit_model.observables)
        assert qubit_model.states["sx-"] == "sx=-1"

    def test_singlet_total_spin(self, singlet_model):
        """Should give the singlet zero total spin and antisymmetry."""
        psi = models.resolve_state(singlet_model, "singlet")
        assert expectation(psi, singlet_model.observables["total_sz"]) == pytest.approx(0.0, abs=1e-12)
        assert expectation(psi, singlet_model.observables["swap"]) == pytest.approx(-1.0)

    def test_oscillator_commutator_block(self):
        """Should give [X, P] = i𝕀 away from the truncation edge."""
        model = models.build_oscillator_model(8)
        x, p = model.observables["X"].entries, model.observables["P"].entries
        commutator = x @ p - p @ x
        assert np.allclose(commutator[:7, :7], 1j * np.eye(7), atol=1e-12)

    def test_two_levels(self):
        """Should give N = diag(0, 1) and σ(H) = {0.5, 1.5}."""
        model = models.build_oscillator_model(2)
        assert np.allclose(model.observables["N"].entries, np.diag([0, 1]))
        assert spectral_points(model.observables["H"]) == pytest.approx([0.5, 1.5])

    def test_oscillator_ground_state(self):
        """Should give ⟨X⟩ = 0, ⟨X²⟩ = 1/2 and ⟨H⟩ = 1/2 in the ground state."""
        model = models.build_oscillator_model(6)
        psi = models.resolve_state(model, "ground")
        x = model.observables["X"]
        assert expectation(psi, x) == pytest.approx(0.0, abs=1e-12)
        assert expectation(psi, x @ x).real == pytest.approx(0.5)
        assert expectation(psi, model.observables["H"]).real == pytest.approx(0.5)

    def test_oscillator_too_small(self):
        """Should reject fewer than two levels."""
        with pytest.raises(InvalidDimensionError):
            models.build_oscillator_model(1)

    def test_get_model(self):
        """Should resolve names and reject unknown ones."""
        assert models.get_model("oscillator", 4).dim == 4
        with pytest.raises(UnknownNameError):
            models.get_model("lattice")

    def test_list_models(self):
        """Should summarize every canned model."""
        summaries = models.list_models()
        assert [s.name for s in summaries] == ["qubit", "singlet", "oscillator"]
        assert "swap" in summaries[1].observables


class TestModelFile:
    """Tests for load_model_file."""

    def test_load(self, tmp_path):
        """Should read observables and states from JSON."""
        path = tmp_path / "pair.json"
        path.write_text(
            json.dumps(
                {
                    "dim": 2,
                    "observables": {"Z": {"re": [[1, 0], [0, -1]]}, "Y": {"re": [[0, 0], [0, 0]], "im": [[0, -1], [1, 0]]}},
                    "states": {"up": "Z=1"},
                }
            )
        )
        model = models.get_model(str(path))
        assert model.name == "pair"
        psi = models.resolve_state(model, "up")
        assert expectation(psi, model.observables["Z"]) == pytest.approx(1.0)

    def test_non_hermitian(self, tmp_path):
        """Should reject a non-Hermitian observable."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim": 2, "observables": {"R": {"re": [[0, 1], [0, 0]]}}}))
        with pytest.raises(ModelFormatError):
            models.load_model_file(path)

    def test_wrong_shape(self, tmp_path):
        """Should reject entries that do not match dim."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim": 3, "observables": {"Z": {"re": [[1, 0], [0, -1]]}}}))
        with pytest.raises(ModelFormatError):
            models.load_model_file(path)

    def test_missing_file(self, tmp_path):
        """Should report unreadable files as format errors."""
        with pytest.raises(ModelFormatError):
            models.load_model_file(tmp_path / "absent.json")


class TestParsing:
    """Tests for parse_observable, parse_label, resolve_state and resolve_angles."""

    def test_plain_name(self, qubit_model):
        """Should return the named observable itself."""
        assert models.parse_observable(qubit_model, "sz") is qubit_model.observables["sz"]

    def test_linear_combination(self, qubit_model):
        """Should build 0.5σ_x − σ_z + 2𝕀."""
        observable = models.parse_observable(qubit_model, "0.5*sx - sz + 2")
        expected = 0.5 * models.SIGMA_X - models.SIGMA_Z + 2 * np.eye(2)
        assert np.allclose(observable.entries, expected)
        assert observable.name == "0.5*sx-sz+2"

    def test_unknown_observable(self, qubit_model):
        """Should reject unknown names and malformed expressions."""
        for expression in ("sw", "sx sz", ""):
            with pytest.raises(UnknownNameError):
                models.parse_observable(qubit_model, expression)

    def test_parse_label(self, singlet_model):
        """Should split a label expression into values."""
        assert models.parse_label(singlet_model, "total_sz=0,swap=-1") == {"total_sz": 0.0, "swap": -1.0}
        with pytest.raises(UnknownNameError):
            models.parse_label(singlet_model, "total_sz")

    def test_literal_label(self, qubit_model):
        """Should accept a literal label in place of a state name."""
        psi = models.resolve_state(qubit_model, "sx=-1")
        assert expectation(psi, qubit_model.observables["sx"]) == pytest.approx(-1.0)

    def test_unknown_state(self, qubit_model):
        """Should reject state names the model does not define."""
        with pytest.raises(UnknownNameError):
            models.resolve_state(qubit_model, "spin-up")

    def test_angles(self):
        """Should resolve presets and explicit radians."""
        assert models.resolve_angles("canonical") == pytest.approx((0.0, np.pi / 2, np.pi / 4, 3 * np.pi / 4))
        assert models.resolve_angles([0, 1, 2, 3]) == (0.0, 1.0, 2.0, 3.0)
        with pytest.raises(UnknownNameError):
            models.resolve_angles("tilted")
