"""Unit tests for measurement contexts and their characters."""

import numpy as np
import pytest

from app.helper.error_handler import (
    DimensionMismatchError,
    IncompatibleGeneratorsError,
    NotInContextError,
    UsageError,
)
from app.helper.random_matrix import random_unitary
from app.models import Observable
from app.services import context_service as contexts


class TestContextFrom:
    """Tests for context_from."""

    def test_single_pauli(self, paulis):
        """Should put the +1 eigenvector |0⟩ at index 0 for σ_z."""
        ctx = contexts.context_from([paulis["sz"]])
        assert ctx.label == "ctx(sz)"
        assert ctx.generator_names == ["sz"]
        assert np.allclose(ctx.column(0), [1, 0], atol=1e-12)
        assert ctx.generator_values(0) == [("sz", 1.0)]
        assert ctx.generator_values(1) == [("sz", -1.0)]

    def test_degenerate_generator_is_completed(self):
        """Should complete diag(1,1,2) with one projector and reach commutant dimension 3."""
        ctx = contexts.context_from([Observable(np.diag([1.0, 1.0, 2.0]))])
        assert ctx.generator_names == ["G0", "P0"]
        assert contexts.commutant_dimension(ctx.generators) == 3
        assert np.allclose(np.abs(ctx.basis), np.eye(3), atol=1e-12)

    def test_commuting_generators(self, rng):
        """Should jointly diagonalize a commuting pair sharing an eigenbasis."""
        u = random_unitary(rng, 4)
        a = Observable(u @ np.diag([1.0, 1.0, 2.0, 2.0]) @ u.conj().T, name="A")
        b = Observable(u @ np.diag([0.0, 1.0, 0.0, 1.0]) @ u.conj().T, name="B")
        ctx = contexts.context_from([a, b])
        assert ctx.generator_names == ["A", "B"]
        assert contexts.contains(ctx, a)
        assert contexts.contains(ctx, b)
        assert contexts.commutant_dimension(ctx.generators) == 4

    def test_basis_is_unitary(self, rng):
        """Should return a unitary basis for random commuting sets."""
        u = random_unitary(rng, 5)
        a = Observable(u @ np.diag([3.0, 3.0, 3.0, -1.0, 0.5]) @ u.conj().T)
        ctx = contexts.context_from([a])
        assert np.linalg.norm(ctx.basis.conj().T @ ctx.basis - np.eye(5)) <= 1e-10
        assert contexts.commutant_dimension(ctx.generators) == 5

    def test_incompatible_generators(self, paulis):
        """Should reject σ_x with σ_z and name the pair."""
        with pytest.raises(IncompatibleGeneratorsError) as exc:
            contexts.context_from([paulis["sx"], paulis["sz"]])
        assert exc.value.pair == ("sx", "sz")
        assert exc.value.norm == pytest.approx(2 * np.sqrt(2))

    def test_empty_generating_set(self):
        """Should reject an empty generating set as a usage error."""
        with pytest.raises(UsageError):
            contexts.context_from([])

    def test_dimension_mismatch(self, paulis):
        """Should reject generators of different sizes."""
        with pytest.raises(DimensionMismatchError):
            contexts.context_from([paulis["sz"], Observable(np.eye(3))])

    def test_same_input_same_basis(self, rng):
        """Should be deterministic for equal input."""
        u = random_unitary(rng, 3)
        a = Observable(u @ np.diag([1.0, 1.0, 4.0]) @ u.conj().T)
        first = contexts.context_from([a])
        second = contexts.context_from([a])
        assert np.array_equal(first.basis, second.basis)
        assert first is not second


class TestRotatedContext:
    """Tests for the one-parameter family 𝔔_α."""

    def test_endpoints(self, paulis):
        """Should contain σ_x at α=0 and σ_z at α=π/2."""
        assert contexts.contains(contexts.rotated_context(paulis["sx"], paulis["sz"], 0.0), paulis["sx"])
        assert contexts.contains(contexts.rotated_context(paulis["sx"], paulis["sz"], np.pi / 2), paulis["sz"])

    def test_continuity(self, paulis):
        """Should move each basis column only slightly for a small change of α."""
        first = contexts.rotated_context(paulis["sx"], paulis["sz"], 0.3)
        second = contexts.rotated_context(paulis["sx"], paulis["sz"], 0.301)
        overlaps = np.abs(first.basis.conj().T @ second.basis)
        assert np.all(overlaps.max(axis=1) > 0.99)

    @pytest.mark.parametrize("alpha", [0.0, 0.3, np.pi / 4])
    def test_columns_track_small_step(self, paulis, alpha):
        """Should match column i to column i with overlap above 0.99 across a step of 1e-3."""
        first = contexts.rotated_context(paulis["sx"], paulis["sz"], alpha)
        second = contexts.rotated_context(paulis["sx"], paulis["sz"], alpha + 1e-3)
        overlaps = np.abs(first.basis.conj().T @ second.basis)
        assert np.all(np.diag(overlaps) > 0.99)
        assert np.allclose(first.generator_spectra, second.generator_spectra, atol=1e-2)

    def test_columns_follow_first_observable(self, paulis):
        """Should order the α = 0 columns like the context of A₁."""
        home = contexts.context_from([paulis["sx"]])
        rotated = contexts.rotated_context(paulis["sx"], paulis["sz"], 0.0)
        assert np.allclose(np.abs(home.basis.conj().T @ rotated.basis), np.eye(2), atol=1e-10)

    def test_chained_path(self, paulis):
        """Should keep every step of a path continuous when chained to the previous context."""
        previous = contexts.rotated_context(paulis["sx"], paulis["sz"], 0.0)
        for alpha in np.linspace(0.05, np.pi, 40):
            current = contexts.rotated_context(paulis["sx"], paulis["sz"], alpha, reference=previous)
            assert np.all(np.diag(np.abs(previous.basis.conj().T @ current.basis)) > 0.99)
            previous = current

    def test_aligned_to_keeps_characters(self, paulis):
        """Should permute basis and generator values together."""
        home = contexts.context_from([paulis["sx"]])
        b = Observable(np.cos(1e-3) * paulis["sx"].entries + np.sin(1e-3) * paulis["sz"].entries, name="b")
        aligned = contexts.aligned_to(contexts.context_from([b]), home)
        assert np.all(np.diag(np.abs(home.basis.conj().T @ aligned.basis)) > 0.99)
        assert list(aligned.generator_spectra[0]) == pytest.approx(list(contexts.diagonal_of(aligned, b)))
        expected = contexts.diagonal_of(home, paulis["sx"])
        assert list(aligned.generator_spectra[0]) == pytest.approx(list(expected), abs=1e-2)

    def test_generator_name(self, paulis):
        """Should name the generator after α."""
        ctx = contexts.rotated_context(paulis["sx"], paulis["sz"], 0.5)
        assert ctx.generator_names == ["B(0.5)"]


class TestCharacters:
    """Tests for characters_of, evaluate and spectrum_in_context."""

    def test_one_character_per_column(self, paulis):
        """Should return n characters, cached per context."""
        ctx = contexts.context_from([paulis["sz"]])
        characters = contexts.characters_of(ctx)
        assert len(characters) == 2
        assert contexts.characters_of(ctx) is characters

    def test_evaluate_pauli(self, paulis):
        """Should evaluate σ_z to +1 at index 0 and the zero matrix to 0."""
        ctx = contexts.context_from([paulis["sz"]])
        chi = contexts.characters_of(ctx)[0]
        assert contexts.evaluate(chi, paulis["sz"]) == pytest.approx(1.0)
        assert contexts.evaluate(chi, paulis["I"]) == pytest.approx(1.0)
        assert contexts.evaluate(chi, Observable(np.zeros((2, 2)))) == 0.0

    def test_evaluate_outside_context(self, paulis):
        """Should refuse to evaluate σ_x on a character of ctx(σ_z)."""
        ctx = contexts.context_from([paulis["sz"]])
        with pytest.raises(NotInContextError):
            contexts.evaluate(contexts.characters_of(ctx)[0], paulis["sx"])

    def test_multiplicative_and_linear(self, rng):
        """Should satisfy χ(AB) = χ(A)χ(B) and χ(A + cB) = χ(A) + cχ(B) inside a context."""
        u = random_unitary(rng, 4)
        a = Observable(u @ np.diag([0.1, 0.7, -2.0, 3.3]) @ u.conj().T)
        b = Observable(a.entries @ a.entries - 2 * a.entries)
        ctx = contexts.context_from([a])
        for chi in contexts.characters_of(ctx):
            assert contexts.evaluate(chi, Observable((a @ b).entries)) == pytest.approx(
                contexts.evaluate(chi, a) * contexts.evaluate(chi, b), abs=1e-10
            )
            assert contexts.evaluate(chi, a + b * 1.5) == pytest.approx(
                contexts.evaluate(chi, a) + 1.5 * contexts.evaluate(chi, b), abs=1e-10
            )

    def test_spectrum_in_context(self):
        """Should agree with the global spectrum."""
        generator = Observable(np.diag([1.0, 1.0, 2.0]))
        ctx = contexts.context_from([generator])
        assert contexts.spectrum_in_context(ctx, generator) == pytest.approx([1.0, 2.0])

    def test_values_lie_in_spectrum(self, rng):
        """Should attain every spectral point and nothing else."""
        u = random_unitary(rng, 3)
        a = Observable(u @ np.diag([-1.0, 0.5, 2.0]) @ u.conj().T)
        ctx = contexts.context_from([a])
        values = sorted(contexts.evaluate(chi, a) for chi in contexts.characters_of(ctx))
        assert values == pytest.approx([-1.0, 0.5, 2.0], abs=1e-10)


class TestStructure:
    """Tests for commutant dimension, overlap classes and dumps."""

    def test_commutant_of_degenerate_generator(self):
        """Should find a commutant larger than n before completion."""
        assert contexts.commutant_dimension([Observable(np.diag([1.0, 1.0, 2.0]))]) == 5

    def test_overlap_classes_of_complementary_contexts(self, paulis):
        """Should join every column of ctx(σ_z) and ctx(σ_x) into one class."""
        first, second = contexts.overlap_classes(
            contexts.context_from([paulis["sz"]]), contexts.context_from([paulis["sx"]])
        )
        assert len(set(first) | set(second)) == 1

    def test_overlap_classes_of_equal_bases(self, paulis):
        """Should keep a class per column when bases coincide."""
        first, second = contexts.overlap_classes(
            contexts.context_from([paulis["sz"]]), contexts.context_from([paulis["sz"]])
        )
        assert list(first) == list(second)
        assert len(set(first)) == 2

    def test_dump_context(self, paulis):
        """Should serialize basis, spectra and commutant dimension."""
        dump = contexts.dump_context(contexts.context_from([paulis["sz"]]))
        assert dump.dim == 2
        assert dump.generators == ["sz"]
        assert dump.spectra == {"sz": [1.0, -1.0]}
        assert dump.commutant_dimension == 2
