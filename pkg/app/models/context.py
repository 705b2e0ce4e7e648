from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.models.algebra_element import AlgebraElement, Observable


@dataclass(frozen=True, eq=False)
class MeasurementContext:
    """Maximal commutative subalgebra 𝔔, held as a joint eigenbasis plus generators.

    Column ``i`` of ``basis`` is the joint eigenvector on which every generator
    takes the value ``generator_spectra[g, i]``. Contexts compare by identity.
    """

    basis: np.ndarray
    generators: Tuple[Observable, ...]
    generator_spectra: np.ndarray
    label: str

    def __post_init__(self):
        basis = np.array(self.basis, dtype=np.complex128, copy=True)
        spectra = np.array(self.generator_spectra, dtype=np.float64, copy=True)
        basis.setflags(write=False)
        spectra.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "generator_spectra", spectra)
        object.__setattr__(self, "generators", tuple(self.generators))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def generator_names(self) -> list[str]:
        return [g.label for g in self.generators]

    def transformed(self, element: AlgebraElement) -> np.ndarray:
        """basis† · A · basis."""
        return self.basis.conj().T @ element.entries @ self.basis

    def column(self, index: int) -> np.ndarray:
        return self.basis[:, index]

    def generator_values(self, index: int) -> list[tuple[str, float]]:
        return [(name, float(self.generator_spectra[g, index])) for g, name in enumerate(self.generator_names)]

    def __repr__(self):
        return f"<MeasurementContext {self.label} dim={self.dim}>"


@dataclass(frozen=True, eq=False)
class Character:
    """Multiplicative functional of one context: evaluation at a basis column."""

    context: MeasurementContext
    index: int

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return self.context is other.context and self.index == other.index

    def __hash__(self):
        return hash((id(self.context), self.index))

    def __repr__(self):
        return f"<Character {self.context.label}#{self.index}>"
