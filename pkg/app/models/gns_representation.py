from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from app.models.algebra_element import AlgebraElement
from app.models.quantum_state import QuantumState


@dataclass(frozen=True, eq=False)
class GnsRepresentation:
    """Hilbert-space data built from a state Ψ by the GNS construction.

    Coefficient space is spanned by the matrix units E_ij in row-major order.
    ``quotient_basis`` columns are coefficient vectors orthonormal for
    ⟨X, Y⟩ = Ψ(X*Y); the null space of the Gram matrix has been dropped.
    Completion in norm is the identity in finite dimension.
    """

    source_state: QuantumState
    gram: np.ndarray
    quotient_basis: np.ndarray
    cyclic_vector: np.ndarray

    def __post_init__(self):
        for attr in ("gram", "quotient_basis", "cyclic_vector"):
            value = np.array(getattr(self, attr), dtype=np.complex128, copy=True)
            value.setflags(write=False)
            object.__setattr__(self, attr, value)

    @property
    def algebra_dim(self) -> int:
        return self.source_state.dim

    @property
    def quotient_dimension(self) -> int:
        return self.quotient_basis.shape[1]

    def represent(self, element: AlgebraElement) -> np.ndarray:
        """π(R) on the quotient: ⟨e_k, R e_l⟩ = e_k† (R ⊗ ρᵀ) e_l."""
        rho = self.source_state.density
        left_action = np.kron(element.entries, rho.T)
        return self.quotient_basis.conj().T @ left_action @ self.quotient_basis

    @property
    def represented(self) -> dict[tuple[int, int], np.ndarray]:
        """π(E_ij) for every matrix unit, keyed by (i, j)."""
        n = self.algebra_dim
        images = {}
        for i in range(n):
            for j in range(n):
                unit = np.zeros((n, n), dtype=np.complex128)
                unit[i, j] = 1.0
                images[(i, j)] = self.represent(AlgebraElement(unit))
        return images
