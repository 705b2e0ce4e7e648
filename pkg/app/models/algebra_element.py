from __future__ import annotations

import hashlib
import numbers
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from app.helper.error_handler import (
    DimensionMismatchError,
    InvalidDimensionError,
    NonFiniteEntriesError,
    NonHermitianError,
)
from app.helper.tolerance import FINGERPRINT_GRID, HERMITICITY_TOL


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Element R of the finite-dimensional *-algebra M_n, stored as its matrix.

    Entries are copied into a read-only complex array, so an element never
    changes after construction and may be shared between threads.
    """

    entries: np.ndarray
    name: Optional[str] = field(default=None)

    # numpy scalars defer to the reflected operators below
    __array_ufunc__ = None

    def __post_init__(self):
        matrix = np.array(self.entries, dtype=np.complex128, copy=True)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
            raise InvalidDimensionError(matrix.shape)
        if not np.isfinite(matrix).all():
            raise NonFiniteEntriesError(self.name)
        matrix.setflags(write=False)
        object.__setattr__(self, "entries", matrix)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def label(self) -> str:
        return self.name or f"R[{self.dim}x{self.dim}]"

    @cached_property
    def fingerprint(self) -> str:
        """Hash of the entries rounded to FINGERPRINT_GRID; stable under float noise."""
        grid = np.rint(self.entries / FINGERPRINT_GRID)
        # +0.0 folds -0.0 into 0.0
        payload = np.concatenate([grid.real.ravel(), grid.imag.ravel()]) + 0.0
        digest = hashlib.sha1(f"{self.dim}:".encode())
        digest.update(payload.astype(np.int64).tobytes())
        return digest.hexdigest()[:16]

    @property
    def hermiticity_defect(self) -> float:
        return float(np.linalg.norm(self.entries - self.entries.conj().T))

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return self.hermiticity_defect <= tol

    def star(self) -> AlgebraElement:
        """Involution R ↦ R*."""
        name = f"{self.name}*" if self.name else None
        return _promote(self.entries.conj().T, name, hermitian=isinstance(self, Observable))

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.entries))

    def allclose(self, other: AlgebraElement, tol: float) -> bool:
        _check_dims(self, other)
        return float(np.linalg.norm(self.entries - other.entries)) <= tol

    def named(self, name: str) -> AlgebraElement:
        return type(self)(self.entries, name=name)

    # arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        _check_dims(self, other)
        both = isinstance(self, Observable) and isinstance(other, Observable)
        return _promote(self.entries + other.entries, None, hermitian=both)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        _check_dims(self, other)
        both = isinstance(self, Observable) and isinstance(other, Observable)
        return _promote(self.entries - other.entries, None, hermitian=both)

    def __neg__(self):
        return _promote(-self.entries, None, hermitian=isinstance(self, Observable))

    def __mul__(self, scalar):
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        real = isinstance(scalar, numbers.Real) or complex(scalar).imag == 0
        return _promote(self.entries * scalar, None, hermitian=real and isinstance(self, Observable))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        _check_dims(self, other)
        return AlgebraElement(self.entries @ other.entries)

    def __repr__(self):
        return f"<{type(self).__name__} {self.label} dim={self.dim}>"


@dataclass(frozen=True, eq=False)
class Observable(AlgebraElement):
    """Hermitian element of 𝔄₊; construction fails above the hermiticity tolerance."""

    def __post_init__(self):
        super().__post_init__()
        defect = self.hermiticity_defect
        if defect > HERMITICITY_TOL:
            raise NonHermitianError(defect, self.name)

    @classmethod
    def from_element(cls, element: AlgebraElement, name: Optional[str] = None) -> Observable:
        return cls(element.entries, name=name or element.name)

    @property
    def label(self) -> str:
        return self.name or f"A[{self.dim}x{self.dim}]"

    def hermitian_matrix(self) -> np.ndarray:
        """Entries symmetrised to exact hermiticity for eigen-solvers."""
        return (self.entries + self.entries.conj().T) / 2


def _check_dims(left: AlgebraElement, right: AlgebraElement):
    if left.dim != right.dim:
        raise DimensionMismatchError(left.dim, right.dim)


def _promote(matrix: np.ndarray, name: Optional[str], hermitian: bool) -> AlgebraElement:
    if hermitian:
        return Observable(matrix, name=name)
    return AlgebraElement(matrix, name=name)
