"""Algebra service: the involutive matrix algebra 𝔄 and its Hermitian part 𝔄₊."""

from typing import NamedTuple

import numpy as np
from scipy.linalg import sqrtm

from app.helper.error_handler import (
    DimensionMismatchError,
    InvalidDimensionError,
    ModelFormatError,
    NonHermitianError,
)
from app.helper.tolerance import CLUSTER_TOL, COMMUTATOR_TOL, HERMITICITY_TOL
from app.models.algebra_element import AlgebraElement, Observable


class SpectralPoint(NamedTuple):
    value: float
    multiplicity: int


class CommutatorResult(NamedTuple):
    commutator: AlgebraElement
    norm: float
    compatible: bool


def _require_same_dim(*elements: AlgebraElement):
    dims = {e.dim for e in elements}
    if len(dims) > 1:
        first, *rest = elements
        other = next(e for e in rest if e.dim != first.dim)
        raise DimensionMismatchError(first.dim, other.dim)


def make_unity(dim: int) -> Observable:
    """Unity 𝕀 of M_dim."""
    if not isinstance(dim, (int, np.integer)) or isinstance(dim, bool) or dim < 1:
        raise InvalidDimensionError(dim)
    return Observable(np.eye(int(dim)), name="I")


def add(r: AlgebraElement, s: AlgebraElement) -> AlgebraElement:
    _require_same_dim(r, s)
    return r + s


def mul(r: AlgebraElement, s: AlgebraElement) -> AlgebraElement:
    _require_same_dim(r, s)
    return r @ s


def scale(r: AlgebraElement, c: complex) -> AlgebraElement:
    return r * c


def involute(r: AlgebraElement) -> AlgebraElement:
    return r.star()


def commutator(a: AlgebraElement, b: AlgebraElement) -> CommutatorResult:
    """[A, B] = AB − BA with the compatibility verdict of the second postulate."""
    _require_same_dim(a, b)
    value = AlgebraElement(a.entries @ b.entries - b.entries @ a.entries, name=f"[{a.label},{b.label}]")
    norm = value.frobenius()
    return CommutatorResult(value, norm, norm <= COMMUTATOR_TOL)


def cluster_values(values, tol: float = CLUSTER_TOL) -> list[SpectralPoint]:
    """Group ascending reals whose neighbours lie within ``tol``; each group → its mean."""
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    points: list[SpectralPoint] = []
    group: list[float] = []
    for value in ordered:
        if group and value - group[-1] > tol:
            points.append(SpectralPoint(float(np.mean(group)), len(group)))
            group = []
        group.append(float(value))
    if group:
        points.append(SpectralPoint(float(np.mean(group)), len(group)))
    return points


def require_observable(a: AlgebraElement) -> Observable:
    if isinstance(a, Observable):
        return a
    defect = a.hermiticity_defect
    if defect > HERMITICITY_TOL:
        raise NonHermitianError(defect, a.name)
    return Observable.from_element(a)


def spectrum(a: AlgebraElement) -> list[SpectralPoint]:
    """σ(A; 𝔄): ascending clustered eigenvalues with multiplicities."""
    observable = require_observable(a)
    eigenvalues = np.linalg.eigvalsh(observable.hermitian_matrix())
    return cluster_values(eigenvalues)


def spectral_points(a: AlgebraElement) -> list[float]:
    return [p.value for p in spectrum(a)]


def operator_norm(r: AlgebraElement) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(r.entries, ord=2))


def split_hermitian(r: AlgebraElement) -> tuple[Observable, Observable]:
    """Unique R = A + iB with A, B ∈ 𝔄₊."""
    m = r.entries
    real_part = (m + m.conj().T) / 2
    imag_part = (m - m.conj().T) / 2j
    # exact hermiticity; the formulas above are Hermitian up to rounding only
    real_part = (real_part + real_part.conj().T) / 2
    imag_part = (imag_part + imag_part.conj().T) / 2
    return Observable(real_part), Observable(imag_part)


def positive_square_root(r: AlgebraElement) -> Observable:
    """Hermitian A with A² = R*R (first postulate, condition (i))."""
    gram = r.entries.conj().T @ r.entries
    gram = (gram + gram.conj().T) / 2
    # eigendecomposition keeps A exactly Hermitian and handles singular R*R
    w, v = np.linalg.eigh(gram)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return Observable((root + root.conj().T) / 2)


def principal_sqrtm(r: AlgebraElement) -> np.ndarray:
    """scipy's principal square root of R*R; cross-check for positive_square_root."""
    gram = r.entries.conj().T @ r.entries
    return sqrtm((gram + gram.conj().T) / 2)


def is_commutative(observables: list[AlgebraElement]) -> bool:
    """True when every pair commutes: the coordinate construction stops at one context."""
    return all(
        commutator(observables[i], observables[j]).compatible
        for i in range(len(observables))
        for j in range(i + 1, len(observables))
    )


def observable_from_payload(name: str, payload: dict, dim: int) -> Observable:
    """Decode ``{"re": [[...]], "im": [[...]]}``; ``im`` may be omitted."""
    try:
        real = np.asarray(payload["re"], dtype=np.float64)
        imag = np.asarray(payload.get("im", np.zeros_like(real)), dtype=np.float64)
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f"Observable '{name}': {e}")
    if real.shape != (dim, dim) or imag.shape != (dim, dim):
        raise ModelFormatError(f"Observable '{name}' must be {dim}x{dim}, got {real.shape}/{imag.shape}")
    element = AlgebraElement(real + 1j * imag, name=name)
    defect = element.hermiticity_defect
    if defect > HERMITICITY_TOL:
        raise ModelFormatError(f"Observable '{name}' is not Hermitian: defect {defect:.3e}")
    return Observable.from_element(element)
