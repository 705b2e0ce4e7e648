"""Context service: maximal commutative subalgebras 𝔔 and their characters."""

from functools import lru_cache

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from app.helper import logger as app_logger
from app.helper.error_handler import (
    ContextConstructionError,
    DimensionMismatchError,
    IncompatibleGeneratorsError,
    NotInContextError,
    SpectralConsistencyError,
    UsageError,
)
from app.helper.tolerance import (
    CLUSTER_TOL,
    CONTAINS_TOL,
    OVERLAP_TOL,
    UNITARITY_TOL,
)
from app.models.algebra_element import AlgebraElement, Observable
from app.models.context import Character, MeasurementContext
from app.schema.report_schema import ContextDump, MatrixPayload
from app.services.algebra_service import cluster_values, commutator, require_observable, spectrum
from config import Config

# Gram–Schmidt acceptance threshold for the lexicographic completion
_COMPLETION_NORM = 1e-7


# ─── SIMULTANEOUS DIAGONALIZATION ────────────────────────────────────────────


def _groups(sorted_values: np.ndarray, tol: float = CLUSTER_TOL) -> list[list[int]]:
    """Index runs of an ascending array whose neighbours lie within ``tol``."""
    groups: list[list[int]] = []
    for k, value in enumerate(sorted_values):
        if groups and value - sorted_values[groups[-1][-1]] <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def _refine(vecs: np.ndarray, mats: list[np.ndarray]) -> np.ndarray:
    """Split a degenerate block by diagonalizing the remaining generators on it."""
    if vecs.shape[1] == 1 or not mats:
        return vecs
    sub = vecs.conj().T @ mats[0] @ vecs
    w, u = np.linalg.eigh((sub + sub.conj().T) / 2)
    vecs = vecs @ u
    return np.hstack([_refine(vecs[:, group], mats[1:]) for group in _groups(w)])


def _diagonal_values(basis: np.ndarray, mats: list[np.ndarray]) -> np.ndarray:
    return np.array([np.real(np.einsum("ij,ik,kj->j", basis.conj(), m, basis)) for m in mats])


def _joint_groups(spectra: np.ndarray) -> list[list[int]]:
    """Columns sharing every generator value (joint eigenspaces)."""
    groups: list[list[int]] = []
    for column in range(spectra.shape[1]):
        for group in groups:
            if np.all(np.abs(spectra[:, column] - spectra[:, group[0]]) <= CLUSTER_TOL):
                group.append(column)
                break
        else:
            groups.append([column])
    return groups


def _lexicographic_span(block: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(block) from projected e_0, e_1, … in order."""
    dim, rank = block.shape
    projector = block @ block.conj().T
    accepted: list[np.ndarray] = []
    for j in range(dim):
        w = projector[:, j].copy()
        for v in accepted:
            w -= (v.conj() @ w) * v
        norm = np.linalg.norm(w)
        if norm > _COMPLETION_NORM:
            accepted.append(w / norm)
        if len(accepted) == rank:
            return np.column_stack(accepted)
    raise ContextConstructionError(f"Lexicographic completion found {len(accepted)} of {rank} vectors")


def _complete(basis: np.ndarray, spectra: np.ndarray) -> tuple[np.ndarray, list[Observable]]:
    """Append rank-one projectors until every joint eigenspace is one-dimensional."""
    basis = basis.copy()
    projectors: list[Observable] = []
    for group in _joint_groups(spectra):
        if len(group) < 2:
            continue
        span = _lexicographic_span(basis[:, group])
        basis[:, group] = span
        for k in range(len(group) - 1):
            v = span[:, k]
            projectors.append(Observable(np.outer(v, v.conj()), name=f"P{len(projectors)}"))
        app_logger.json_logger.debug(
            "Completed degenerate joint eigenspace",
            extra={"dimension": len(group), "projectors": len(group) - 1},
        )
    return basis, projectors


def _canonical_order(basis: np.ndarray, mats: list[np.ndarray]) -> np.ndarray:
    """Sort columns by dominant component then generator values; fix phases."""
    spectra = _diagonal_values(basis, mats)
    keyed = []
    for column in range(basis.shape[1]):
        v = basis[:, column].copy()
        magnitudes = np.abs(v)
        lead = int(np.argmax(magnitudes >= magnitudes.max() - CLUSTER_TOL))
        anchor = int(np.argmax(magnitudes > CLUSTER_TOL))
        v *= np.conj(v[anchor]) / magnitudes[anchor]
        values = tuple(round(float(x), 8) for x in spectra[:, column])
        keyed.append(((lead, values, column), v))
    keyed.sort(key=lambda item: item[0])
    return np.column_stack([v for _, v in keyed])


def _named(generators: list[Observable]) -> list[Observable]:
    return [g if g.name else g.named(f"G{k}") for k, g in enumerate(generators)]


def context_from(generating_set, *, seed: int | None = None, label: str | None = None) -> MeasurementContext:
    """Maximal commutative subalgebra containing a commuting generating set.

    A random real combination of the generators (fixed seed) is diagonalized,
    near-degenerate blocks are refined generator by generator, and joint
    eigenspaces that are still degenerate are split by rank-one projectors
    onto their lexicographically first orthonormal vectors.

    Raises:
        IncompatibleGeneratorsError: If two generators do not commute.
        DimensionMismatchError: If generators live in different M_n.
    """
    generators = _named([require_observable(g) for g in generating_set])
    if not generators:
        raise UsageError("A context needs at least one generator", message="Empty generating set")
    dim = generators[0].dim
    for g in generators[1:]:
        if g.dim != dim:
            raise DimensionMismatchError(dim, g.dim)
    for i in range(len(generators)):
        for j in range(i + 1, len(generators)):
            result = commutator(generators[i], generators[j])
            if not result.compatible:
                raise IncompatibleGeneratorsError(generators[i].label, generators[j].label, result.norm)

    mats = [g.hermitian_matrix() for g in generators]
    rng = np.random.default_rng(Config.CONTEXT_SEED if seed is None else seed)
    weights = rng.standard_normal(len(mats))
    combination = sum(w * m for w, m in zip(weights, mats))
    w, v = np.linalg.eigh(combination)
    basis = np.hstack([_refine(v[:, group], mats) for group in _groups(w)])

    basis, projectors = _complete(basis, _diagonal_values(basis, mats))
    generators = generators + projectors
    mats = mats + [p.hermitian_matrix() for p in projectors]
    basis = _canonical_order(basis, mats)
    spectra = _diagonal_values(basis, mats)

    unitarity = float(np.linalg.norm(basis.conj().T @ basis - np.eye(dim)))
    if unitarity > UNITARITY_TOL:
        raise ContextConstructionError(f"Joint eigenbasis is not unitary: defect {unitarity:.3e}")
    for g, m, values in zip(generators, mats, spectra):
        defect = float(np.linalg.norm(basis.conj().T @ m @ basis - np.diag(values)))
        if defect > CONTAINS_TOL:
            raise ContextConstructionError(f"Generator '{g.label}' not diagonal in basis: defect {defect:.3e}")
    if any(len(group) > 1 for group in _joint_groups(spectra)):
        raise ContextConstructionError("Generators do not separate the basis columns")

    ctx = MeasurementContext(
        basis=basis,
        generators=tuple(generators),
        generator_spectra=spectra,
        label=label or "ctx(" + ",".join(g.label for g in generators[: len(generators) - len(projectors)]) + ")",
    )
    app_logger.json_logger.debug(
        "Context constructed",
        extra={"context": ctx.label, "dim": dim, "completed": len(projectors)},
    )
    return ctx


def aligned_to(ctx: MeasurementContext, reference: MeasurementContext) -> MeasurementContext:
    """``ctx`` with its columns permuted to best match the columns of ``reference``.

    The permutation maximizes the summed overlaps |⟨ref_i, col_j⟩|. Phases,
    generators and label are kept.
    """
    if ctx.dim != reference.dim:
        raise DimensionMismatchError(reference.dim, ctx.dim)
    overlaps = np.abs(reference.basis.conj().T @ ctx.basis)
    _, order = linear_sum_assignment(overlaps, maximize=True)
    if np.array_equal(order, np.arange(ctx.dim)):
        return ctx
    return MeasurementContext(
        basis=ctx.basis[:, order],
        generators=ctx.generators,
        generator_spectra=ctx.generator_spectra[:, order],
        label=ctx.label,
    )


def rotated_context(
    a1: Observable, a2: Observable, alpha: float, reference: MeasurementContext | None = None
) -> MeasurementContext:
    """Context 𝔔_α generated by B(α) = A₁ cos α + A₂ sin α.

    Canonical column order jumps where two columns tie on their dominant
    component (σ_x at α = 0 is one such point), so the columns are aligned to
    ``reference``, by default the context of A₁. Chaining each step to the
    previous context tracks the columns along any path of α.
    """
    a1 = require_observable(a1)
    a2 = require_observable(a2)
    if a1.dim != a2.dim:
        raise DimensionMismatchError(a1.dim, a2.dim)
    b = Observable(np.cos(alpha) * a1.entries + np.sin(alpha) * a2.entries, name=f"B({alpha:.6g})")
    return aligned_to(context_from([b]), reference if reference is not None else context_from([a1]))


# ─── MEMBERSHIP AND CHARACTERS ───────────────────────────────────────────────


def off_diagonal_defect(ctx: MeasurementContext, a: AlgebraElement) -> float:
    if a.dim != ctx.dim:
        raise DimensionMismatchError(ctx.dim, a.dim)
    t = ctx.transformed(a)
    return float(np.linalg.norm(t - np.diag(np.diag(t))))


def contains(ctx: MeasurementContext, a: AlgebraElement) -> bool:
    """A is diagonal in the context basis."""
    return off_diagonal_defect(ctx, a) <= CONTAINS_TOL


def diagonal_of(ctx: MeasurementContext, a: AlgebraElement) -> np.ndarray:
    """Values of every character on A; NotInContextError if A is not in ctx."""
    if not contains(ctx, a):
        raise NotInContextError(a.label, ctx.label)
    return np.real(np.einsum("ij,ik,kj->j", ctx.basis.conj(), a.entries, ctx.basis))


def spectrum_in_context(ctx: MeasurementContext, a: AlgebraElement) -> list[float]:
    """σ(Q; 𝔔), checked against σ(Q; 𝔄)."""
    local = cluster_values(diagonal_of(ctx, a))
    global_points = spectrum(a)
    if [p.multiplicity for p in local] != [p.multiplicity for p in global_points]:
        raise SpectralConsistencyError(a.label, float("inf"))
    defect = max(abs(p.value - q.value) for p, q in zip(local, global_points))
    if defect > CLUSTER_TOL:
        raise SpectralConsistencyError(a.label, defect)
    return [p.value for p in local]


@lru_cache(maxsize=256)
def characters_of(ctx: MeasurementContext) -> tuple[Character, ...]:
    """One character per basis column."""
    return tuple(Character(ctx, index) for index in range(ctx.dim))


def evaluate(chi: Character, a: AlgebraElement) -> float:
    """χ(A): the χ.index-th diagonal entry of basis†·A·basis.

    One trial serves only observables of one context, so an A outside the
    character's context has no value here.
    """
    return float(diagonal_of(chi.context, a)[chi.index])


# ─── STRUCTURE ───────────────────────────────────────────────────────────────


def commutant_dimension(generators) -> int:
    """dim {X ∈ M_n : [X, G] = 0 for every G}; equals n exactly for a maximal context."""
    mats = [g.entries for g in generators]
    n = mats[0].shape[0]
    identity = np.eye(n)
    # row-major vec: vec(XG) = (I ⊗ Gᵀ) vec X, vec(GX) = (G ⊗ I) vec X
    constraints = np.vstack([np.kron(identity, m.T) - np.kron(m, identity) for m in mats])
    return null_space(constraints, rcond=1e-10).shape[1]


def overlap_classes(first: MeasurementContext, second: MeasurementContext) -> tuple[np.ndarray, np.ndarray]:
    """Component labels of the column-overlap graph between two contexts.

    Characters i of ``first`` and j of ``second`` agree on the intersection
    subalgebra exactly when they carry the same label.
    """
    if first.dim != second.dim:
        raise DimensionMismatchError(first.dim, second.dim)
    n = first.dim
    overlap = np.abs(first.basis.conj().T @ second.basis) > OVERLAP_TOL
    adjacency = np.zeros((2 * n, 2 * n), dtype=bool)
    adjacency[:n, n:] = overlap
    adjacency[n:, :n] = overlap.T
    _, labels = connected_components(csr_matrix(adjacency), directed=False)
    return labels[:n], labels[n:]


def dump_context(ctx: MeasurementContext) -> ContextDump:
    return ContextDump(
        label=ctx.label,
        dim=ctx.dim,
        basis=MatrixPayload(re=ctx.basis.real.tolist(), im=ctx.basis.imag.tolist()),
        generators=ctx.generator_names,
        spectra={name: ctx.generator_spectra[k].tolist() for k, name in enumerate(ctx.generator_names)},
        commutant_dimension=commutant_dimension(ctx.generators),
    )
