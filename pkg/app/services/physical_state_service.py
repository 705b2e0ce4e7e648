"""Physical-state service: individual-trial valuations φ and their coordinate charts."""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from app.helper import logger as app_logger
from app.helper.error_handler import (
    CharacterMismatchError,
    DimensionMismatchError,
    InconsistentExtensionError,
    IndexOutOfRangeError,
    NotInContextError,
)
from app.helper.tolerance import CLUSTER_TOL, PROBABILITY_FLOOR
from app.models.algebra_element import AlgebraElement, Observable
from app.models.context import Character, MeasurementContext
from app.models.physical_state import CoordinateChart, PhysicalState
from app.models.quantum_state import QuantumState
from app.services.algebra_service import commutator, require_observable
from app.services.context_service import context_from, contains, diagonal_of, overlap_classes

# values closer than this count as equal when separating observables
SEPARATION_TOL = 1e-9
EQUALITY_TOL = 1e-8


@dataclass(frozen=True)
class Witness:
    """Outcome of ``separate``: either equal, or a character telling A1 and A2 apart.

    ``averaged`` is set when A1 and A2 do not commute; the values are then the
    averages of A1 and A2 in the vector state of the witness column.
    """

    equal: bool
    character: Optional[Character] = None
    values: Optional[tuple[float, float]] = None
    averaged: bool = False


def realize_state(
    ctx: MeasurementContext,
    chi: Character,
    trial_id: int,
    ensemble: Optional[QuantumState] = None,
) -> PhysicalState:
    """Fresh physical state valued by ``chi`` on its home context."""
    if chi.context is not ctx:
        raise CharacterMismatchError(ctx.label)
    if not 0 <= chi.index < ctx.dim:
        raise IndexOutOfRangeError(chi.index, ctx.dim)
    return PhysicalState(
        trial_id=int(trial_id),
        home_character=chi,
        chart=CoordinateChart((ctx,), (chi.index,)),
        ensemble=ensemble,
    )


def value(phi: PhysicalState, a: AlgebraElement) -> float:
    """φ(A) from the first visited context that contains A."""
    for ctx, index in zip(phi.chart.context_chain, phi.chart.indices):
        if contains(ctx, a):
            column = ctx.column(index)
            return float(np.real(column.conj() @ a.entries @ column))
    raise NotInContextError(a.label, phi.home_context.label)


def dispersion(phi: PhysicalState, a: Observable) -> float:
    """φ(A²) − φ(A)²; zero for every observable φ can evaluate."""
    return value(phi, a @ a) - value(phi, a) ** 2


def _admissible(phi: PhysicalState, next_ctx: MeasurementContext) -> np.ndarray:
    mask = np.ones(next_ctx.dim, dtype=bool)
    for ctx, index in zip(phi.chart.context_chain, phi.chart.indices):
        for k, generator in enumerate(ctx.generators):
            if contains(next_ctx, generator):
                recorded = ctx.generator_spectra[k, index]
                mask &= np.abs(diagonal_of(next_ctx, generator) - recorded) <= CLUSTER_TOL
        # same overlap class: agreement on the whole intersection subalgebra
        visited_labels, next_labels = overlap_classes(ctx, next_ctx)
        mask &= next_labels == visited_labels[index]
    return mask


def extend_coordinates(phi: PhysicalState, next_ctx: MeasurementContext, rng: np.random.Generator) -> PhysicalState:
    """Carry φ into ``next_ctx`` by drawing one admissible character.

    Generators already recorded keep their values. The draw uses Born weights
    of the quantum state that produced φ, restricted to admissible characters;
    it is uniform when φ has no ensemble or every admissible weight vanishes.

    Raises:
        InconsistentExtensionError: If no character of ``next_ctx`` agrees with the record.
    """
    if next_ctx.dim != phi.home_context.dim:
        raise DimensionMismatchError(phi.home_context.dim, next_ctx.dim)
    if phi.visited(next_ctx) is not None:
        return phi

    mask = _admissible(phi, next_ctx)
    if not mask.any():
        raise InconsistentExtensionError(next_ctx.label, f"trial {phi.trial_id} recorded values exclude every column")

    weights = mask.astype(np.float64)
    if phi.ensemble is not None:
        born = np.abs(next_ctx.basis.conj().T @ phi.ensemble.vector) ** 2
        born = np.where(mask, born, 0.0)
        if born.sum() > PROBABILITY_FLOOR:
            weights = born
        else:
            app_logger.json_logger.warning(
                "Conditional weights vanish; extending uniformly",
                extra={"trial_id": phi.trial_id, "context": next_ctx.label},
            )
    index = int(rng.choice(next_ctx.dim, p=weights / weights.sum()))
    return replace(phi, chart=phi.chart.extended(next_ctx, index))


def coordinate_chain(phi: PhysicalState, contexts, rng: np.random.Generator) -> CoordinateChart:
    """Extend φ through every context in order and return the resulting chart."""
    for ctx in contexts:
        phi = extend_coordinates(phi, ctx, rng)
    return phi.chart


def is_q_equivalent(first: PhysicalState, second: PhysicalState, ctx: MeasurementContext) -> bool:
    """Both states assign the same value to every generator of ``ctx``."""
    indices = []
    for phi in (first, second):
        index = phi.visited(ctx)
        if index is None:
            raise NotInContextError(f"trial {phi.trial_id}", ctx.label)
        indices.append(index)
    spectra = ctx.generator_spectra
    return bool(np.all(np.abs(spectra[:, indices[0]] - spectra[:, indices[1]]) <= CLUSTER_TOL))


def belongs_to(phi: PhysicalState, psi: QuantumState) -> bool:
    """φ ∈ {φ}_Q: φ evaluates every generator of ψ's context to ψ's label value."""
    for generator, (_, expected) in zip(psi.context.generators, psi.label):
        try:
            observed = value(phi, generator)
        except NotInContextError:
            return False
        if abs(observed - expected) > CLUSTER_TOL:
            return False
    return True


def relevant_values(states: list[PhysicalState], a: AlgebraElement) -> np.ndarray:
    """φ_i(A) for a relevant set; character diagonals are computed once per home context."""
    diagonals: dict[int, np.ndarray] = {}
    values = np.empty(len(states))
    for k, phi in enumerate(states):
        ctx = phi.home_context
        if id(ctx) not in diagonals:
            diagonals[id(ctx)] = diagonal_of(ctx, a) if contains(ctx, a) else None
        diagonal = diagonals[id(ctx)]
        values[k] = diagonal[phi.home_character.index] if diagonal is not None else value(phi, a)
    return values


def trial_log(states: list[PhysicalState]) -> list[tuple[int, str, str, float]]:
    """Rows (trial_id, context label, generator name, value) of every coordinate."""
    rows = []
    for phi in states:
        for coordinates in phi.chart.coordinates():
            rows.extend((phi.trial_id, c.context_label, c.name, c.value) for c in coordinates)
    return rows


def separate(a1: AlgebraElement, a2: AlgebraElement, context_pool=()) -> Witness:
    """Find a valuation that tells A1 from A2, or report them equal.

    Commuting pairs are separated by a character of a context holding both
    (from the pool, else built from their difference). A noncommuting pair
    has no such context; the witness is then the vector state on the dominant
    eigenvector of A1 − A2 in its rank-one-projector context.
    """
    a1 = require_observable(a1)
    a2 = require_observable(a2)
    if a1.dim != a2.dim:
        raise DimensionMismatchError(a1.dim, a2.dim)
    difference = Observable((a1 - a2).entries, name=f"{a1.label}-{a2.label}")
    if difference.frobenius() <= EQUALITY_TOL:
        return Witness(equal=True)

    if commutator(a1, a2).compatible:
        ctx = next((c for c in context_pool if contains(c, a1) and contains(c, a2)), None)
        if ctx is None:
            ctx = context_from([difference, a1, a2])
        first, second = diagonal_of(ctx, a1), diagonal_of(ctx, a2)
        index = int(np.argmax(np.abs(first - second)))
        if abs(first[index] - second[index]) > SEPARATION_TOL:
            return Witness(False, Character(ctx, index), (float(first[index]), float(second[index])))

    w, v = np.linalg.eigh(difference.hermitian_matrix())
    vector = v[:, int(np.argmax(np.abs(w)))]
    projector = Observable(np.outer(vector, vector.conj()), name="P_witness")
    ctx = context_from([projector])
    index = int(np.argmax(ctx.generator_spectra[0]))
    column = ctx.column(index)
    averages = tuple(float(np.real(column.conj() @ a.entries @ column)) for a in (a1, a2))
    return Witness(False, Character(ctx, index), averages, averaged=True)
