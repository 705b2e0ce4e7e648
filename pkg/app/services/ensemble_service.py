"""Ensemble service: quantum states {φ}_Q, the functional Ψ_Q and Born measures."""

import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Mapping, Optional

import numpy as np

from app.helper import logger as app_logger
from app.helper.error_handler import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidSampleSizeError,
    NotInContextError,
    UnknownNameError,
)
from app.helper.tolerance import CLUSTER_TOL, EVENT_SLACK, PROBABILITY_FLOOR
from app.models.algebra_element import AlgebraElement, Observable
from app.models.context import MeasurementContext
from app.models.physical_state import PhysicalState
from app.models.quantum_state import Outcome, QuantumState, SpectralMeasure
from app.services.algebra_service import cluster_values, require_observable
from app.services.context_service import characters_of, context_from, contains, diagonal_of
from app.services.physical_state_service import realize_state


class TrialCounter:
    """Process-wide monotone source of trial ids; blocks are handed out atomically."""

    def __init__(self, start: int = 1):
        self._next = start
        self._lock = threading.Lock()

    def reserve(self, n: int) -> range:
        with self._lock:
            block = range(self._next, self._next + n)
            self._next += n
        return block


trial_counter = TrialCounter()


def quantum_state(ctx: MeasurementContext, index: int) -> QuantumState:
    """ψ labelled by the generator values of column ``index``."""
    if not isinstance(index, (int, np.integer)) or not 0 <= index < ctx.dim:
        raise IndexOutOfRangeError(index, ctx.dim)
    return QuantumState(
        context=ctx,
        index=int(index),
        label=ctx.generator_values(int(index)),
        vector=ctx.column(int(index)),
    )


def quantum_state_for_label(ctx: MeasurementContext, label: Mapping[str, float]) -> QuantumState:
    """ψ selected by generator values; names absent from ``label`` are unconstrained.

    Raises:
        UnknownNameError: If a name is not a generator, or the values match no
            column or more than one.
    """
    names = ctx.generator_names
    for name in label:
        if name not in names:
            raise UnknownNameError("generator", name, names)
    rows = [names.index(name) for name in label]
    target = np.array([float(v) for v in label.values()])
    matches = [
        i for i in range(ctx.dim) if np.all(np.abs(ctx.generator_spectra[rows, i] - target) <= CLUSTER_TOL)
    ]
    if len(matches) != 1:
        description = ",".join(f"{k}={v:g}" for k, v in label.items())
        reason = "no" if not matches else "several"
        raise UnknownNameError("state label", f"{description} ({reason} matching columns in {ctx.label})")
    return quantum_state(ctx, matches[0])


def expectation(psi: QuantumState, r: AlgebraElement) -> complex:
    """Ψ_Q(R) = v†·R·v."""
    if r.dim != psi.dim:
        raise DimensionMismatchError(psi.dim, r.dim)
    return complex(psi.vector.conj() @ r.entries @ psi.vector)


def _measurement_context(psi: QuantumState, a: Observable, context: Optional[MeasurementContext]) -> MeasurementContext:
    if context is not None:
        if not contains(context, a):
            raise NotInContextError(a.label, context.label)
        return context
    if contains(psi.context, a):
        return psi.context
    return context_from([a])


def born_measure(
    psi: QuantumState,
    a: AlgebraElement,
    context: Optional[MeasurementContext] = None,
) -> SpectralMeasure:
    """μ_Q for A: probability |⟨column_i, v⟩|² on each character of a context containing A.

    Values are spectral points of A (cluster representatives). Outcomes are
    sorted by value with ties broken by character index.
    """
    a = require_observable(a)
    if a.dim != psi.dim:
        raise DimensionMismatchError(psi.dim, a.dim)
    ctx = _measurement_context(psi, a, context)

    probabilities = np.abs(ctx.basis.conj().T @ psi.vector) ** 2
    probabilities[probabilities < PROBABILITY_FLOOR] = 0.0
    probabilities /= probabilities.sum()

    diagonal = diagonal_of(ctx, a)
    representatives = np.array([p.value for p in cluster_values(diagonal)])
    values = representatives[np.argmin(np.abs(diagonal[:, None] - representatives[None, :]), axis=1)]

    order = sorted(range(ctx.dim), key=lambda i: (values[i], i))
    outcomes = [Outcome(i, float(values[i]), float(probabilities[i])) for i in order]
    cdf = np.cumsum([o.probability for o in outcomes])
    cdf[-1] = 1.0
    return SpectralMeasure(context=ctx, observable_label=a.label, outcomes=outcomes, cdf=cdf)


def event_probability(measure: SpectralMeasure, a: float) -> float:
    """P(φ(A) ≤ a)."""
    return float(sum(o.probability for o in measure.outcomes if o.value <= a + EVENT_SLACK))


def sample_relevant_set(
    psi: QuantumState,
    a: AlgebraElement,
    n: int,
    rng: np.random.Generator,
    *,
    context: Optional[MeasurementContext] = None,
    trial_ids: Optional[range] = None,
) -> list[PhysicalState]:
    """n fresh trials of A in ψ, drawn by inverse CDF over the ascending outcomes."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidSampleSizeError(n)
    measure = born_measure(psi, a, context)
    ids = trial_ids if trial_ids is not None else trial_counter.reserve(n)
    characters = characters_of(measure.context)
    draws = np.searchsorted(measure.cdf, rng.random(n), side="right")
    # guards u that rounds onto the last cdf entry
    draws = np.minimum(draws, len(measure.outcomes) - 1)
    columns = [measure.outcomes[k].index for k in draws]
    return [realize_state(measure.context, characters[i], trial_id, ensemble=psi) for i, trial_id in zip(columns, ids)]


def draw_relevant_set(
    psi: QuantumState,
    a: AlgebraElement,
    n: int,
    seed: int,
    partitions: int = 1,
    context: Optional[MeasurementContext] = None,
) -> list[PhysicalState]:
    """Seeded, partitioned ``sample_relevant_set``.

    Each partition gets its own spawned child stream and a contiguous block of
    trial ids, so the drawn values depend only on (seed, partitions).
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidSampleSizeError(n)
    partitions = max(1, min(int(partitions), int(n)))
    # measure and context are shared by every partition
    measure = born_measure(psi, a, context)
    sizes = [len(chunk) for chunk in np.array_split(np.arange(n), partitions)]
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(partitions)]
    ids = trial_counter.reserve(n)
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    blocks = [ids[offsets[k] : offsets[k + 1]] for k in range(partitions)]

    app_logger.json_logger.debug(
        "Drawing relevant set",
        extra={"observable": measure.observable_label, "n": int(n), "seed": seed, "partitions": partitions},
    )

    def draw(k: int) -> list[PhysicalState]:
        return sample_relevant_set(psi, a, sizes[k], streams[k], context=measure.context, trial_ids=blocks[k])

    if partitions == 1:
        return draw(0)
    with ThreadPoolExecutor(max_workers=partitions) as pool:
        results = list(pool.map(draw, range(partitions)))
    return [phi for block in results for phi in block]
