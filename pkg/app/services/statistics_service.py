"""Statistics service: frequency and mean convergence of relevant sets."""

import numpy as np

from app.helper import logger as app_logger
from app.helper.error_handler import EmptySampleError, InvalidSampleSizeError
from app.helper.tolerance import EVENT_SLACK
from app.models.algebra_element import AlgebraElement
from app.models.context import MeasurementContext
from app.models.quantum_state import QuantumState
from app.schema.report_schema import ConvergenceReport, TrailPoint
from app.services.algebra_service import spectral_points
from app.services.ensemble_service import draw_relevant_set, expectation
from app.services.physical_state_service import relevant_values, trial_log

MIN_AVERAGE_SAMPLES = 100


def _as_array(samples) -> np.ndarray:
    values = np.asarray(samples, dtype=np.float64)
    if values.size == 0:
        raise EmptySampleError()
    return values


def empirical_mean(samples) -> float:
    """Ā_n = (A₁ + … + A_n)/n."""
    return float(np.mean(_as_array(samples)))


def empirical_event_frequency(samples, a: float) -> float:
    """k_n/n for the event φ(A) ≤ a."""
    values = _as_array(samples)
    return float(np.count_nonzero(values <= a + EVENT_SLACK) / values.size)


def doubling_trail(samples) -> list[TrailPoint]:
    """Running mean at n = 1, 2, 4, … and at the full sample size."""
    values = _as_array(samples)
    running = np.cumsum(values)
    checkpoints = [1 << k for k in range(int(np.log2(values.size)) + 1)]
    if checkpoints[-1] != values.size:
        checkpoints.append(values.size)
    return [TrailPoint(n=k, mean=float(running[k - 1] / k)) for k in checkpoints]


def verify_quantum_average(
    psi: QuantumState,
    a: AlgebraElement,
    n: int,
    seed: int,
    partitions: int = 1,
    context: MeasurementContext | None = None,
    samples_out: list | None = None,
    trial_log_out: list | None = None,
) -> ConvergenceReport:
    """Compare the empirical mean of φ_i(A) over a relevant set with Ψ_Q(A).

    The gate is deviation ≤ 3σ_max/√n with σ_max half the spectral spread of
    A, so it does not depend on the samples it judges.
    When ``samples_out`` is a list it receives (trial_id, value) per trial.
    ``trial_log_out`` likewise receives every coordinate of every trial as
    (trial_id, context label, generator name, value).
    """
    if not isinstance(n, (int, np.integer)) or n < MIN_AVERAGE_SAMPLES:
        raise InvalidSampleSizeError(n, minimum=MIN_AVERAGE_SAMPLES)

    states = draw_relevant_set(psi, a, n, seed, partitions=partitions, context=context)
    samples = relevant_values(states, a)
    if samples_out is not None:
        samples_out.extend((phi.trial_id, float(v)) for phi, v in zip(states, samples))
    if trial_log_out is not None:
        trial_log_out.extend(trial_log(states))
    target = float(np.real(expectation(psi, a)))
    mean = empirical_mean(samples)
    points = spectral_points(a)
    sigma_max = (points[-1] - points[0]) / 2
    bound = 3 * sigma_max / np.sqrt(n)
    deviation = abs(mean - target)
    passed = deviation <= bound + EVENT_SLACK

    report = ConvergenceReport(
        observable=a.label,
        state=psi.describe(),
        n=int(n),
        seed=seed,
        partitions=partitions,
        empirical_mean=mean,
        target=target,
        deviation=deviation,
        sigma_max=sigma_max,
        bound=float(bound),
        passed=passed,
        trail=doubling_trail(samples),
    )
    log = app_logger.json_logger.info if passed else app_logger.json_logger.warning
    log(
        "Quantum average verified" if passed else "Quantum average gate failed",
        extra={"observable": a.label, "n": int(n), "seed": seed, "deviation": deviation, "bound": float(bound)},
    )
    return report
