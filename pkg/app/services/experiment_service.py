"""Experiment service: EPR–Bohm, singlet correlators, CHSH and model-driven runs."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from app.helper import logger as app_logger
from app.helper.error_handler import InvalidSampleSizeError, UnknownNameError
from app.models.algebra_element import Observable
from app.schema.experiment_schema import ExperimentConfig
from app.schema.report_schema import (
    AxisReport,
    ChshResult,
    ContextDump,
    ConvergenceReport,
    CorrelatorReport,
    EprReport,
    GnsReport,
)
from app.services.context_service import context_from, dump_context
from app.services.ensemble_service import draw_relevant_set, expectation, quantum_state
from app.services.gns_service import gns_construct, verify_gns
from app.services.model_service import (
    IDENTITY_2,
    build_singlet_model,
    get_model,
    parse_observable,
    resolve_angles,
    resolve_state,
    spin_along,
)
from app.services.physical_state_service import belongs_to, extend_coordinates, relevant_values
from app.services.statistics_service import verify_quantum_average

# per-draw identities are checked at this tolerance, not statistically
ANTICORRELATION_TOL = 1e-9
EXTENSION_TRIALS = 100
MIN_CHSH_SAMPLES = 100
CLASSICAL_BOUND = 2.0


def child_seeds(seed: int, count: int) -> list[int]:
    """Independent integer seeds derived from one experiment seed."""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count)]


def _require_samples(n: int, minimum: int = 1):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < minimum:
        raise InvalidSampleSizeError(n, minimum=minimum)


def run_epr_bohm(n: int, seed: int, partitions: int = 1) -> EprReport:
    """Singlet measured on {S(A), S(B)} along z and along x.

    Every draw must give S(B) = −S(A). The first z-axis trials are then
    carried into the context {S_z(A), S_x(B)}, so particle B of one trial
    holds values of both S_z(B) and S_x(B).
    """
    _require_samples(n)
    model = build_singlet_model()
    psi = resolve_state(model, "singlet")
    obs = model.observables
    z_seed, x_seed, extension_seed = child_seeds(seed, 3)
    app_logger.json_logger.info("EPR-Bohm experiment started", extra={"n": n, "seed": seed})

    axes = []
    z_states, z_ctx = [], None
    for axis, a, b, axis_seed in (
        ("z", obs["sz_a"], obs["sz_b"], z_seed),
        ("x", obs["sx_a"], obs["sx_b"], x_seed),
    ):
        ctx = context_from([a, b])
        states = draw_relevant_set(psi, a, n, axis_seed, partitions=partitions, context=ctx)
        values_a, values_b = relevant_values(states, a), relevant_values(states, b)
        axes.append(
            AxisReport(
                axis=axis,
                n=n,
                anticorrelation_frequency=float(np.mean(np.abs(values_a + values_b) <= ANTICORRELATION_TOL)),
                marginal_a_plus=float(np.mean(values_a > 0)),
                marginal_b_plus=float(np.mean(values_b > 0)),
            )
        )
        if axis == "z":
            z_states, z_ctx = states, ctx

    extension_ctx = context_from([obs["sz_a"], obs["sx_b"]])
    rng = np.random.default_rng(extension_seed)
    trials = z_states[:EXTENSION_TRIALS]
    joint = 0
    for phi in trials:
        extended = extend_coordinates(phi, extension_ctx, rng)
        home_state = quantum_state(z_ctx, phi.home_character.index)
        other_state = quantum_state(extension_ctx, extended.visited(extension_ctx))
        if belongs_to(extended, home_state) and belongs_to(extended, other_state):
            joint += 1

    passed = all(report.anticorrelation_frequency == 1.0 for report in axes) and joint == len(trials)
    report = EprReport(
        n=n,
        seed=seed,
        axes=axes,
        extension_context=extension_ctx.label,
        extension_trials=len(trials),
        joint_memberships=joint,
        passed=passed,
    )
    (app_logger.json_logger.info if passed else app_logger.json_logger.warning)(
        "EPR-Bohm experiment finished", extra={"passed": passed, "joint_memberships": joint}
    )
    return report


def _spin_pair(a: float, b: float) -> tuple[Observable, Observable]:
    spin_a = Observable(np.kron(spin_along(a), IDENTITY_2), name=f"S({a:.6g})_a")
    spin_b = Observable(np.kron(IDENTITY_2, spin_along(b)), name=f"S({b:.6g})_b")
    return spin_a, spin_b


def _correlate(a: float, b: float, n: int, seed: int, partitions: int) -> tuple[CorrelatorReport, set[int]]:
    psi = resolve_state(build_singlet_model(), "singlet")
    spin_a, spin_b = _spin_pair(a, b)
    ctx = context_from([spin_a, spin_b])
    states = draw_relevant_set(psi, spin_a, n, seed, partitions=partitions, context=ctx)
    products = relevant_values(states, spin_a) * relevant_values(states, spin_b)
    empirical = float(np.clip(np.mean(products), -1.0, 1.0))
    target = float(np.real(expectation(psi, spin_a @ spin_b)))
    bound = 3.0 / np.sqrt(n)
    deviation = abs(empirical - target)
    report = CorrelatorReport(
        a=a,
        b=b,
        n=n,
        empirical=empirical,
        target=target,
        deviation=deviation,
        bound=float(bound),
        passed=deviation <= bound,
    )
    return report, {phi.trial_id for phi in states}


def singlet_correlator(a: float, b: float, n: int, seed: int, partitions: int = 1) -> CorrelatorReport:
    """Empirical E(a, b): mean product of spin outcomes along a (particle A) and b (particle B)."""
    _require_samples(n)
    report, _ = _correlate(a, b, n, seed, partitions)
    return report


def run_chsh(angles, n: int, seed: int, partitions: int = 1) -> ChshResult:
    """S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′) from four fresh relevant sets.

    The gate passes when no trial is shared between settings and
    |S − S_target| ≤ 6/√n.
    """
    _require_samples(n, MIN_CHSH_SAMPLES)
    a, a_prime, b, b_prime = resolve_angles(angles)
    settings = {
        "ab": (a, b),
        "ab'": (a, b_prime),
        "a'b": (a_prime, b),
        "a'b'": (a_prime, b_prime),
    }
    seeds = dict(zip(settings, child_seeds(seed, len(settings))))
    app_logger.json_logger.info(
        "CHSH experiment started", extra={"n": n, "seed": seed, "angles": [a, a_prime, b, b_prime]}
    )

    def run(key):
        return _correlate(*settings[key], n, seeds[key], partitions)

    # settings are independent; trial ids come from disjoint counter blocks
    with ThreadPoolExecutor(max_workers=len(settings)) as pool:
        outcomes = dict(zip(settings, pool.map(run, settings)))

    reports = {key: report for key, (report, _) in outcomes.items()}
    id_sets = [ids for _, ids in outcomes.values()]
    disjoint = all(
        id_sets[i].isdisjoint(id_sets[j]) for i in range(len(id_sets)) for j in range(i + 1, len(id_sets))
    )
    s = reports["ab"].empirical - reports["ab'"].empirical + reports["a'b"].empirical + reports["a'b'"].empirical
    target = reports["ab"].target - reports["ab'"].target + reports["a'b"].target + reports["a'b'"].target
    tolerance = 6.0 / np.sqrt(n)
    deviation = abs(s - target)
    passed = disjoint and deviation <= tolerance

    result = ChshResult(
        angles={"a": a, "a'": a_prime, "b": b, "b'": b_prime},
        correlators=reports,
        s=s,
        target=target,
        deviation=deviation,
        tolerance=float(tolerance),
        counts={key: report.n for key, report in reports.items()},
        disjoint=disjoint,
        classical_bound_exceeded=abs(s) > CLASSICAL_BOUND,
        passed=passed,
    )
    (app_logger.json_logger.info if passed else app_logger.json_logger.warning)(
        "CHSH experiment finished", extra={"s": s, "target": target, "passed": passed}
    )
    return result


def _required(value, kind: str, known) -> str:
    if not value:
        raise UnknownNameError(kind, "<missing>", known)
    return value


def run_average(
    config: ExperimentConfig, samples_out: list | None = None, trial_log_out: list | None = None
) -> ConvergenceReport:
    """verify_quantum_average on a named model, observable expression and state."""
    model = get_model(config.model, config.levels)
    observable = parse_observable(model, _required(config.observable, "observable", model.observables))
    psi = resolve_state(model, _required(config.state, "state", model.states))
    return verify_quantum_average(
        psi,
        observable,
        config.n,
        config.seed,
        partitions=config.partitions,
        samples_out=samples_out,
        trial_log_out=trial_log_out,
    )


def run_gns(config: ExperimentConfig, pairs: int = 50) -> GnsReport:
    model = get_model(config.model, config.levels)
    psi = resolve_state(model, _required(config.state, "state", model.states))
    representation = gns_construct(psi)
    return verify_gns(representation, np.random.default_rng(config.seed), pairs=pairs)


def inspect_context(model_name: str, observables: list[str], levels: int | None = None) -> ContextDump:
    model = get_model(model_name, levels)
    return dump_context(context_from([parse_observable(model, name) for name in observables]))
