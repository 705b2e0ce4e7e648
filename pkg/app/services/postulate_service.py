"""Postulate service: randomized invariant suite over matrix algebras of several sizes."""

from dataclasses import dataclass

import numpy as np

from app.helper import logger as app_logger
from app.helper.random_matrix import (
    random_diagonal_hermitian,
    random_element,
    random_hermitian,
    random_unit_vector,
    random_unitary,
)
from app.models.algebra_element import AlgebraElement, Observable
from app.models.quantum_state import QuantumState
from app.schema.report_schema import CheckResult, PostulateReport
from app.services import algebra_service as algebra
from app.services.context_service import (
    characters_of,
    commutant_dimension,
    context_from,
    diagonal_of,
    evaluate,
    spectrum_in_context,
)
from app.services.ensemble_service import born_measure, expectation, quantum_state
from app.services.gns_service import (
    check_cbs,
    check_cstar_identity,
    gns_construct,
    state_norm,
    state_norm_squared,
    verify_gns,
)
from app.services.model_service import SIGMA_X, SIGMA_Z
from app.services.physical_state_service import dispersion, realize_state, value

DEFAULT_DIMS = (2, 3, 4, 5, 6, 7, 8)
GNS_PAIRS = 5
# GNS verification runs on every GNS_EVERY-th trial of each dimension, starting with the first
GNS_EVERY = 5


@dataclass
class _Check:
    name: str
    tolerance: float
    max_defect: float = 0.0
    detail: str | None = None

    def record(self, defect: float, detail: str | None = None):
        defect = float(defect)
        if defect > self.max_defect:
            self.max_defect = defect
            if detail:
                self.detail = detail

    def result(self) -> CheckResult:
        return CheckResult(
            name=self.name,
            max_defect=self.max_defect,
            tolerance=self.tolerance,
            passed=self.max_defect <= self.tolerance,
            detail=self.detail,
        )


def _vector_state(vector: np.ndarray) -> QuantumState:
    """Quantum state of a unit vector, through the context of its projector."""
    projector = Observable(np.outer(vector, vector.conj()), name="P_v")
    ctx = context_from([projector])
    return quantum_state(ctx, int(np.argmax(ctx.generator_spectra[0])))


def _commuting_pair(rng: np.random.Generator, dim: int, degenerate: bool) -> tuple[Observable, Observable]:
    u = random_unitary(rng, dim)
    if degenerate:
        # few distinct values, so joint eigenspaces need completion
        first = rng.integers(0, 2, dim).astype(float)
        second = rng.integers(0, 2, dim).astype(float)
    else:
        first = rng.uniform(-3, 3, dim)
        second = rng.uniform(-3, 3, dim)
    return (
        Observable(u @ np.diag(first) @ u.conj().T, name="A"),
        Observable(u @ np.diag(second) @ u.conj().T, name="B"),
    )


def _algebra_checks(checks: dict[str, _Check], rng: np.random.Generator, dim: int):
    r, s, t = (AlgebraElement(random_element(rng, dim)) for _ in range(3))
    unity = algebra.make_unity(dim)
    scale = r.frobenius() * s.frobenius() * t.frobenius()

    checks["unity"].record(max((unity @ r - r).frobenius(), (r @ unity - r).frobenius()))
    checks["associativity"].record(((r @ s) @ t - r @ (s @ t)).frobenius() / scale)
    checks["involution"].record(
        max(((r @ s).star() - s.star() @ r.star()).frobenius() / scale, (r.star().star() - r).frobenius())
    )
    real_part, imag_part = algebra.split_hermitian(r)
    checks["hermitian split"].record((real_part + imag_part * 1j - r).frobenius() / max(1.0, r.frobenius()))
    root = algebra.positive_square_root(r)
    checks["positive square root"].record((root @ root - r.star() @ r).frobenius() / max(1.0, r.frobenius() ** 2))
    checks["square root agreement"].record(
        np.linalg.norm(root.entries - algebra.principal_sqrtm(r)) / max(1.0, root.frobenius())
    )

    a, b = _commuting_pair(rng, dim, degenerate=False)
    checks["commutator verdict"].record(0.0 if algebra.commutator(a, b).compatible else 1.0, f"dim {dim}")
    x = Observable(random_hermitian(rng, dim))
    y = Observable(random_hermitian(rng, dim))
    checks["commutator verdict"].record(0.0 if not algebra.commutator(x, y).compatible else 1.0, f"dim {dim}")


def _context_checks(checks: dict[str, _Check], rng: np.random.Generator, dim: int, unity: Observable):
    generic = Observable(random_diagonal_hermitian(rng, dim), name="G")
    for generators in ([generic], list(_commuting_pair(rng, dim, degenerate=True))):
        ctx = context_from(generators)
        checks["maximality"].record(abs(commutant_dimension(ctx.generators) - dim), ctx.label)

        # one diagonal per element; entry i is the value of character i
        a, b = generators[0], generators[-1]
        on_a, on_b = diagonal_of(ctx, a), diagonal_of(ctx, b)
        checks["multiplicativity"].record(np.max(np.abs(diagonal_of(ctx, a @ b) - on_a * on_b)))
        checks["linearity on context"].record(
            np.max(np.abs(diagonal_of(ctx, a * 0.7 + b * -1.3) - 0.7 * on_a + 1.3 * on_b))
        )
        checks["unity value"].record(np.max(np.abs(diagonal_of(ctx, unity) - 1.0)))
        points = np.array(algebra.spectral_points(a))
        checks["spectrum membership"].record(np.max(np.min(np.abs(points[:, None] - on_a[None, :]), axis=0)))

        for k, generator in enumerate(ctx.generators):
            attained = ctx.generator_spectra[k]
            global_points = algebra.spectral_points(generator)
            for point in global_points:
                checks["spectrum attained"].record(float(np.min(np.abs(attained - point))))
            local = spectrum_in_context(ctx, generator)
            checks["spectral consistency"].record(max(abs(p - q) for p, q in zip(local, global_points)))

        chi = characters_of(ctx)[int(rng.integers(dim))]
        checks["character evaluation"].record(abs(evaluate(chi, a) - on_a[chi.index]))
        phi = realize_state(ctx, chi, trial_id=-1)
        checks["zero dispersion"].record(max(abs(dispersion(phi, g)) for g in ctx.generators))
        checks["unity value"].record(abs(value(phi, unity) - 1.0))


def _state_checks(checks: dict[str, _Check], rng: np.random.Generator, dim: int, with_gns: bool = True):
    psi = _vector_state(random_unit_vector(rng, dim))
    a = Observable(random_hermitian(rng, dim))
    b = Observable(random_hermitian(rng, dim))
    r = AlgebraElement(random_element(rng, dim))
    s = AlgebraElement(random_element(rng, dim))

    checks["expectation linearity"].record(abs(expectation(psi, a + b) - expectation(psi, a) - expectation(psi, b)))
    checks["expectation positivity"].record(max(0.0, -expectation(psi, r.star() @ r).real))
    checks["born consistency"].record(abs(born_measure(psi, a).mean() - expectation(psi, a).real))

    norm_squared = state_norm_squared(r)
    operator_norm = algebra.operator_norm(r)
    checks["state norm"].record(abs(norm_squared - operator_norm**2))
    checks["c-star identity"].record(check_cstar_identity(r)[2])
    checks["cbs"].record(max(0.0, -check_cbs(psi, r, s)))
    checks["norm axioms"].record(
        max(
            max(0.0, state_norm(r + s) - state_norm(r) - state_norm(s)),
            abs(state_norm(r * 2.5j) - 2.5 * state_norm(r)),
            abs(state_norm(r.star()) - state_norm(r)),
        )
    )

    if not with_gns:
        return
    report = verify_gns(gns_construct(psi), rng, pairs=GNS_PAIRS)
    checks["gns quotient dimension"].record(abs(report.quotient_dimension - dim))
    checks["gns homomorphism"].record(max(report.homomorphism_defect, report.involution_defect, report.unity_defect))
    checks["gns state recovery"].record(report.recovery_defect)


def _nonadditivity_check(checks: dict[str, _Check]):
    """φ(σ_x) + φ(σ_z) never lands in σ(σ_x + σ_z) = {±√2}."""
    sx, sz = Observable(SIGMA_X, name="sx"), Observable(SIGMA_Z, name="sz")
    spectrum_sum = np.array(algebra.spectral_points(sx + sz))
    for x_chi in characters_of(context_from([sx])):
        for z_chi in characters_of(context_from([sz])):
            total = evaluate(x_chi, sx) + evaluate(z_chi, sz)
            # defect is 1 when the sum hits the spectrum
            checks["nonadditivity across contexts"].record(float(np.any(np.abs(spectrum_sum - total) <= 1e-8)))


def run_postulate_suite(dims=DEFAULT_DIMS, trials: int = 50, seed: int = 7) -> PostulateReport:
    """Every algebraic, contextual, ensemble and norm invariant as a named check."""
    checks = {
        check.name: check
        for check in (
            _Check("unity", 1e-12),
            _Check("associativity", 1e-12),
            _Check("involution", 1e-12),
            _Check("hermitian split", 1e-14),
            _Check("positive square root", 1e-10),
            _Check("square root agreement", 1e-6),
            _Check("commutator verdict", 0.0),
            _Check("maximality", 0.0),
            _Check("multiplicativity", 1e-10),
            _Check("linearity on context", 1e-10),
            _Check("unity value", 1e-12),
            _Check("character evaluation", 1e-12),
            _Check("spectrum membership", 1e-8),
            _Check("spectrum attained", 1e-8),
            _Check("spectral consistency", 1e-8),
            _Check("zero dispersion", 1e-10),
            _Check("expectation linearity", 1e-12),
            _Check("expectation positivity", 1e-12),
            _Check("born consistency", 1e-10),
            _Check("state norm", 1e-8),
            _Check("c-star identity", 1e-8),
            _Check("cbs", 1e-10),
            _Check("norm axioms", 1e-8),
            _Check("gns quotient dimension", 0.0),
            _Check("gns homomorphism", 1e-8),
            _Check("gns state recovery", 1e-10),
            _Check("nonadditivity across contexts", 0.0),
        )
    }
    dims = list(dims)
    app_logger.json_logger.info("Postulate suite started", extra={"dims": dims, "trials": trials, "seed": seed})

    for dim, stream in zip(dims, np.random.SeedSequence(seed).spawn(len(dims))):
        rng = np.random.default_rng(stream)
        unity = algebra.make_unity(dim)
        for trial in range(trials):
            _algebra_checks(checks, rng, dim)
            _context_checks(checks, rng, dim, unity)
            _state_checks(checks, rng, dim, with_gns=trial % GNS_EVERY == 0)
    _nonadditivity_check(checks)

    results = [check.result() for check in checks.values()]
    passed = all(result.passed for result in results)
    for result in results:
        if not result.passed:
            app_logger.json_logger.warning(
                "Postulate check failed",
                extra={"check": result.name, "max_defect": result.max_defect, "tolerance": result.tolerance},
            )
    return PostulateReport(dims=dims, trials=trials, seed=seed, checks=results, passed=passed)
