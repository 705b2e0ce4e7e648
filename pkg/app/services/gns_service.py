"""GNS service: state norm, C* identity and the Gelfand–Naimark–Segal construction."""

import numpy as np

from app.helper import logger as app_logger
from app.helper.error_handler import DimensionMismatchError, GnsNumericalError
from app.helper.random_matrix import random_element
from app.helper.tolerance import GRAM_RANK_TOL
from app.models.algebra_element import AlgebraElement, Observable
from app.models.gns_representation import GnsRepresentation
from app.models.quantum_state import QuantumState
from app.schema.report_schema import GnsReport
from app.services.context_service import context_from
from app.services.ensemble_service import expectation

HOMOMORPHISM_TOL = 1e-8
RECOVERY_TOL = 1e-10


def _gram_observable(r: AlgebraElement) -> Observable:
    gram = r.entries.conj().T @ r.entries
    return Observable((gram + gram.conj().T) / 2, name=f"{r.label}*{r.label}")


def state_norm_squared(r: AlgebraElement, context_pool=()) -> float:
    """‖R‖² = sup over quantum states of the pool of Ψ_Q(R*R).

    The context of R*R itself is always added, so the top eigenvector is
    among the candidates and the supremum is attained.
    """
    rr = _gram_observable(r)
    contexts = [context_from([rr]), *context_pool]
    best = 0.0
    for ctx in contexts:
        if ctx.dim != r.dim:
            raise DimensionMismatchError(r.dim, ctx.dim)
        averages = np.real(np.einsum("ij,ik,kj->j", ctx.basis.conj(), rr.entries, ctx.basis))
        best = max(best, float(averages.max()))
    return best


def state_norm(r: AlgebraElement, context_pool=()) -> float:
    return float(np.sqrt(state_norm_squared(r, context_pool)))


def check_cbs(psi: QuantumState, r: AlgebraElement, s: AlgebraElement) -> float:
    """Slack Ψ(R*R)Ψ(S*S) − |Ψ(R*S)|²; nonnegative up to rounding."""
    if r.dim != s.dim:
        raise DimensionMismatchError(r.dim, s.dim)
    rr = expectation(psi, r.star() @ r).real
    ss = expectation(psi, s.star() @ s).real
    rs = expectation(psi, r.star() @ s)
    return float(rr * ss - abs(rs) ** 2)


def check_cstar_identity(r: AlgebraElement, context_pool=()) -> tuple[float, float, float]:
    """(‖R*R‖, ‖R‖², |difference|) with both norms taken over quantum states."""
    lhs = state_norm(r.star() @ r, context_pool)
    rhs = state_norm_squared(r, context_pool)
    return lhs, rhs, abs(lhs - rhs)


def gns_construct(psi: QuantumState) -> GnsRepresentation:
    """Hilbert space, representation and cyclic vector generated by Ψ.

    Coefficients run over the matrix units E_ij in row-major order, where
    Ψ(E_ij* E_kl) = δ_ik ρ_lj gives the Gram matrix I ⊗ ρᵀ. Directions with
    Gram eigenvalue below the rank threshold form the null space and are
    dropped.

    Raises:
        GnsNumericalError: If the Gram matrix has an eigenvalue below −threshold.
    """
    n = psi.dim
    gram = np.kron(np.eye(n), psi.density.T)
    gram = (gram + gram.conj().T) / 2
    w, u = np.linalg.eigh(gram)
    if w[0] < -GRAM_RANK_TOL:
        raise GnsNumericalError(float(w[0]))
    keep = w > GRAM_RANK_TOL
    quotient_basis = u[:, keep] / np.sqrt(w[keep])
    unity = np.eye(n).reshape(-1)
    cyclic_vector = quotient_basis.conj().T @ gram @ unity

    app_logger.json_logger.debug(
        "GNS representation built",
        extra={"dim": n, "quotient_dimension": int(keep.sum()), "state": psi.describe()},
    )
    return GnsRepresentation(
        source_state=psi,
        gram=gram,
        quotient_basis=quotient_basis,
        cyclic_vector=cyclic_vector,
    )


def verify_gns(rep: GnsRepresentation, rng: np.random.Generator, pairs: int = 50) -> GnsReport:
    """Check π on random pairs: multiplicative, *-preserving, recovering Ψ through ξ."""
    n = rep.algebra_dim
    xi = rep.cyclic_vector
    homomorphism = involution = recovery = 0.0
    for _ in range(pairs):
        r = AlgebraElement(random_element(rng, n))
        s = AlgebraElement(random_element(rng, n))
        pi_r, pi_s = rep.represent(r), rep.represent(s)
        homomorphism = max(homomorphism, float(np.linalg.norm(rep.represent(r @ s) - pi_r @ pi_s)))
        involution = max(involution, float(np.linalg.norm(rep.represent(r.star()) - pi_r.conj().T)))
        recovered = xi.conj() @ pi_r @ xi
        recovery = max(recovery, abs(recovered - expectation(rep.source_state, r)))
    rho = rep.source_state.density
    # Ψ(E_ij) = ρ_ji
    for (i, j), image in rep.represented.items():
        recovery = max(recovery, abs(xi.conj() @ image @ xi - rho[j, i]))
    unity = float(np.linalg.norm(rep.represent(AlgebraElement(np.eye(n))) - np.eye(rep.quotient_dimension)))
    rank = int(np.linalg.matrix_rank(rep.gram, tol=GRAM_RANK_TOL))
    cyclic_norm = float(np.linalg.norm(xi))

    passed = (
        rep.quotient_dimension == rank
        and homomorphism <= HOMOMORPHISM_TOL
        and involution <= HOMOMORPHISM_TOL
        and recovery <= RECOVERY_TOL
        and unity <= HOMOMORPHISM_TOL
        and abs(cyclic_norm - 1.0) <= RECOVERY_TOL
    )
    return GnsReport(
        dim=n,
        state=rep.source_state.describe(),
        quotient_dimension=rep.quotient_dimension,
        gram_min_eigenvalue=float(np.linalg.eigvalsh(rep.gram)[0]),
        homomorphism_defect=homomorphism,
        involution_defect=involution,
        recovery_defect=float(recovery),
        unity_defect=unity,
        cyclic_norm=cyclic_norm,
        pairs=pairs,
        passed=passed,
    )
