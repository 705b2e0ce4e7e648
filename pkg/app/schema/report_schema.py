"""Pydantic schemas for experiment reports.

Reports carry no timestamps so that reruns with the same seed serialize
byte-identically.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class MatrixPayload(BaseModel):
    re: List[List[float]]
    im: List[List[float]]


class ContextDump(BaseModel):
    """Joint eigenbasis, generators and per-generator values of one context."""

    label: str
    dim: int
    basis: MatrixPayload
    generators: List[str]
    spectra: Dict[str, List[float]]
    commutant_dimension: int


class TrailPoint(BaseModel):
    n: int
    mean: float


class ConvergenceReport(BaseModel):
    """Running mean of φ_i(A) against Ψ_Q(A) with the 3σ_max/√n gate."""

    observable: str
    state: str
    n: int = Field(..., ge=1)
    seed: int
    partitions: int = 1
    empirical_mean: float
    target: float
    deviation: float = Field(..., ge=0)
    sigma_max: float = Field(..., ge=0)
    bound: float = Field(..., ge=0)
    passed: bool
    trail: List[TrailPoint]


class CorrelatorReport(BaseModel):
    """Empirical E(a, b) of the singlet against −cos(a − b)."""

    a: float
    b: float
    n: int
    empirical: float = Field(..., ge=-1, le=1)
    target: float
    deviation: float
    bound: float
    passed: bool


class ChshResult(BaseModel):
    angles: Dict[str, float]
    correlators: Dict[str, CorrelatorReport]
    s: float
    target: float
    deviation: float
    tolerance: float
    counts: Dict[str, int]
    disjoint: bool
    classical_bound_exceeded: bool
    passed: bool


class AxisReport(BaseModel):
    axis: str
    n: int
    anticorrelation_frequency: float
    marginal_a_plus: float
    marginal_b_plus: float


class EprReport(BaseModel):
    """Per-draw anticorrelation on the z and x axes plus the extension demo."""

    n: int
    seed: int
    axes: List[AxisReport]
    extension_context: str
    extension_trials: int
    joint_memberships: int
    passed: bool


class GnsReport(BaseModel):
    dim: int
    state: str
    quotient_dimension: int
    gram_min_eigenvalue: float
    homomorphism_defect: float
    involution_defect: float
    recovery_defect: float
    unity_defect: float
    cyclic_norm: float
    pairs: int
    passed: bool


class CheckResult(BaseModel):
    name: str
    max_defect: float
    tolerance: float
    passed: bool
    detail: Optional[str] = None


class PostulateReport(BaseModel):
    dims: List[int]
    trials: int
    seed: int
    checks: List[CheckResult]
    passed: bool


class ModelSummary(BaseModel):
    name: str
    dim: int
    description: str
    observables: List[str]
    states: Dict[str, str]
