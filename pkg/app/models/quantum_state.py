from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from app.helper.tolerance import CLUSTER_TOL
from app.models.context import MeasurementContext


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Ensemble {φ}_Q of all physical states sharing one generator label on a context.

    In M_n a maximal context has one-dimensional joint eigenspaces, so the label
    picks exactly one basis column; ``vector`` is that column. Its global phase
    carries no meaning.
    """

    context: MeasurementContext
    index: int
    label: Tuple[Tuple[str, float], ...]
    vector: np.ndarray

    def __post_init__(self):
        vector = np.array(self.vector, dtype=np.complex128, copy=True)
        vector.setflags(write=False)
        object.__setattr__(self, "vector", vector)
        object.__setattr__(self, "label", tuple((str(n), float(v)) for n, v in self.label))

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    @property
    def density(self) -> np.ndarray:
        """ρ = |v⟩⟨v|, so Ψ(X) = tr(ρX)."""
        return np.outer(self.vector, self.vector.conj())

    def describe(self) -> str:
        return ", ".join(f"{name}={value:+.6g}" for name, value in self.label)

    def __repr__(self):
        return f"<QuantumState {self.context.label}[{self.describe()}]>"


class Outcome(NamedTuple):
    index: int
    value: float
    probability: float


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Born measure μ_Q over the characters of a context for one observable.

    ``outcomes`` are sorted by value, ties by character index; ``cdf`` runs
    along that order and ends at exactly 1.
    """

    context: MeasurementContext
    observable_label: str
    outcomes: Tuple[Outcome, ...]
    cdf: np.ndarray

    def __post_init__(self):
        cdf = np.array(self.cdf, dtype=np.float64, copy=True)
        cdf.setflags(write=False)
        object.__setattr__(self, "cdf", cdf)
        object.__setattr__(self, "outcomes", tuple(self.outcomes))

    @property
    def values(self) -> np.ndarray:
        return np.array([o.value for o in self.outcomes])

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([o.probability for o in self.outcomes])

    def mean(self) -> float:
        return float(np.dot(self.values, self.probabilities))

    def distribution(self) -> "OrderedDict[float, float]":
        """Clustered value → probability, ascending, zero-probability points dropped."""
        grouped: OrderedDict[float, float] = OrderedDict()
        anchor = None
        for outcome in self.outcomes:
            if anchor is None or outcome.value - anchor > CLUSTER_TOL:
                anchor = outcome.value
                grouped[anchor] = 0.0
            grouped[anchor] += outcome.probability
        return OrderedDict((v, p) for v, p in grouped.items() if p > 0.0)

    def is_point_mass(self) -> bool:
        return len(self.distribution()) == 1
