from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple, Optional, Tuple

from app.models.context import Character, MeasurementContext

if TYPE_CHECKING:
    from app.models.quantum_state import QuantumState


class Coordinate(NamedTuple):
    fingerprint: str
    name: str
    context_label: str
    value: float


@dataclass(frozen=True, eq=False)
class CoordinateChart:
    """Chain of visited contexts with the character chosen in each.

    The generator values of context ``k`` at ``indices[k]`` are the coordinate
    set S_k of the physical state.
    """

    context_chain: Tuple[MeasurementContext, ...]
    indices: Tuple[int, ...]

    def coordinates(self) -> list[list[Coordinate]]:
        """Per context, the generator values S_i."""
        chart = []
        for ctx, index in zip(self.context_chain, self.indices):
            chart.append(
                [
                    Coordinate(g.fingerprint, g.label, ctx.label, float(ctx.generator_spectra[k, index]))
                    for k, g in enumerate(ctx.generators)
                ]
            )
        return chart

    def characters(self) -> list[Character]:
        return [Character(ctx, index) for ctx, index in zip(self.context_chain, self.indices)]

    def extended(self, ctx: MeasurementContext, index: int) -> CoordinateChart:
        return CoordinateChart(self.context_chain + (ctx,), self.indices + (index,))


@dataclass(frozen=True, eq=False)
class PhysicalState:
    """Individual-trial valuation φ: contextual, extended lazily across contexts.

    Identity is the trial; two states with equal values are still different
    states when their trial ids differ.
    """

    trial_id: int
    home_character: Character
    chart: CoordinateChart
    ensemble: Optional["QuantumState"] = None

    @property
    def home_context(self) -> MeasurementContext:
        return self.home_character.context

    @property
    def coordinate_record(self) -> "OrderedDict[str, float]":
        """Observable fingerprint → assigned value, in visiting order."""
        record: OrderedDict[str, float] = OrderedDict()
        for coordinates in self.chart.coordinates():
            for coordinate in coordinates:
                record.setdefault(coordinate.fingerprint, coordinate.value)
        return record

    def visited(self, ctx: MeasurementContext) -> Optional[int]:
        """Character index chosen in ``ctx`` if the chain went through it."""
        for visited_ctx, index in zip(self.chart.context_chain, self.chart.indices):
            if visited_ctx is ctx:
                return index
        return None

    def __eq__(self, other):
        if not isinstance(other, PhysicalState):
            return NotImplemented
        return self.trial_id == other.trial_id

    def __hash__(self):
        return hash(self.trial_id)

    def __repr__(self):
        return f"<PhysicalState trial={self.trial_id} home={self.home_character!r} chain={len(self.chart.context_chain)}>"
