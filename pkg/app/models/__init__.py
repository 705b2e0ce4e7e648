from app.models.algebra_element import AlgebraElement, Observable
from app.models.context import Character, MeasurementContext
from app.models.physical_state import Coordinate, CoordinateChart, PhysicalState
from app.models.quantum_state import Outcome, QuantumState, SpectralMeasure
from app.models.gns_representation import GnsRepresentation
from app.models.lab_model import LabModel

__all__ = [
    "AlgebraElement",
    "Observable",
    "Character",
    "MeasurementContext",
    "Coordinate",
    "CoordinateChart",
    "PhysicalState",
    "Outcome",
    "QuantumState",
    "SpectralMeasure",
    "GnsRepresentation",
    "LabModel",
]
