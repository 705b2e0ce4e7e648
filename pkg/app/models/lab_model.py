from dataclasses import dataclass, field
from typing import Dict

from app.models.algebra_element import Observable


@dataclass(frozen=True)
class LabModel:
    """A named matrix model: observables on M_dim plus named quantum-state labels.

    ``states`` maps a short name to a label expression such as
    ``"total_sz=0,swap=-1"``.
    """

    name: str
    dim: int
    observables: Dict[str, Observable]
    states: Dict[str, str] = field(default_factory=dict)
    description: str = ""
