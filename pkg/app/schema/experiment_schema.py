"""Pydantic schemas for experiment configuration and HTTP requests."""

import math
from typing import List, Optional, Union

from pydantic import BaseModel, Field, field_validator

from config import Config

KNOWN_MODELS = ("qubit", "singlet", "oscillator")


class ExperimentConfig(BaseModel):
    """Experiment parameters from a JSON file, CLI flags or a request body.

    ``angles`` is either the preset ``"canonical"`` or four radians
    ``[a, a', b, b']``.
    """

    model: str = "qubit"
    n: int = Field(10_000, ge=1)
    seed: int = Field(default_factory=lambda: Config.SEED, ge=0)
    angles: Optional[Union[str, List[float]]] = None
    observable: Optional[str] = None
    state: Optional[str] = None
    output: Optional[str] = None
    partitions: int = Field(default_factory=lambda: Config.PARTITIONS, ge=1)
    levels: Optional[int] = Field(None, ge=2)
    dims: Optional[List[int]] = None
    trials: Optional[int] = Field(None, ge=1)

    @field_validator("model")
    @classmethod
    def known_model(cls, value: str) -> str:
        # model files are accepted by path
        if value not in KNOWN_MODELS and not value.endswith(".json"):
            raise ValueError(f"unknown model '{value}' (known: {', '.join(KNOWN_MODELS)})")
        return value

    @field_validator("angles")
    @classmethod
    def finite_angles(cls, value):
        if value is None or isinstance(value, str):
            if isinstance(value, str) and value != "canonical":
                raise ValueError("angles preset must be 'canonical'")
            return value
        if len(value) != 4:
            raise ValueError("angles must be four radians [a, a', b, b']")
        if not all(math.isfinite(x) for x in value):
            raise ValueError("angles must be finite")
        return value

    @field_validator("dims")
    @classmethod
    def positive_dims(cls, value):
        if value is not None and any(d < 2 for d in value):
            raise ValueError("dims must be >= 2")
        return value


class CorrelatorRequest(BaseModel):
    a: float = Field(..., allow_inf_nan=False)
    b: float = Field(..., allow_inf_nan=False)
    n: int = Field(10_000, ge=1)
    seed: int = Field(default_factory=lambda: Config.SEED, ge=0)


class ContextInspectRequest(BaseModel):
    """Build the context generated by named observables of a model."""

    model: str = "qubit"
    observables: List[str] = Field(..., min_length=1)
    levels: Optional[int] = Field(None, ge=2)
