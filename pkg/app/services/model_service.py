"""Model service: canned matrix models, model files and name resolution."""

import json
import re
from functools import lru_cache
from pathlib import Path

import numpy as np

from app.helper.error_handler import InvalidDimensionError, ModelFormatError, UnknownNameError
from app.models.algebra_element import Observable
from app.models.lab_model import LabModel
from app.models.quantum_state import QuantumState
from app.schema.report_schema import ModelSummary
from app.services.algebra_service import observable_from_payload
from app.services.context_service import context_from
from app.services.ensemble_service import quantum_state_for_label
from config import Config

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)

MODEL_NAMES = ("qubit", "singlet", "oscillator")

ANGLE_PRESETS = {
    # a, a', b, b'
    "canonical": (0.0, np.pi / 2, np.pi / 4, 3 * np.pi / 4),
}

_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*\*?\s*)?([A-Za-z_][\w]*)?\s*")


def spin_along(theta: float) -> np.ndarray:
    """n·σ for n = (sin θ, 0, cos θ)."""
    return np.cos(theta) * SIGMA_Z + np.sin(theta) * SIGMA_X


@lru_cache(maxsize=None)
def build_qubit_model() -> LabModel:
    observables = {
        "I": Observable(IDENTITY_2, name="I"),
        "sx": Observable(SIGMA_X, name="sx"),
        "sy": Observable(SIGMA_Y, name="sy"),
        "sz": Observable(SIGMA_Z, name="sz"),
        "sxz": Observable((SIGMA_X + SIGMA_Z) / np.sqrt(2), name="sxz"),
    }
    states = {}
    for axis in ("x", "y", "z"):
        states[f"s{axis}+"] = f"s{axis}=1"
        states[f"s{axis}-"] = f"s{axis}=-1"
    return LabModel("qubit", 2, observables, states, description="Spin 1/2 with Pauli observables")


@lru_cache(maxsize=None)
def build_singlet_model() -> LabModel:
    swap = np.eye(4, dtype=np.complex128)[[0, 2, 1, 3]]
    sz_a = np.kron(SIGMA_Z, IDENTITY_2)
    sz_b = np.kron(IDENTITY_2, SIGMA_Z)
    observables = {
        "I": Observable(np.eye(4), name="I"),
        "sz_a": Observable(sz_a, name="sz_a"),
        "sz_b": Observable(sz_b, name="sz_b"),
        "sx_a": Observable(np.kron(SIGMA_X, IDENTITY_2), name="sx_a"),
        "sx_b": Observable(np.kron(IDENTITY_2, SIGMA_X), name="sx_b"),
        "total_sz": Observable(sz_a + sz_b, name="total_sz"),
        "swap": Observable(swap, name="swap"),
    }
    states = {
        "singlet": "total_sz=0,swap=-1",
        "triplet0": "total_sz=0,swap=1",
        "up_up": "total_sz=2",
        "down_down": "total_sz=-2",
    }
    return LabModel("singlet", 4, observables, states, description="Two spins 1/2 of a spin-zero decay")


@lru_cache(maxsize=32)
def build_oscillator_model(levels: int) -> LabModel:
    """Harmonic oscillator truncated to ``levels`` Fock states."""
    if not isinstance(levels, (int, np.integer)) or isinstance(levels, bool) or levels < 2:
        raise InvalidDimensionError(levels)
    lowering = np.diag(np.sqrt(np.arange(1, levels)), k=1).astype(np.complex128)
    raising = lowering.conj().T
    number = np.diag(np.arange(levels)).astype(np.complex128)
    observables = {
        "I": Observable(np.eye(levels), name="I"),
        "N": Observable(number, name="N"),
        "X": Observable((lowering + raising) / np.sqrt(2), name="X"),
        "P": Observable(1j * (raising - lowering) / np.sqrt(2), name="P"),
        "H": Observable(number + np.eye(levels) / 2, name="H"),
    }
    states = {f"n{k}": f"N={k}" for k in range(levels)}
    states["ground"] = "N=0"
    return LabModel("oscillator", levels, observables, states, description=f"Oscillator on {levels} levels")


def load_model_file(path) -> LabModel:
    """Read ``{"dim", "observables": {name: {"re", "im"}}, "states"?, "name"?, "description"?}``."""
    try:
        document = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ModelFormatError(f"Cannot read model file {path}: {e}")
    if not isinstance(document, dict):
        raise ModelFormatError("Model file must hold a JSON object")
    dim = document.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ModelFormatError(f"'dim' must be a positive integer, got {dim!r}")
    raw = document.get("observables")
    if not isinstance(raw, dict) or not raw:
        raise ModelFormatError("'observables' must be a non-empty object")
    observables = {name: observable_from_payload(name, payload, dim) for name, payload in raw.items()}
    states = document.get("states", {})
    if not isinstance(states, dict) or not all(isinstance(v, str) for v in states.values()):
        raise ModelFormatError("'states' must map names to label expressions")
    return LabModel(
        name=document.get("name", Path(path).stem),
        dim=dim,
        observables=observables,
        states=states,
        description=document.get("description", ""),
    )


def get_model(name: str, levels: int | None = None) -> LabModel:
    if name == "qubit":
        return build_qubit_model()
    if name == "singlet":
        return build_singlet_model()
    if name == "oscillator":
        return build_oscillator_model(levels or Config.OSCILLATOR_LEVELS)
    if name.endswith(".json"):
        return load_model_file(name)
    raise UnknownNameError("model", name, MODEL_NAMES)


def list_models() -> list[ModelSummary]:
    return [
        ModelSummary(
            name=model.name,
            dim=model.dim,
            description=model.description,
            observables=sorted(model.observables),
            states=model.states,
        )
        for model in (build_qubit_model(), build_singlet_model(), get_model("oscillator"))
    ]


def _lookup(model: LabModel, name: str) -> Observable:
    if name not in model.observables:
        raise UnknownNameError("observable", name, model.observables)
    return model.observables[name]


def parse_observable(model: LabModel, expression: str) -> Observable:
    """Real linear combination of model observables, e.g. ``0.5*sx+sz`` or ``-sz``."""
    text = expression.strip()
    if not text:
        raise UnknownNameError("observable", expression, model.observables)
    if text in model.observables:
        return model.observables[text]

    total = np.zeros((model.dim, model.dim), dtype=np.complex128)
    position = 0
    while position < len(text):
        match = _TERM.match(text, position)
        sign, coefficient, name = match.groups() if match else (None, None, None)
        if not match or match.end() == position or (coefficient is None and name is None):
            raise UnknownNameError("observable", expression, model.observables)
        if position > 0 and not sign:
            raise UnknownNameError("observable", expression, model.observables)
        factor = (-1.0 if sign == "-" else 1.0) * (float(coefficient) if coefficient else 1.0)
        total += factor * (_lookup(model, name).entries if name else np.eye(model.dim))
        position = match.end()
    return Observable(total, name=text.replace(" ", ""))


def parse_label(model: LabModel, expression: str) -> dict[str, float]:
    """``"total_sz=0,swap=-1"`` → {name: value}."""
    label = {}
    for part in expression.split(","):
        name, sep, raw = part.partition("=")
        name = name.strip()
        try:
            if not sep:
                raise ValueError(part)
            label[name] = float(raw)
        except ValueError:
            raise UnknownNameError("state label", expression)
        _lookup(model, name)
    return label


def resolve_state(model: LabModel, name: str) -> QuantumState:
    """Named state or literal label expression → quantum state on the context of its generators."""
    expression = model.states.get(name)
    if expression is None:
        if "=" not in name:
            raise UnknownNameError("state", name, model.states)
        expression = name
    label = parse_label(model, expression)
    ctx = context_from([model.observables[key] for key in label])
    return quantum_state_for_label(ctx, label)


def resolve_angles(angles) -> tuple[float, float, float, float]:
    if angles is None:
        return ANGLE_PRESETS["canonical"]
    if isinstance(angles, str):
        if angles not in ANGLE_PRESETS:
            raise UnknownNameError("angle preset", angles, ANGLE_PRESETS)
        return ANGLE_PRESETS[angles]
    return tuple(float(x) for x in angles)
