"""Experiment routes: run laboratory experiments over HTTP JSON."""

from flask import Blueprint, current_app, request

from app.helper.base_response import response_success
from app.helper.error_handler import UsageError, handle_errors
from app.schema.experiment_schema import CorrelatorRequest, ExperimentConfig
from app.services import experiment_service, postulate_service

experiment_bp = Blueprint("experiments", __name__)

# upper bound on postulate trials per request
MAX_POSTULATE_TRIALS = 200


def _config(**defaults) -> ExperimentConfig:
    payload = {**defaults, **(request.get_json(silent=True) or {})}
    cfg = ExperimentConfig(**payload)
    limit = current_app.config["MAX_API_SAMPLES"]
    if cfg.n > limit:
        raise UsageError(f"n = {cfg.n} exceeds the limit of {limit} samples", message="Request too large")
    return cfg


@experiment_bp.route("/epr", methods=["POST"])
@handle_errors
def epr():
    """EPR–Bohm anticorrelation report."""
    cfg = _config(model="singlet", n=1000)
    report = experiment_service.run_epr_bohm(cfg.n, cfg.seed, partitions=cfg.partitions)
    return response_success("EPR-Bohm experiment finished", data=report)


@experiment_bp.route("/correlator", methods=["POST"])
@handle_errors
def correlator():
    """Singlet correlator E(a, b)."""
    body = CorrelatorRequest(**(request.get_json(silent=True) or {}))
    if body.n > current_app.config["MAX_API_SAMPLES"]:
        raise UsageError(f"n = {body.n} exceeds the sample limit", message="Request too large")
    report = experiment_service.singlet_correlator(body.a, body.b, body.n, body.seed)
    return response_success("Correlator computed", data=report)


@experiment_bp.route("/chsh", methods=["POST"])
@handle_errors
def chsh():
    """CHSH combination; angles default to the canonical preset."""
    cfg = _config(model="singlet", angles="canonical")
    report = experiment_service.run_chsh(cfg.angles, cfg.n, cfg.seed, partitions=cfg.partitions)
    return response_success("CHSH experiment finished", data=report)


@experiment_bp.route("/average", methods=["POST"])
@handle_errors
def average():
    cfg = _config()
    report = experiment_service.run_average(cfg)
    return response_success("Quantum average verified", data=report)


@experiment_bp.route("/gns", methods=["POST"])
@handle_errors
def gns():
    cfg = _config()
    report = experiment_service.run_gns(cfg)
    return response_success("GNS representation verified", data=report)


@experiment_bp.route("/postulates", methods=["POST"])
@handle_errors
def postulates():
    """Randomized invariant suite; small defaults keep the request short."""
    cfg = _config(dims=[2, 3, 4], trials=5)
    if cfg.trials and cfg.trials > MAX_POSTULATE_TRIALS:
        raise UsageError(f"trials = {cfg.trials} exceeds {MAX_POSTULATE_TRIALS}", message="Request too large")
    report = postulate_service.run_postulate_suite(dims=cfg.dims or [2, 3, 4], trials=cfg.trials or 5, seed=cfg.seed)
    return response_success("Postulate suite finished", data=report)
