"""Model routes: canned models and context inspection."""

from flask import Blueprint, request

from app.helper.base_response import response_success
from app.helper.error_handler import handle_errors
from app.schema.experiment_schema import ContextInspectRequest
from app.services import experiment_service, model_service

model_bp = Blueprint("models", __name__)


@model_bp.route("/models")
@handle_errors
def list_models():
    """List canned models with their observables and named states."""
    return response_success("Models retrieved", data=model_service.list_models())


@model_bp.route("/contexts/inspect", methods=["POST"])
@handle_errors
def inspect_context():
    """Context generated by named commuting observables of a model."""
    body = ContextInspectRequest(**(request.get_json(silent=True) or {}))
    dump = experiment_service.inspect_context(body.model, body.observables, body.levels)
    return response_success("Context constructed", data=dump)
