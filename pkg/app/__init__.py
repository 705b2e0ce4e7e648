import time
import uuid

import numpy as np
import scipy
from flask import Flask, jsonify
from werkzeug.exceptions import HTTPException

from config import Config
from app.helper.base_response import response_error
from app.helper.logger import init_logger
from app.routes import register_routes

# Status code -> (message, detail) for errors raised outside the blueprints
HTTP_ERRORS = {
    404: ("Not Found", "The requested URL was not found on the server."),
    405: ("Method Not Allowed", "The method is not allowed for the requested URL."),
    500: ("Internal Server Error", "An unexpected error occurred."),
}


def _register_error_handlers(app, json_logger):
    def handle(error):
        status = error.code if isinstance(error, HTTPException) else 500
        message, detail = HTTP_ERRORS.get(status, HTTP_ERRORS[500])
        error_id = str(uuid.uuid4())
        if status >= 500:
            json_logger.error(f"{message} [{error_id}]: {error}", exc_info=True)
        else:
            json_logger.warning(f"{message} [{error_id}]: {error}")
        response, _ = response_error(message=message, error={"error_id": error_id, "detail": detail})
        return response, status

    for status in HTTP_ERRORS:
        app.register_error_handler(status, handle)


def create_app():
    app = Flask(__name__)
    app.config.from_object(Config)
    # Reports must serialize byte-identically for equal seeds
    app.json.sort_keys = app.config["JSON_SORT_KEYS"]

    init_logger(app)
    from app.helper.logger import json_logger

    @app.route("/health")
    def health_check():
        """Liveness plus the numerical settings every report depends on."""
        return jsonify(
            {
                "status": "healthy",
                "context_seed": app.config["CONTEXT_SEED"],
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "timestamp": time.time(),
            }
        ), 200

    _register_error_handlers(app, json_logger)
    register_routes(app)

    from app.cli import register_cli

    register_cli(app)
    json_logger.info("Operator lab ready", extra={"context_seed": app.config["CONTEXT_SEED"]})

    return app
