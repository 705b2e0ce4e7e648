from .experiment_route import experiment_bp
from .model_route import model_bp


def register_routes(app):
    app.register_blueprint(model_bp, url_prefix="/api")
    app.register_blueprint(experiment_bp, url_prefix="/api/experiments")
