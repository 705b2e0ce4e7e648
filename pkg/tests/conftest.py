import numpy as np
import pytest

from app.models import Observable
from app.services.model_service import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    build_qubit_model,
    build_singlet_model,
)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size statistical and suite runs")


@pytest.fixture(scope="session")
def app():
    """Create Flask app with a test configuration."""
    from app import create_app

    app = create_app()
    app.config.update(
        {
            "TESTING": True,
            "MAX_API_SAMPLES": 50_000,
        }
    )
    yield app


@pytest.fixture
def client(app):
    """Flask test client."""
    return app.test_client()


@pytest.fixture
def runner(app):
    """Flask CLI runner."""
    return app.test_cli_runner()


@pytest.fixture
def rng():
    """Fixed-seed generator for randomized property checks."""
    return np.random.default_rng(20240611)


@pytest.fixture
def paulis():
    """Pauli observables and the qubit unity."""
    return {
        "sx": Observable(SIGMA_X, name="sx"),
        "sy": Observable(SIGMA_Y, name="sy"),
        "sz": Observable(SIGMA_Z, name="sz"),
        "I": Observable(np.eye(2), name="I"),
    }


@pytest.fixture
def qubit_model():
    return build_qubit_model()


@pytest.fixture
def singlet_model():
    return build_singlet_model()
