import pytest

from geometry.icosahedron import build_icosahedron
from reorient.graph import face_graph_from_config
from utils.config import MaterialSpec, ReorientationConfig, RunConfig, VehicleParams


@pytest.fixture(scope="session")
def model():
    return build_icosahedron(0.20)


@pytest.fixture
def materials():
    return MaterialSpec()


@pytest.fixture
def params():
    return VehicleParams()


@pytest.fixture
def run_config():
    return RunConfig()


@pytest.fixture(scope="session")
def face_graph(model):
    return face_graph_from_config(model, VehicleParams(), ReorientationConfig())
