import pytest

from geometry.icosahedron import build_icosahedron
from reorient.graph import face_graph_from_config
from utils.config import get_config


@pytest.fixture(scope="session")
def init_config():
    return get_config()


@pytest.fixture(scope="session")
def model(init_config):
    return build_icosahedron(init_config.geometry.rod_length)


@pytest.fixture(scope="session")
def face_graph(init_config, model):
    return face_graph_from_config(model, init_config.vehicle, init_config.reorientation)


@pytest.fixture
def noise_free_config(init_config):
    simulation = init_config.simulation.model_copy(
        update={"gyro_noise_std": 0.0, "accel_noise_std": 0.0, "gyro_bias": (0.0, 0.0, 0.0)}
    )
    return init_config.model_copy(update={"simulation": simulation})
