import numpy as np
import pytest

from geometry.icosahedron import FACE_COUNT, face_adjacency
from geometry.rotations import matrix_from_euler
from reorient.identification import FaceIdentifier, face_tilt, identify_contact_face, tilt_separation
from reorient.target import resting_attitude

PERTURBATION = np.radians(5.0)


@pytest.fixture(scope="module")
def identifier(model):
    return FaceIdentifier(model)


@pytest.mark.parametrize("face", range(1, FACE_COUNT + 1))
def test_identify_own_tilt(model, identifier, face):
    pitch, roll = face_tilt(model, face)
    assert identifier.identify(pitch, roll) == face
    assert identify_contact_face(model, pitch, roll) == face


@pytest.mark.parametrize("yaw", np.linspace(-np.pi, np.pi, 8, endpoint=False))
def test_identify_ignores_yaw(model, identifier, yaw):
    for face in range(1, FACE_COUNT + 1):
        attitude = matrix_from_euler(yaw, 0.0, 0.0) @ resting_attitude(model, face)
        assert identifier.identify_attitude(attitude) == face


def test_identify_with_perturbed_tilt(model, identifier):
    # Given
    rng = np.random.default_rng(3)

    # When
    hits = 0
    for face in range(1, FACE_COUNT + 1):
        pitch, roll = face_tilt(model, face) + rng.uniform(-PERTURBATION, PERTURBATION, 2)
        hits += identifier.identify(pitch, roll) == face

    # Then
    assert hits == FACE_COUNT


def test_tilt_separation(model):
    # When
    separation = tilt_separation(model)

    # Then
    assert separation.shape == (FACE_COUNT, FACE_COUNT)
    np.testing.assert_allclose(np.diag(separation), 0.0, atol=1e-6)
    np.testing.assert_allclose(separation, separation.T, atol=1e-9)
    off_diagonal = separation[~np.eye(FACE_COUNT, dtype=bool)]
    smallest_pivot = min(pair.angle for pair in face_adjacency(model))
    # no two faces are closer in tilt than their normals are apart
    assert off_diagonal.min() >= smallest_pivot - 1e-9
    # a 5 degree error in pitch and roll is well inside half the separation
    assert off_diagonal.min() > 2 * np.sqrt(2) * PERTURBATION


def test_angles_are_zero_at_the_face_tilt(model, identifier):
    index = 6
    pitch, roll = identifier.tilts[index]
    angles = identifier.angles(pitch, roll)
    assert angles[index] == pytest.approx(0.0, abs=1e-6)
    assert np.argmin(angles) == index
