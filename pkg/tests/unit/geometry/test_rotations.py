import numpy as np
import pytest

from geometry.rotations import (
    E_Z,
    HALF_TURN_X,
    axis_angle_matrix,
    euler_from_matrix,
    exp_map,
    is_rotation,
    matrix_from_euler,
    orthonormalize,
    rotation_angle,
    rotation_vector,
    rotation_z_to,
    skew,
    tilt_matrix,
)


def test_skew_is_cross_product():
    a, b = np.array([0.3, -1.2, 2.0]), np.array([-0.7, 0.4, 1.1])
    np.testing.assert_allclose(skew(a) @ b, np.cross(a, b))


@pytest.mark.parametrize(
    "target",
    [
        np.array([0.0, 0.0, 1.0]),
        np.array([1.0, 0.0, 0.0]),
        np.array([0.0, -1.0, 2.0]) / np.sqrt(5),
        np.array([0.3, 0.2, -0.9]),
        np.array([0.0, 0.0, -1.0]),
    ],
)
def test_rotation_z_to(target):
    # When
    r = rotation_z_to(target)

    # Then
    assert is_rotation(r)
    np.testing.assert_allclose(r @ E_Z, target / np.linalg.norm(target), atol=1e-10)


def test_rotation_z_to_opposite_is_half_turn_about_x():
    np.testing.assert_array_equal(rotation_z_to(-E_Z), HALF_TURN_X)


def test_axis_angle_matrix():
    r = axis_angle_matrix(np.array([0.0, 0.0, 2.0]), np.pi / 2)
    np.testing.assert_allclose(r @ np.array([1.0, 0.0, 0.0]), [0.0, 1.0, 0.0], atol=1e-12)
    assert rotation_angle(r) == pytest.approx(np.pi / 2)


@pytest.mark.parametrize(
    "rotvec",
    [
        np.array([0.1, -0.2, 0.3]),
        np.array([0.0, 0.0, 0.0]),
        np.array([1.5, 0.5, -1.0]),
    ],
)
def test_rotation_vector_inverts_exp_map(rotvec):
    np.testing.assert_allclose(rotation_vector(exp_map(rotvec)), rotvec, atol=1e-10)


@pytest.mark.parametrize(
    "axis, expected",
    [
        # Given: half turn about -z
        # Expected: axis reported along +z
        (np.array([0.0, 0.0, -1.0]), np.array([0.0, 0.0, np.pi])),
        # Given: half turn about -x
        # Expected: axis reported along +x
        (np.array([-1.0, 0.0, 0.0]), np.array([np.pi, 0.0, 0.0])),
        # Given: half turn about -y
        # Expected: axis reported along +y
        (np.array([0.0, -1.0, 0.0]), np.array([0.0, np.pi, 0.0])),
    ],
)
def test_rotation_vector_half_turn_sign(axis, expected):
    np.testing.assert_allclose(rotation_vector(axis_angle_matrix(axis, np.pi)), expected, atol=1e-8)


@pytest.mark.parametrize("yaw, pitch, roll", [(0.3, -0.4, 1.1), (-2.0, 0.2, -0.5), (0.0, 0.0, 0.0)])
def test_euler_round_trip(yaw, pitch, roll):
    r = matrix_from_euler(yaw, pitch, roll)
    assert euler_from_matrix(r) == pytest.approx((yaw, pitch, roll))


def test_tilt_matrix_has_zero_yaw():
    yaw, pitch, roll = euler_from_matrix(tilt_matrix(0.2, -0.3))
    assert yaw == pytest.approx(0.0, abs=1e-12)
    assert (pitch, roll) == pytest.approx((0.2, -0.3))


def test_orthonormalize_repairs_drift():
    # Given: a rotation with accumulated numerical error
    r = matrix_from_euler(0.4, 0.1, -0.2) + 1e-4 * np.arange(9).reshape(3, 3)

    # When
    repaired = orthonormalize(r)

    # Then
    assert is_rotation(repaired)
    assert not is_rotation(r)
    np.testing.assert_allclose(repaired, matrix_from_euler(0.4, 0.1, -0.2), atol=1e-3)
