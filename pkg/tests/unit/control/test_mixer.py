import numpy as np
import pytest

from control.exceptions import SingularAllocationError
from control.mixer import allocation_matrix, mixer, torque_envelope, wrench
from utils.config import VehicleParams

ARM = 0.06
KAPPA = 0.016


@pytest.mark.parametrize("seed", range(10))
def test_mixer_round_trip(params, seed):
    # Given: commands small enough to stay inside the thrust limits
    rng = np.random.default_rng(seed)
    torque = rng.uniform(-0.02, 0.02, 3)
    thrust = rng.uniform(0.5, 4.0)

    # When
    output = mixer(torque, thrust, params)
    total, realised = wrench(output.thrusts, params)

    # Then
    assert not output.clamped
    assert total == pytest.approx(thrust, abs=1e-10)
    np.testing.assert_allclose(realised, torque, atol=1e-10)


@pytest.mark.parametrize(
    "torque, thrust",
    [
        (np.array([0.01, 0.0, 0.0]), 2.0),
        (np.array([0.0, -0.02, 0.0]), 1.0),
        (np.array([0.0, 0.0, 0.005]), 3.0),
        (np.array([0.01, 0.02, -0.003]), 0.0),
    ],
)
def test_mixer_matches_closed_form(params, torque, thrust):
    # Given: the square X layout with alternating spins
    tau_x, tau_y, tau_z = torque
    expected = np.array(
        [
            thrust / 4 + tau_x / (4 * ARM) - tau_y / (4 * ARM) + tau_z / (4 * KAPPA),
            thrust / 4 + tau_x / (4 * ARM) + tau_y / (4 * ARM) - tau_z / (4 * KAPPA),
            thrust / 4 - tau_x / (4 * ARM) + tau_y / (4 * ARM) + tau_z / (4 * KAPPA),
            thrust / 4 - tau_x / (4 * ARM) - tau_y / (4 * ARM) - tau_z / (4 * KAPPA),
        ]
    )

    # When
    output = mixer(torque, thrust, params)

    # Then
    np.testing.assert_allclose(output.thrusts, expected, atol=1e-12)


def test_mixer_clamps_to_limits(params):
    output = mixer(np.array([0.0, 0.0, 1.0]), 0.0, params)
    assert output.clamped
    assert np.all(output.thrusts <= params.thrust_max)
    assert np.all(output.thrusts >= params.thrust_min)


def test_allocation_matrix_rows(params):
    matrix = allocation_matrix(params)
    np.testing.assert_array_equal(matrix[0], 1.0)
    np.testing.assert_allclose(matrix[1], params.arms[:, 1])
    np.testing.assert_allclose(matrix[2], -params.arms[:, 0])
    np.testing.assert_allclose(matrix[3], np.array(params.spin_directions) * KAPPA)


def test_singular_geometry():
    # Given: all propellers spinning the same way, no yaw authority
    params = VehicleParams(spin_directions=[1, 1, 1, 1])
    with pytest.raises(SingularAllocationError):
        mixer(np.zeros(3), 1.0, params)


@pytest.mark.parametrize(
    "axis, expected",
    [
        # Given: roll axis
        # Expected: two propellers up, two down at full thrust
        (np.array([1.0, 0.0, 0.0]), 4 * ARM * 2.125),
        # Given: pitch axis
        (np.array([0.0, -1.0, 0.0]), 4 * ARM * 2.125),
        # Given: yaw axis
        (np.array([0.0, 0.0, 1.0]), 4 * KAPPA * 2.125),
    ],
)
def test_torque_envelope(params, axis, expected):
    assert torque_envelope(params, axis) == pytest.approx(expected)


def test_torque_envelope_realisable(params):
    # Given
    axis = np.array([0.3, -0.5, 0.2])
    limit = torque_envelope(params, axis)

    # When: exactly the envelope torque
    output = mixer(limit * axis / np.linalg.norm(axis), 0.0, params)

    # Then: one propeller saturates
    assert np.isclose(np.max(np.abs(output.thrusts)), params.thrust_max)


def test_unidirectional_propellers_have_no_envelope():
    params = VehicleParams(thrust_min=0.0)
    assert torque_envelope(params, np.array([1.0, 0.0, 0.0])) == 0.0
