import pytest

from geometry.icosahedron import EDGE_NODES
from reorient.target import edge_move, shared_nodes
from sim.feasibility import is_feasible, pivot_torque_requirement
from utils.config import VehicleParams


def all_edge_moves(model):
    return [
        edge_move(model, a, b)
        for a in range(1, 21)
        for b in range(1, 21)
        if a != b and len(shared_nodes(model, a, b)) == EDGE_NODES
    ]


def test_gravity_opposes_every_edge_pivot(model, params):
    for move in all_edge_moves(model):
        assert pivot_torque_requirement(model, params, move) < 0


def test_requirement_scales_with_weight(model, params):
    move = edge_move(model, 1, 2)
    heavy = VehicleParams(mass=2 * params.mass)
    assert pivot_torque_requirement(model, heavy, move) == pytest.approx(
        2 * pivot_torque_requirement(model, params, move)
    )


@pytest.mark.parametrize(
    "margin, expected",
    [
        # Given: the default vehicle, unit margin
        # Expected: every edge pivot is within reach
        (1.0, True),
        # Given: an absurd margin
        # Expected: nothing is within reach
        (1e3, False),
    ],
)
def test_is_feasible(model, params, margin, expected):
    assert all(is_feasible(model, params, move, margin) == expected for move in all_edge_moves(model))


def test_weak_propellers_cannot_pivot(model, params):
    weak = params.model_copy(update={"thrust_min": -1e-3, "thrust_max": 1e-3})
    assert not any(is_feasible(model, weak, move) for move in all_edge_moves(model))
