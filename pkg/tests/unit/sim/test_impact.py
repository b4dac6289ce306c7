import pytest

from sim.impact import simulate_wall_impact
from stress.exceptions import InvalidImpactInputError

IMPACT_FORCE = 266.175
FOURFOLD = 4.0


def test_default_impact(model, params, materials):
    result = simulate_wall_impact(6.5, 0.02, params, model, materials)

    assert result.f_max == pytest.approx(IMPACT_FORCE, rel=1e-3)
    assert result.report is not None
    assert result.report.f_max == result.f_max
    assert result.verdict == result.report.verdict()
    summary = result.summary()
    assert summary["f_max"] == result.f_max
    assert summary["passed"] == result.verdict.passed


def test_resting_vehicle_loads_nothing(model, params, materials):
    result = simulate_wall_impact(0.0, 0.02, params, model, materials)

    assert result.f_max == 0
    assert result.report is None
    assert result.verdict.passed
    assert result.summary()["sweep"] is None


def test_double_speed_quadruples_tension(model, params, materials):
    slow = simulate_wall_impact(1.0, 0.02, params, model, materials)
    fast = simulate_wall_impact(2.0, 0.02, params, model, materials)

    assert fast.f_max == pytest.approx(FOURFOLD * slow.f_max)
    assert fast.report.t_max == pytest.approx(FOURFOLD * slow.report.t_max, rel=1e-4)


@pytest.mark.parametrize("speed, distance", [(-1.0, 0.02), (1.0, 0.0)])
def test_invalid_impact(model, params, materials, speed, distance):
    with pytest.raises(InvalidImpactInputError):
        simulate_wall_impact(speed, distance, params, model, materials)
