import numpy as np
import pytest

from geometry.icosahedron import NODE_COUNT, face_edges, face_nodes, face_type, string_between
from stress.analysis import (
    SWEEP_HEADER,
    cross_check,
    representative_top_faces,
    solve_case,
    sweep,
    sweep_cases,
    unloaded_summary,
)
from stress.problem import LoadCase, applied_loads, equality_system, restrains_structure
from stress.truss import unilateral_truss_solve
from utils.config import MaterialSpec

SWEEP_CASE_COUNT = 14
REFERENCE_FORCE = 100.0
THREE_STRINGS = 3
TWO_STRINGS = 2


@pytest.fixture(scope="module")
def report(model):
    return sweep(model, REFERENCE_FORCE, MaterialSpec(), max_workers=2)


def test_representative_top_faces(model):
    three, two = representative_top_faces(model)
    assert face_type(model, three) == THREE_STRINGS
    assert face_type(model, two) == TWO_STRINGS


def test_sweep_cases(model):
    cases = sweep_cases(model, REFERENCE_FORCE)
    assert len(cases) == SWEEP_CASE_COUNT
    assert len({(case.loaded_face, case.loaded_nodes) for case in cases}) == SWEEP_CASE_COUNT


def test_every_case_is_grounded_on_a_restraining_face(model):
    for case in sweep_cases(model, REFERENCE_FORCE):
        assert restrains_structure(model, case.grounded_face)
        assert np.linalg.matrix_rank(equality_system(model, case)[0]) == 3 * NODE_COUNT


def test_every_case_is_in_equilibrium(model, report):
    for solution in report.solutions:
        # Then: node residuals, string signs and the global force balance
        assert solution.max_residual <= 1e-6 * REFERENCE_FORCE
        assert np.all(solution.tensions >= -1e-9 * REFERENCE_FORCE)
        total = solution.reactions.sum(axis=0) + applied_loads(model, solution.case).sum(axis=0)
        np.testing.assert_allclose(total, 0.0, atol=1e-6 * REFERENCE_FORCE)


def test_reactions_hold_the_load(model, report):
    for solution in report.solutions:
        # the ground pushes up along its inward normal
        up = model.normals[solution.case.grounded_face - 1]
        assert solution.reactions.sum(axis=0) @ up == pytest.approx(REFERENCE_FORCE, rel=1e-6)


@pytest.mark.parametrize("factor", [2.0, 10.0])
def test_member_forces_scale_linearly(model, materials, report, factor):
    # When
    scaled = sweep(model, factor * REFERENCE_FORCE, materials, max_workers=2)

    # Then
    for base, result in zip(report.solutions, scaled.solutions, strict=True):
        scale = factor * max(base.t_max, base.c_max, 1e-12)
        np.testing.assert_allclose(result.tensions, factor * base.tensions, rtol=1e-8, atol=1e-8 * scale)
        np.testing.assert_allclose(result.compressions, factor * base.compressions, rtol=1e-8, atol=1e-8 * scale)
    assert scaled.t_max == pytest.approx(factor * report.t_max, rel=1e-8)
    assert scaled.c_max == pytest.approx(factor * report.c_max, rel=1e-8)


def test_symmetric_case_loads_top_strings_equally(model, materials):
    # Given: all three nodes of a two-string face loaded evenly, mirror symmetric about its gap edge
    top = representative_top_faces(model)[1]
    case = LoadCase.on_top_face(model, top, face_nodes(model, top), REFERENCE_FORCE)

    # When
    solution = solve_case(model, case, materials)

    # Then
    strings = [string_between(model, i, j) for i, j in face_edges(model, top)]
    tensions = [solution.tensions[s] for s in strings if s is not None]
    assert len(tensions) == TWO_STRINGS
    np.testing.assert_allclose(tensions, tensions[0], rtol=1e-6, atol=1e-9 * REFERENCE_FORCE)


def test_reference_case_matches_truss_solve(model, materials):
    # Given
    top = representative_top_faces(model)[0]
    case = LoadCase.on_top_face(model, top, face_nodes(model, top), REFERENCE_FORCE)

    # When
    qp = solve_case(model, case, materials)
    truss = unilateral_truss_solve(model, case, materials)

    # Then
    scale = max(qp.t_max, qp.c_max)
    np.testing.assert_allclose(qp.tensions, truss.tensions, atol=1e-4 * scale)
    np.testing.assert_allclose(qp.compressions, truss.compressions, atol=1e-4 * scale)
    assert np.all(truss.tensions >= -1e-9 * REFERENCE_FORCE)


def test_cross_check_over_the_sweep(model, report):
    assert cross_check(model, report) < 1e-4


def test_report_summary_and_rows(report):
    # When
    summary = report.summary()
    rows = report.rows()

    # Then
    assert summary["case_count"] == SWEEP_CASE_COUNT
    assert summary["t_max"] == report.solutions[summary["t_max_case"]].t_max
    assert summary["c_max"] == report.solutions[summary["c_max_case"]].c_max
    assert summary["margins"] == report.verdict().margins()
    assert len(rows) == SWEEP_CASE_COUNT
    assert all(len(row) == len(SWEEP_HEADER) for row in rows)


def test_sweep_rejects_non_positive_force(model, materials):
    with pytest.raises(ValueError):
        sweep(model, 0.0, materials)


def test_unloaded_summary_matches_the_sweep_summary(model, materials, report):
    # When
    summary = unloaded_summary(materials, model.rod_length)

    # Then
    assert summary.keys() == report.summary().keys()
    assert summary["case_count"] == 0
    assert summary["passed"]
    assert all(margin == float("inf") for margin in summary["margins"].values())
