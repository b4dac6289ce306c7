"""The analyze, plan, simulate and report subcommands. Each returns a process exit code."""

import json
from pathlib import Path

import numpy as np

from cli.output import (
    print_adjacency_angles,
    print_faces,
    print_header,
    print_monte_carlo,
    print_plans,
    print_vehicle,
    print_verdict,
)
from control.vehicle import frame_mass_fraction, thrust_to_weight_ratio
from geometry.icosahedron import TensegrityModel, build_icosahedron
from reorient.graph import export_gml, face_graph_from_config
from reorient.planner import ReorientationPlan, plan_all, plan_path
from sim.exceptions import SimulationTimeoutError
from sim.flight import FLIGHT_HEADER, run_flight_step
from sim.impact import simulate_wall_impact
from sim.reorientation import REORIENT_HEADER, ReorientationResult, run_monte_carlo, run_reorientation
from stress.analysis import SWEEP_HEADER, cross_check, sweep, unloaded_summary
from stress.components import check_components, estimate_impact_force
from utils.config import RunConfig
from utils.logging import get_logger
from utils.utils import HASH_COMMENT_PREFIX, write_csv, write_json

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DESIGN_FAILURE = 2

SCENARIO_REORIENT = "reorient"
SCENARIO_FLIGHT_STEP = "flight-step"
SCENARIO_WALL_IMPACT = "wall-impact"
SCENARIO_MONTE_CARLO = "monte-carlo"
SCENARIOS = (SCENARIO_REORIENT, SCENARIO_FLIGHT_STEP, SCENARIO_WALL_IMPACT, SCENARIO_MONTE_CARLO)

DEFAULT_START_FACE = 20
PLAN_HEADER = ("step", "from_face", "to_face", "kind", "pivot_nodes", "angle_deg", "cost")


def _model(config: RunConfig) -> TensegrityModel:
    return build_icosahedron(config.geometry.rod_length)


def _write_text(path: Path, text: str, config_hash: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(f"{HASH_COMMENT_PREFIX} {config_hash}\n{text}")
    return path


def _plan_rows(plan: ReorientationPlan) -> list[list[object]]:
    return [
        [
            step,
            move.from_face,
            move.to_face,
            str(move.kind),
            " ".join(map(str, move.nodes)),
            float(np.degrees(move.angle)),
            move.cost,
        ]
        for step, move in enumerate(plan.moves, start=1)
    ]


def cmd_analyze(config: RunConfig, out: Path, config_hash: str, with_cross_check: bool = False) -> int:
    """
    Stress sweep and component check at the configured (or estimated) impact force.

    A vehicle at rest with no configured force loads nothing: the sweep file is empty
    and the check passes.
    """
    model = _model(config)
    impact = config.impact
    f_max = impact.f_max or estimate_impact_force(config.vehicle.mass, impact.speed, impact.stopping_distance)
    if f_max == 0:
        logger.info("Zero impact force, nothing to sweep")
        write_csv(out / "sweep.csv", SWEEP_HEADER, [], config_hash)
        write_json(out / "summary.json", unloaded_summary(config.materials, model.rod_length), config_hash)
        print_verdict(check_components(0.0, 0.0, config.materials, model.rod_length))
        return EXIT_OK
    report = sweep(model, f_max, config.materials)
    summary = report.summary()
    if with_cross_check:
        summary["cross_check_max_relative_error"] = cross_check(model, report)

    write_csv(out / "sweep.csv", SWEEP_HEADER, report.rows(), config_hash)
    write_json(out / "summary.json", summary, config_hash)
    verdict = report.verdict()
    print_verdict(verdict)
    if not verdict.passed:
        failing = ", ".join(f"{result.criterion} (margin {result.margin:.3f})" for result in verdict.failing())
        logger.warning(f"Design check failed: {failing}")
        return EXIT_DESIGN_FAILURE
    return EXIT_OK


def cmd_plan(config: RunConfig, out: Path, config_hash: str, start_face: int | None = None) -> int:
    """Plan from one start face, or from all of them when none is given."""
    model = _model(config)
    face_graph = face_graph_from_config(model, config.vehicle, config.reorientation)
    plans = plan_all(face_graph) if start_face is None else {start_face: plan_path(face_graph, start_face)}
    for start, plan in plans.items():
        _write_text(out / f"plan_F{start}.txt", plan.to_text(), config_hash)
        write_csv(out / f"plan_F{start}.csv", PLAN_HEADER, _plan_rows(plan), config_hash)
    print_plans(plans)
    return EXIT_OK


def _write_reorientation(out: Path, result: ReorientationResult, config_hash: str) -> None:
    write_csv(out / "reorient_trajectory.csv", REORIENT_HEADER, result.rows, config_hash)
    _write_text(out / "reorient_events.txt", result.event_log(), config_hash)
    summary = {
        "start_face": result.start_face,
        "final_face": result.final_face,
        "reached_goal": result.reached_goal,
        "elapsed": result.elapsed,
        "planned_faces": result.planned_faces,
        "face_sequence": result.face_sequence,
        "followed_plan": result.followed_plan,
        "replans": result.replans,
    }
    write_json(out / "reorient_summary.json", summary, config_hash)


def _simulate_reorient(config: RunConfig, out: Path, config_hash: str, start_face: int) -> int:
    try:
        result = run_reorientation(config, start_face)
    except SimulationTimeoutError as e:
        _write_reorientation(out, e.result, config_hash)
        raise
    _write_reorientation(out, result, config_hash)
    print_header(f"Reoriented from face {result.start_face} to face {result.final_face} in {result.elapsed:.2f} s")
    print(result.event_log())
    return EXIT_OK


def _simulate_flight_step(config: RunConfig, out: Path, config_hash: str) -> int:
    result = run_flight_step(config)
    write_csv(out / "flight_step.csv", FLIGHT_HEADER, result.rows(), config_hash)
    x = result.positions[:, 0]
    summary = {
        "initial_offset": float(x[0]),
        "overshoot": float(max(0.0, -np.min(x))),
        "final_error": float(np.linalg.norm(result.positions[-1])),
    }
    write_json(out / "flight_step.json", summary, config_hash)
    print_header(f"Flight step: overshoot {summary['overshoot']:.4f} m, final error {summary['final_error']:.2e} m")
    return EXIT_OK


def _simulate_wall_impact(config: RunConfig, out: Path, config_hash: str) -> int:
    impact = simulate_wall_impact(
        config.impact.speed,
        config.impact.stopping_distance,
        config.vehicle,
        _model(config),
        config.materials,
    )
    if impact.report is not None:
        write_csv(out / "impact_sweep.csv", SWEEP_HEADER, impact.report.rows(), config_hash)
    write_json(out / "impact.json", impact.summary(), config_hash)
    print_verdict(impact.verdict)
    return EXIT_OK if impact.verdict.passed else EXIT_DESIGN_FAILURE


def _simulate_monte_carlo(config: RunConfig, out: Path, config_hash: str, trials: int) -> int:
    seed = config.simulation.seed
    summary = run_monte_carlo(config, list(range(seed, seed + trials)))
    rows = [
        [trial.seed, trial.start_face, trial.reached_goal, trial.elapsed, " ".join(map(str, trial.face_sequence))]
        for trial in summary.trials
    ]
    write_csv(out / "monte_carlo.csv", ("seed", "start_face", "reached_goal", "elapsed", "faces"), rows, config_hash)
    print_monte_carlo(summary)
    return EXIT_OK


def cmd_simulate(
    config: RunConfig,
    out: Path,
    config_hash: str,
    scenario: str = SCENARIO_REORIENT,
    start_face: int | None = None,
    trials: int = 100,
) -> int:
    """Run one simulation scenario and write its logs."""
    if scenario == SCENARIO_REORIENT:
        return _simulate_reorient(config, out, config_hash, start_face or DEFAULT_START_FACE)
    if scenario == SCENARIO_FLIGHT_STEP:
        return _simulate_flight_step(config, out, config_hash)
    if scenario == SCENARIO_WALL_IMPACT:
        return _simulate_wall_impact(config, out, config_hash)
    if scenario == SCENARIO_MONTE_CARLO:
        return _simulate_monte_carlo(config, out, config_hash, trials)
    raise ValueError(f"unknown scenario {scenario!r}, expected one of {', '.join(SCENARIOS)}")


def cmd_report(config: RunConfig, out: Path, config_hash: str) -> int:
    """Face table, pivot angles, plans from every face and vehicle numbers; writes the model and graph."""
    model = _model(config)
    face_graph = face_graph_from_config(model, config.vehicle, config.reorientation)
    plans = plan_all(face_graph)
    print_faces(model)
    print_adjacency_angles(model)
    print_plans(plans)
    print_vehicle(config.vehicle)

    write_json(out / "model.json", json.loads(model.to_json()), config_hash)
    export_gml(face_graph, out / "face_graph.gml", config_hash)
    vehicle = {
        "thrust_to_weight_ratio": thrust_to_weight_ratio(config.vehicle),
        "frame_mass_fraction": frame_mass_fraction(config.vehicle),
        "special_moves": [f"{m.from_face}->{m.to_face} {m.describe()}" for m in face_graph.special_moves],
        "plan_costs": {start: plan.cost for start, plan in plans.items()},
    }
    write_json(out / "report.json", vehicle, config_hash)
    return EXIT_OK
