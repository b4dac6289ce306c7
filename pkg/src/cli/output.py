import math

from prettytable import PrettyTable

from control.vehicle import frame_mass_fraction, thrust_to_weight_ratio
from geometry.icosahedron import FACE_COUNT, TensegrityModel, antipodal_face, face_adjacency, face_nodes, face_type
from reorient.identification import face_tilt
from reorient.planner import ReorientationPlan
from sim.reorientation import MonteCarloSummary
from stress.components import DesignVerdict
from utils.config import VehicleParams


def print_header(name: str) -> None:
    """Banner line before a table."""
    print("\n************************************************************************")
    print(f"*** {name}")
    print("************************************************************************\n")


def print_verdict(verdict: DesignVerdict) -> None:
    """Demand, limit and margin of every criterion."""
    table = PrettyTable()
    table.field_names = ["Criterion", "Demand (Pa)", "Limit (Pa)", "Margin", "Passed"]
    for result in verdict.results:
        demand, limit, margin = f"{result.demand:.4g}", f"{result.limit:.4g}", f"{result.margin:.3f}"
        table.add_row([result.criterion, demand, limit, margin, result.passed])
    print_header(f"Design check: {'PASSED' if verdict.passed else 'FAILED'}")
    print(table)


def print_faces(model: TensegrityModel) -> None:
    """Face numbering with nodes, type, resting tilt and antipodal face."""
    table = PrettyTable()
    table.field_names = ["Face", "Nodes", "String edges", "Pitch (deg)", "Roll (deg)", "Antipodal"]
    for face in range(1, FACE_COUNT + 1):
        pitch, roll = face_tilt(model, face)
        table.add_row(
            [
                face,
                " ".join(str(node) for node in face_nodes(model, face)),
                face_type(model, face),
                f"{math.degrees(pitch):.2f}",
                f"{math.degrees(roll):.2f}",
                antipodal_face(model, face),
            ]
        )
    print_header("Contact faces:")
    print(table)


def print_adjacency_angles(model: TensegrityModel) -> None:
    """Distinct pivot angles with their edge kind and count."""
    counts: dict[tuple[str, float], int] = {}
    for adjacency in face_adjacency(model):
        key = (str(adjacency.edge_kind), round(math.degrees(adjacency.angle), 3))
        counts[key] = counts.get(key, 0) + 1
    table = PrettyTable()
    table.field_names = ["Edge kind", "Pivot angle (deg)", "Count"]
    for (kind, angle), count in sorted(counts.items()):
        table.add_row([kind, angle, count])
    print_header("Pivot angles:")
    print(table)


def print_plans(plans: dict[int, ReorientationPlan]) -> None:
    """Face sequence and cost of the plan from every start face."""
    table = PrettyTable()
    table.field_names = ["Start", "Faces", "Moves", "Cost (deg)"]
    for start, plan in sorted(plans.items()):
        faces = " -> ".join(str(face) for face in plan.faces)
        table.add_row([start, faces, len(plan.moves), f"{math.degrees(plan.cost):.2f}"])
    print_header("Reorientation plans:")
    print(table)


def print_vehicle(params: VehicleParams) -> None:
    """Vehicle-level consistency numbers."""
    table = PrettyTable()
    table.field_names = ["Quantity", "Value"]
    table.add_row(["Mass (kg)", params.mass])
    table.add_row(["Max total thrust (N)", len(params.propeller_positions) * params.thrust_max])
    table.add_row(["Thrust-to-weight ratio", f"{thrust_to_weight_ratio(params):.3f}"])
    table.add_row(["Frame mass fraction", f"{frame_mass_fraction(params):.3f}"])
    print_header("Vehicle:")
    print(table)


def print_monte_carlo(summary: MonteCarloSummary) -> None:
    """Per-trial outcome and the success count."""
    table = PrettyTable()
    table.field_names = ["Seed", "Start", "Reached goal", "Time (s)", "Faces"]
    for trial in summary.trials:
        faces = " -> ".join(str(face) for face in trial.face_sequence)
        table.add_row([trial.seed, trial.start_face, trial.reached_goal, f"{trial.elapsed:.2f}", faces])
    print_header(f"Monte-Carlo: {summary.success_count}/{len(summary.trials)} trials reached the goal")
    print(table)
