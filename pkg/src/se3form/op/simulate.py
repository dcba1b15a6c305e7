# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

from concurrent.futures import ProcessPoolExecutor
import os

from .. import common
from .. import export
from .. import simulation
from ..properties import SimConfig
from ..scenario import builtin_names, resolve_scenario
from ..utils.operator_registry import OperatorRegistry, Operator


def _output_paths(out_dir, name):
    base = os.path.join(out_dir, name)
    return {
        "csv": base + ".csv",
        "plot": base + ".svg",
        "error_plot": base + "-error.svg",
    }


def run_scenario_job(name_or_path, out_dir, overrides, projection):
    """
    Simulate one scenario and write its CSV and plots. Runs in a worker
    process for batch runs, so arguments and result are plain values.
    """

    scenario = resolve_scenario(name_or_path)
    sim = scenario.sim.replace(**overrides)
    traj = simulation.simulate(scenario.initial, scenario.graph,
                               scenario.target, scenario.control, sim)

    paths = _output_paths(out_dir, scenario.name)
    export.write_trajectory(traj, paths["csv"])
    overlay = None
    if scenario.graph.m_d > 0:
        overlay = scenario.target_positions
    export.emit_plot(traj, paths["plot"], projection, overlay)
    export.emit_error_plot(traj, paths["error_plot"])

    result = {
        "name": scenario.name,
        "reason": traj.reason.value,
        "message": traj.message,
        "steps": traj.steps,
        "phi": traj.last.phi,
        "bearing_error": traj.last.bearing_error,
        "distance_error": traj.last.distance_error,
        "paths": paths,
        "invariants": None,
        "shape_error": None,
    }
    if len(traj) >= 2:
        result["invariants"] = simulation.invariant_report(traj).as_dict()
    if scenario.target_positions is not None:
        result["shape_error"] = simulation.shape_error(
            traj.last.state, scenario.target_positions)
    return result


@OperatorRegistry()
class SE3FORM_OT_Simulate(Operator):

    idname = "simulate"
    label = "Simulate"
    description = "Simulate a scenario and write its trajectory and plots"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument("scenario", nargs="?",
                            help="built-in scenario name or scenario file")
        parser.add_argument("--all", action="store_true",
                            help="simulate every built-in scenario")
        parser.add_argument("--out", default=".",
                            help="output directory")
        parser.add_argument("--dt", type=float, default=None,
                            help=SimConfig.dt.description)
        parser.add_argument("--max-steps", type=int, default=None,
                            help=SimConfig.max_steps.description)
        parser.add_argument("--integrator", default=None,
                            choices=SimConfig.integrator.identifiers,
                            help=SimConfig.integrator.description)
        parser.add_argument("--projection", default="iso",
                            choices=export.PROJECTIONS,
                            help="plane the trajectory plot is drawn in")
        parser.add_argument("--jobs", type=int, default=None,
                            help="worker processes for --all")

    @classmethod
    def poll(cls, args):
        # exactly one of a scenario argument and --all
        if (args.scenario is None) != args.all:
            return False
        return args.jobs is None or args.jobs >= 1

    def execute(self, args):
        names = builtin_names() if args.all else [args.scenario]
        overrides = {
            "dt": args.dt,
            "max_steps": args.max_steps,
            "integrator": args.integrator,
        }
        try:
            os.makedirs(args.out, exist_ok=True)
        except OSError as e:
            raise common.TrajectoryIOError(
                "Cannot create output directory {}: {}"
                .format(args.out, e.strerror)) from e

        if len(names) > 1 and args.jobs != 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as executor:
                futures = [executor.submit(run_scenario_job, name, args.out,
                                           overrides, args.projection)
                           for name in names]
                results = [f.result() for f in futures]
        else:
            results = [run_scenario_job(name, args.out, overrides,
                                        args.projection)
                       for name in names]

        failed = []
        for result in results:
            self.__report_result(result)
            if result["reason"] == \
                    simulation.TerminationReason.NUMERICAL_FAILURE.value:
                failed.append(result["name"])

        if failed:
            raise common.NumericalFailureError(
                "Numerical failure in {}".format(", ".join(failed)))
        return {'FINISHED'}

    def __report_result(self, result):
        self.report({'INFO'}, "{}: {} after {} steps".format(
            result["name"], result["reason"], result["steps"]))
        self.report({'INFO'}, "  phi = {:.6e}, |b - b*| = {:.6e}, "
                    "|d - d*| = {:.6e}".format(result["phi"],
                                               result["bearing_error"],
                                               result["distance_error"]))
        inv = result["invariants"]
        if inv is not None:
            self.report({'INFO'}, "  centroid drift = {:.3e}, scale drift = "
                        "{:.3e} (relative to s(0) = {:.6g})".format(
                            inv["relative_centroid_drift"],
                            inv["relative_scale_drift"],
                            inv["initial_scale"]))
            self.report({'INFO'}, "  ds/dt = {:.3e}, rotation defect = "
                        "{:.3e}".format(inv["scale_rate"],
                                        inv["rotation_defect"]))
        if result["shape_error"] is not None:
            self.report({'INFO'}, "  shape error = {:.6e}"
                        .format(result["shape_error"]))
        for path in result["paths"].values():
            self.report({'INFO'}, "  wrote {}".format(path))
        if result["reason"] == \
                simulation.TerminationReason.NUMERICAL_FAILURE.value:
            self.report({'ERROR'}, "{}: {}".format(result["name"],
                                                   result["message"]))
        elif result["reason"] == \
                simulation.TerminationReason.STEP_LIMIT.value:
            self.report({'WARNING'}, "{} did not converge".format(
                result["name"]))
