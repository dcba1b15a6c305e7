# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import numpy as np

from .. import common
from .. import rigidity
from ..rigidity import FrameworkState
from ..scenario import resolve_scenario
from ..utils.graph import FormationGraph, validate_graph
from ..utils.operator_registry import OperatorRegistry, Operator


def analysis_framework(scenario, extra_distance_edges=(), initial=False):
    """
    Graph and state the rigidity analysis runs on: the target
    configuration with identity rotations when it is known, otherwise the
    initial state
    """

    graph = scenario.graph
    if extra_distance_edges:
        graph = FormationGraph(
            graph.n, graph.bearing_edges,
            list(graph.distance_edges) + list(extra_distance_edges))
        try:
            validate_graph(graph)
        except (common.SelfLoopError, common.IndexOutOfRangeError,
                common.DuplicateEdgeError) as e:
            raise common.ValidationError(str(e),
                                         constraint="distance-edge") from e

    if initial or scenario.target_positions is None:
        state = scenario.initial
    else:
        state = FrameworkState(
            scenario.target_positions,
            np.tile(np.eye(3), (scenario.graph.n, 1, 1)))
    return graph, state


@OperatorRegistry()
class SE3FORM_OT_Analyze(Operator):

    idname = "analyze"
    label = "Analyze"
    description = "Rank and infinitesimal motions of the rigidity matrix"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument("scenario",
                            help="built-in scenario name or scenario file")
        parser.add_argument("--tol", type=float,
                            default=common.NULL_SPACE_TOL,
                            help="singular value cutoff relative to the "
                            "largest one")
        parser.add_argument("--distance-edge", type=int, nargs=2,
                            action="append", default=[],
                            metavar=("I", "J"),
                            help="add a distance edge before the analysis")
        parser.add_argument("--initial", action="store_true",
                            help="analyze the initial state instead of the "
                            "target configuration")

    @classmethod
    def poll(cls, args):
        return args.tol > 0.0

    def execute(self, args):
        scenario = resolve_scenario(args.scenario)
        graph, state = analysis_framework(
            scenario, [tuple(e) for e in args.distance_edge], args.initial)
        report = rigidity.rigidity_report(state, graph, args.tol)

        self.report({'INFO'}, "{}: n = {}, m_b = {}, m_d = {}".format(
            scenario.name, graph.n, graph.m_b, graph.m_d))
        self.report({'INFO'}, "rank = {}".format(report.rank))
        self.report({'INFO'}, "null-space dimension = {}"
                    .format(report.null_dimension))
        self.report({'INFO'}, "trivial motions = {}"
                    .format(report.trivial_dimension))
        self.report({'INFO'}, "infinitesimally rigid = {}".format(
            "yes" if report.infinitesimally_rigid else "no"))
        for k, entries in enumerate(report.labeled_basis()):
            self.report({'INFO'}, "v{}: {}".format(k, " ".join(
                "{}={:+.6f}".format(label, value)
                for label, value in entries)))
        return {'FINISHED'}
