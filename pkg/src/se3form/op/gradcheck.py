# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

from .. import common
from .. import control
from .. import rigidity
from ..scenario import resolve_scenario
from ..utils.operator_registry import OperatorRegistry, Operator


GRADCHECK_TOL = 1e-5


def gradient_errors(scenario, h):
    """
    Relative errors of the analytic rigidity matrix and of the control
    gradient against central differences at the initial state
    """

    state = scenario.initial
    graph = scenario.graph
    matrix = rigidity.mixed_rigidity_matrix(state, graph).assembled
    fd_matrix = rigidity.finite_difference_jacobian(state, graph, h,
                                                    which='mixed')
    controller = control.FormationController(graph, scenario.target,
                                             scenario.control)
    oracle = control.gradient_oracle(state, graph, scenario.target, h,
                                     law=scenario.control.law)
    return (rigidity.relative_error(matrix, fd_matrix),
            rigidity.relative_error(controller.gradient(state), oracle))


@OperatorRegistry()
class SE3FORM_OT_GradCheck(Operator):

    idname = "gradcheck"
    label = "Gradient Check"
    description = "Compare analytic derivatives with finite differences"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument("scenario",
                            help="built-in scenario name or scenario file")
        parser.add_argument("--h", type=float, default=1e-6,
                            help="finite difference step")

    @classmethod
    def poll(cls, args):
        return common.FD_STEP_MIN <= args.h <= common.FD_STEP_MAX

    def execute(self, args):
        scenario = resolve_scenario(args.scenario)
        matrix_err, gradient_err = gradient_errors(scenario, args.h)
        max_err = max(matrix_err, gradient_err)

        self.report({'INFO'}, "{}: h = {:g}".format(scenario.name, args.h))
        self.report({'INFO'}, "rigidity matrix error = {:.3e}"
                    .format(matrix_err))
        self.report({'INFO'}, "gradient error = {:.3e}".format(gradient_err))
        self.report({'INFO'}, "max error = {:.3e}".format(max_err))
        if not max_err < GRADCHECK_TOL:
            raise common.NumericalFailureError(
                "Analytic derivatives disagree with finite differences "
                "({:.3e} >= {:g})".format(max_err, GRADCHECK_TOL))
        return {'FINISHED'}
