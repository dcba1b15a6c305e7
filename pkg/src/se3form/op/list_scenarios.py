# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

from ..scenario import builtin_names, resolve_scenario
from ..utils.operator_registry import OperatorRegistry, Operator


@OperatorRegistry()
class SE3FORM_OT_ListScenarios(Operator):

    idname = "list"
    label = "List Scenarios"
    description = "List the built-in scenarios"

    def execute(self, args):
        for name in builtin_names():
            scenario = resolve_scenario(name)
            graph = scenario.graph
            self.report({'INFO'}, "{:<16} n={} m_b={} m_d={} {:<11} {}"
                        .format(name, graph.n, graph.m_b, graph.m_d,
                                scenario.control.law, scenario.description))
        return {'FINISHED'}
