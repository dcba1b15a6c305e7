from . import cli_test
from . import control_test
from . import export_test
from . import graph_test
from . import lie_test
from . import properties_test
from . import rigidity_test
from . import scenario_test
from . import simulation_test
