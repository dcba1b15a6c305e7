# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

from . import common
from . import properties
from . import utils
from . import rigidity
from . import control
from . import simulation
from . import scenario
from . import export
