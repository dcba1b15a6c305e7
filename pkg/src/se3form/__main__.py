# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import sys

from .cli import run_cli


if __name__ == "__main__":
    sys.exit(run_cli())
