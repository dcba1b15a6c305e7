# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

from pprint import pprint
import os


__DEBUG_MODE = False

# tolerances shared across modules
SKEW_TOL = 1e-9
ZERO_VECTOR_TOL = 1e-12
COINCIDENT_TOL = 1e-9
SMALL_ANGLE = 1e-8
NULL_SPACE_TOL = 1e-8
ROTATION_DEFECT_TOL = 0.1
ROTATION_VALID_TOL = 1e-6
UNIT_NORM_TOL = 1e-12
NORMALIZE_TOL = 1e-12
FD_STEP_MIN = 1e-9
FD_STEP_MAX = 1e-3


class FormationError(RuntimeError):
    pass


class NotSkewError(FormationError, ValueError):
    pass


class ZeroVectorError(FormationError, ValueError):
    pass


class DegenerateError(FormationError, ValueError):
    pass


class SelfLoopError(FormationError, ValueError):
    pass


class IndexOutOfRangeError(FormationError, IndexError):
    pass


class DuplicateEdgeError(FormationError, ValueError):
    pass


class CoincidentAgentsError(FormationError):
    def __init__(self, i, j, distance):
        super().__init__("Agents {} and {} are coincident (distance {:.3e})"
                         .format(i, j, distance))
        self.edge = (i, j)
        self.distance = distance

    def __reduce__(self):
        return (type(self), (self.edge[0], self.edge[1], self.distance))


class NumericalFailureError(FormationError):
    pass


class ParseError(FormationError):
    def __init__(self, message, field=None, line=None):
        self.raw_message = message
        location = []
        if field is not None:
            location.append("field '{}'".format(field))
        if line is not None:
            location.append("line {}".format(line))
        if location:
            message = "{} ({})".format(message, ", ".join(location))
        super().__init__(message)
        self.field = field
        self.line = line

    def __reduce__(self):
        return (type(self), (self.raw_message, self.field, self.line))


class ValidationError(FormationError):
    def __init__(self, message, constraint=None):
        super().__init__(message)
        self.constraint = constraint

    def __reduce__(self):
        return (type(self), (str(self), self.constraint))


class TrajectoryIOError(FormationError, OSError):
    pass


def is_debug_mode():
    if __DEBUG_MODE:
        return True
    return os.environ.get("SE3FORM_DEBUG", "") == "true"


def enable_debug_mode():
    # pylint: disable=W0603
    global __DEBUG_MODE
    __DEBUG_MODE = True


def disable_debug_mode():
    # pylint: disable=W0603
    global __DEBUG_MODE
    __DEBUG_MODE = False


def debug_print(*s):
    """
    Print message to console in debugging mode
    """

    if is_debug_mode():
        pprint(s)


def get_seed_override():
    """
    Return the perturbation seed given by SE3FORM_SEED, or None
    """

    if "SE3FORM_SEED" not in os.environ:
        return None
    value = os.environ["SE3FORM_SEED"].strip()
    try:
        return int(value)
    except ValueError as e:
        raise ParseError("SE3FORM_SEED must be an integer, got '{}'"
                         .format(value), field="SE3FORM_SEED") from e


def check_step_size(h):
    if not FD_STEP_MIN <= h <= FD_STEP_MAX:
        raise ValueError("Step size {} is out of range [{}, {}]"
                         .format(h, FD_STEP_MIN, FD_STEP_MAX))
