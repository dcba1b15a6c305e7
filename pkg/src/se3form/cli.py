# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import argparse
import functools
import sys

from . import common
from . import op    # noqa: F401 pylint: disable=W0611
from .utils.operator_registry import OperatorRegistry


EXIT_SUCCESS = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

NUMERICAL_ERRORS = (
    common.NumericalFailureError,
    common.CoincidentAgentsError,
    common.DegenerateError,
)


class CliArgumentParser(argparse.ArgumentParser):
    """
    ArgumentParser writing help and usage errors to the given streams
    instead of the process streams
    """

    def __init__(self, *args, out=None, err=None, **kwargs):
        super().__init__(*args, **kwargs)
        self.out = out
        self.err = err

    def _print_message(self, message, file=None):
        if file is None or file is sys.stdout:
            file = self.out if self.out is not None else sys.stdout
        elif file is sys.stderr and self.err is not None:
            file = self.err
        super()._print_message(message, file)


def build_parser(out=None, err=None):
    parser = CliArgumentParser(
        prog="se3form",
        description="Formation control of rigid bodies with bearing and "
                    "distance constraints",
        out=out, err=err)
    parser.add_argument("--debug", action="store_true",
                        help="print debug output")
    subparsers = parser.add_subparsers(
        dest="idname", metavar="<command>",
        parser_class=functools.partial(CliArgumentParser, out=out, err=err))
    OperatorRegistry.register(subparsers)
    return parser


def run_cli(argv=None, out=None, err=None):
    err = err if err is not None else sys.stderr
    parser = build_parser(out, err)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_SUCCESS if e.code == 0 else EXIT_USAGE

    if args.debug:
        common.enable_debug_mode()
    if args.idname is None:
        parser.print_usage(err)
        print("se3form: error: a command is required", file=err)
        return EXIT_USAGE

    op_class = OperatorRegistry.find(args.idname)
    operator = op_class(out, err)
    if not op_class.poll(args):
        parser.print_usage(err)
        print("se3form {}: error: invalid arguments".format(args.idname),
              file=err)
        return EXIT_USAGE

    try:
        result = operator.execute(args)
    except NUMERICAL_ERRORS as e:
        operator.report({'ERROR'}, str(e))
        return EXIT_NUMERICAL
    except common.FormationError as e:
        operator.report({'ERROR'}, str(e))
        return EXIT_USAGE
    finally:
        if args.debug:
            common.disable_debug_mode()

    if result == {'FINISHED'}:
        return EXIT_SUCCESS
    return EXIT_USAGE
