# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import sys

from .. import common


class OperatorRegistry:
    class_list = []

    def __call__(self, cls):
        OperatorRegistry.add_class(cls.idname, cls)
        return cls

    @classmethod
    def add_class(cls, idname, op_class):
        for class_ in cls.class_list:
            if class_["idname"] == idname:
                raise RuntimeError("{} is already registered".format(idname))

        new_op = {
            "idname": idname,
            "class": op_class,
        }
        cls.class_list.append(new_op)
        common.debug_print("{} is registered.".format(idname))

    @classmethod
    def find(cls, idname):
        for class_ in cls.class_list:
            if class_["idname"] == idname:
                return class_["class"]
        return None

    @classmethod
    def register(cls, subparsers):
        for class_ in cls.class_list:
            op_class = class_["class"]
            parser = subparsers.add_parser(op_class.idname,
                                           help=op_class.description,
                                           description=op_class.description)
            op_class.add_arguments(parser)
            parser.set_defaults(idname=op_class.idname)
            common.debug_print("{} is registered to the command line."
                               .format(class_["idname"]))

    @classmethod
    def cleanup(cls):
        cls.class_list = []
        common.debug_print("Cleanup registry.")


class Operator:
    """
    Command executed from the command line.

    execute() returns {'FINISHED'} or {'CANCELLED'}; messages for the user
    go through report().
    """

    idname = ""
    label = ""
    description = ""

    def __init__(self, out=None, err=None):
        self.out = out if out is not None else sys.stdout
        self.err = err if err is not None else sys.stderr
        self.reports = []

    @classmethod
    def add_arguments(cls, parser):
        pass

    @classmethod
    def poll(cls, args):
        return True

    def report(self, level, message):
        self.reports.append((level, message))
        if 'INFO' in level:
            print(message, file=self.out)
        else:
            print("{}: {}".format(", ".join(sorted(level)), message),
                  file=self.err)

    def execute(self, args):
        raise NotImplementedError()
