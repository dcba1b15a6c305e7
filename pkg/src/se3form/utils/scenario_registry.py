# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import glob
import os

from .. import common


class ScenarioRegistry:
    """
    Named scenario files of the built-in catalog
    """

    entry_list = []

    @classmethod
    def add_entry(cls, idname, path):
        for entry in cls.entry_list:
            if entry["idname"] == idname:
                raise RuntimeError("{} is already registered".format(idname))

        new_entry = {
            "idname": idname,
            "path": path,
        }
        cls.entry_list.append(new_entry)
        common.debug_print("{} is registered.".format(idname))

    @classmethod
    def discover(cls, directory):
        for path in sorted(glob.glob(os.path.join(directory, "*.json"))):
            idname = os.path.splitext(os.path.basename(path))[0]
            cls.add_entry(idname, path)

    @classmethod
    def names(cls):
        return [entry["idname"] for entry in cls.entry_list]

    @classmethod
    def find(cls, idname):
        for entry in cls.entry_list:
            if entry["idname"] == idname:
                return entry["path"]
        return None

    @classmethod
    def cleanup(cls):
        cls.entry_list = []
        common.debug_print("Cleanup registry.")
