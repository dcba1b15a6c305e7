import copy
import json
import os
import unittest

import numpy as np

from . import common
from se3form import common as se3_common
from se3form import scenario as se3_scenario
from se3form.utils.scenario_registry import ScenarioRegistry


BUILTIN_NAMES = ["cube8-bearing", "quad4-3b3d", "quad4-3b4d", "quad4-5b1d",
                 "quad4-bearing"]


class TestBuiltinScenarios(common.TestBase):
    module_name = "scenario"
    submodule_name = "builtin"

    def test_ok_catalog(self):
        print("[TEST] (OK) built-in catalog")
        self.assertEqual(se3_scenario.builtin_names(), BUILTIN_NAMES)
        for name in BUILTIN_NAMES:
            scenario = se3_scenario.resolve_scenario(name)
            self.assertEqual(scenario.name, name)
            self.assertIs(scenario.validate(), scenario)

    def test_ok_counts(self):
        print("[TEST] (OK) edge counts")
        expect = {
            "cube8-bearing": (8, 24, 0, 'BearingOnly'),
            "quad4-bearing": (4, 12, 0, 'BearingOnly'),
            "quad4-3b4d": (4, 3, 4, 'Mixed'),
            "quad4-3b3d": (4, 3, 3, 'Mixed'),
            "quad4-5b1d": (4, 5, 1, 'Mixed'),
        }
        for name, (n, m_b, m_d, law) in expect.items():
            scenario = se3_scenario.resolve_scenario(name)
            self.assertEqual((scenario.graph.n, scenario.graph.m_b,
                              scenario.graph.m_d, scenario.control.law),
                             (n, m_b, m_d, law))

    def test_ok_targets(self):
        print("[TEST] (OK) desired bearings follow the target positions")
        scenario = se3_scenario.resolve_scenario("quad4-5b1d")
        self.assertAllClose(scenario.target.desired_bearings[0],
                            [-1.0, 0.0, 0.0], 0.0)
        self.assertAllClose(scenario.target.desired_distances, [1.0], 0.0)
        self.assertLessEqual(np.max(np.abs(
            scenario.initial.positions - scenario.target_positions)), 0.2)

    def test_ok_registry_rediscovery(self):
        print("[TEST] (OK) registry is filled on demand")
        ScenarioRegistry.cleanup()
        self.assertEqual(ScenarioRegistry.names(), [])
        self.assertEqual(se3_scenario.builtin_names(), BUILTIN_NAMES)
        with self.assertRaises(RuntimeError):
            ScenarioRegistry.add_entry("quad4-5b1d", "x.json")

    def test_ng_unknown(self):
        print("[TEST] (NG) unknown scenario")
        with self.assertRaises(se3_common.ParseError):
            se3_scenario.resolve_scenario("hexagon")


class TestLoadScenario(common.TestBase):
    module_name = "scenario"
    submodule_name = "load"

    def setUpEachMethod(self):
        self.base = se3_scenario.scenario_to_dict(
            se3_scenario.resolve_scenario("quad4-5b1d"))

    def __write(self, data, name="scenario.json"):
        path = os.path.join(self.make_tmpdir(), name)
        with open(path, "w", encoding="utf-8") as f:
            if isinstance(data, str):
                f.write(data)
            else:
                json.dump(data, f, indent=2)
        return path

    def test_ok_round_trip(self):
        print("[TEST] (OK) dump and load")
        for name in BUILTIN_NAMES:
            scenario = se3_scenario.resolve_scenario(name)
            path = os.path.join(self.make_tmpdir(), name + ".json")
            se3_scenario.dump_scenario(scenario, path)
            self.assertEqual(se3_scenario.load_scenario(path), scenario)

    def test_ok_explicit_agents(self):
        print("[TEST] (OK) explicit agents and targets")
        scenario = se3_scenario.load_scenario(self.__write(self.base))
        self.assertEqual(scenario.graph.m_b, 5)
        self.assertEqual(scenario.graph.m_d, 1)
        self.assertEqual(scenario.sim.dt, 0.01)

    def test_ok_rounded_rotations(self):
        print("[TEST] (OK) rotations printed with few digits")
        data = copy.deepcopy(self.base)
        for agent in data["agents"]:
            agent["R"] = [round(x, 8) for x in agent["R"]]
        scenario = se3_scenario.load_scenario(self.__write(data))
        for rot in scenario.initial.rotations:
            self.assertLess(np.linalg.norm(rot.T @ rot - np.eye(3)), 1e-9)

    def test_ng_non_unit_bearing(self):
        print("[TEST] (NG) desired bearing of norm 0.5")
        data = copy.deepcopy(self.base)
        data["target"]["bearings"][0] = [0.5, 0.0, 0.0]
        with self.assertRaises(se3_common.ValidationError) as ctx:
            se3_scenario.load_scenario(self.__write(data))
        self.assertEqual(ctx.exception.constraint, "|b*| = 1")

    def test_ng_missing_dt(self):
        print("[TEST] (NG) missing dt")
        data = copy.deepcopy(self.base)
        del data["sim"]["dt"]
        with self.assertRaises(se3_common.ParseError) as ctx:
            se3_scenario.load_scenario(self.__write(data))
        self.assertEqual(ctx.exception.field, "sim.dt")
        self.assertIn("'sim.dt'", str(ctx.exception))

    def test_ng_invalid_json(self):
        print("[TEST] (NG) invalid JSON")
        path = self.__write('{\n  "name": "broken",\n  "agents": [,]\n}\n')
        with self.assertRaises(se3_common.ParseError) as ctx:
            se3_scenario.load_scenario(path)
        self.assertEqual(ctx.exception.line, 3)

    def test_ng_missing_file(self):
        print("[TEST] (NG) missing file")
        with self.assertRaises(se3_common.ParseError):
            se3_scenario.load_scenario(
                os.path.join(self.make_tmpdir(), "none.json"))

    def test_ng_graph(self):
        print("[TEST] (NG) invalid graph")
        data = copy.deepcopy(self.base)
        data["bearing_edges"][0] = [0, 0]
        with self.assertRaises(se3_common.ValidationError):
            se3_scenario.scenario_from_dict(data)
        data = copy.deepcopy(self.base)
        data["distance_edges"].append([0, 9])
        data["target"]["distances"].append(1.0)
        with self.assertRaises(se3_common.ValidationError):
            se3_scenario.scenario_from_dict(data)

    def test_ng_schema(self):
        print("[TEST] (NG) schema violations")
        data = copy.deepcopy(self.base)
        data["gravity"] = 9.81
        with self.assertRaises(se3_common.ParseError) as ctx:
            se3_scenario.scenario_from_dict(data)
        self.assertEqual(ctx.exception.field, "gravity")

        data = copy.deepcopy(self.base)
        data["agents"][1]["p"] = [0.0, 1.0]
        with self.assertRaises(se3_common.ParseError) as ctx:
            se3_scenario.scenario_from_dict(data)
        self.assertEqual(ctx.exception.field, "agents[1].p")

        data = copy.deepcopy(self.base)
        data["bearing_edges"][2] = [1, "2"]
        with self.assertRaises(se3_common.ParseError):
            se3_scenario.scenario_from_dict(data)

        data = copy.deepcopy(self.base)
        del data["agents"]
        del data["target"]["positions"]
        with self.assertRaises(se3_common.ParseError) as ctx:
            se3_scenario.scenario_from_dict(data)
        self.assertEqual(ctx.exception.field, "agents")

    def test_ng_coincident_agents(self):
        print("[TEST] (NG) coincident agents")
        data = copy.deepcopy(self.base)
        data["agents"][1]["p"] = list(data["agents"][0]["p"])
        with self.assertRaises(se3_common.ValidationError):
            se3_scenario.scenario_from_dict(data)


class TestSeedOverride(common.TestBase):
    module_name = "scenario"
    submodule_name = "seed"

    def test_ok_override(self):
        print("[TEST] (OK) SE3FORM_SEED replaces the perturbation seed")
        default = se3_scenario.resolve_scenario("quad4-5b1d")
        again = se3_scenario.resolve_scenario("quad4-5b1d")
        self.assertEqual(default.initial, again.initial)

        os.environ["SE3FORM_SEED"] = "7"
        seeded = se3_scenario.resolve_scenario("quad4-5b1d")
        self.assertEqual(seeded.perturbation.seed, 7)
        self.assertFalse(np.array_equal(seeded.initial.positions,
                                        default.initial.positions))

    def test_ng_override(self):
        print("[TEST] (NG) SE3FORM_SEED is not an integer")
        os.environ["SE3FORM_SEED"] = "seven"
        with self.assertRaises(se3_common.ParseError):
            se3_scenario.resolve_scenario("quad4-5b1d")

    def test_ok_perturbed_state(self):
        print("[TEST] (OK) perturbed state bounds")
        scenario = se3_scenario.resolve_scenario("cube8-bearing")
        offsets = scenario.initial.positions - scenario.target_positions
        self.assertLessEqual(np.max(np.abs(offsets)),
                             scenario.perturbation.position_amplitude + 1e-12)
        for rot in scenario.initial.rotations:
            angle = np.arccos(np.clip((np.trace(rot) - 1.0) / 2.0, -1, 1))
            self.assertLessEqual(
                angle, scenario.perturbation.rotation_amplitude + 1e-12)


if __name__ == "__main__":
    unittest.main()
