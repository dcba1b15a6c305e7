# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import json
import numbers
import os

import numpy as np

from . import common
from . import rigidity
from .properties import ControlConfig, SimConfig, PerturbationConfig
from .rigidity import FrameworkState, TargetFormation
from .utils import lie
from .utils.graph import FormationGraph, EdgeLabel, validate_graph, dump_graph
from .utils.scenario_registry import ScenarioRegistry


SCENARIO_DIR = os.path.join(os.path.dirname(__file__), "scenarios")

TOP_LEVEL_KEYS = ("name", "description", "agents", "bearing_edges",
                  "distance_edges", "target", "perturbation", "control",
                  "sim")
TARGET_KEYS = ("bearings", "distances", "positions")


class Scenario:
    def __init__(self, name, graph, initial, target, control, sim,
                 target_positions=None, perturbation=None, description=""):
        self.name = name
        self.graph = graph
        self.initial = initial
        self.target = target
        self.control = control
        self.sim = sim
        self.target_positions = None if target_positions is None else \
            np.array(target_positions, dtype=float)
        self.perturbation = perturbation
        self.description = description

    def validate(self):
        self.control.validate()
        self.sim.validate()
        try:
            validate_graph(self.graph,
                           require_bearing=self.control.law == 'BearingOnly')
            rigidity.validate_target(self.target, self.graph)
            rigidity.validate_state(self.initial, self.graph)
        except (common.SelfLoopError, common.IndexOutOfRangeError,
                common.DuplicateEdgeError, common.CoincidentAgentsError) as e:
            raise common.ValidationError(str(e), constraint="graph") from e
        if self.target_positions is not None and \
                self.target_positions.shape != (self.graph.n, 3):
            raise common.ValidationError(
                "Target positions must have shape ({}, 3)"
                .format(self.graph.n), constraint="target.positions")
        return self

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        if (self.target_positions is None) != \
                (other.target_positions is None):
            return False
        if self.target_positions is not None and \
                not np.array_equal(self.target_positions,
                                   other.target_positions):
            return False
        return (self.name == other.name and
                self.description == other.description and
                self.graph == other.graph and
                self.initial == other.initial and
                self.target == other.target and
                self.control == other.control and
                self.sim == other.sim and
                self.perturbation == other.perturbation)

    __hash__ = None

    def __repr__(self):
        return "Scenario(name={!r}, n={}, m_b={}, m_d={})".format(
            self.name, self.graph.n, self.graph.m_b, self.graph.m_d)


def make_targets(target_positions, graph):
    """
    Desired bearings (all R_i = I) and distances of a configuration
    """

    state = FrameworkState(target_positions,
                           np.tile(np.eye(3), (len(target_positions), 1, 1)))
    rel_b, dist_b = rigidity.edge_geometry(
        state, graph.tails(EdgeLabel.BEARING), graph.heads(EdgeLabel.BEARING))
    _, dist_d = rigidity.edge_geometry(
        state, graph.tails(EdgeLabel.DISTANCE),
        graph.heads(EdgeLabel.DISTANCE))
    return TargetFormation(rel_b / dist_b[:, None], dist_d)


def perturbed_state(target_positions, perturbation):
    """
    Target positions moved by uniform offsets, with random rotations of
    bounded angle, drawn from the perturbation seed
    """

    target_positions = np.asarray(target_positions, dtype=float)
    n = target_positions.shape[0]
    rng = np.random.default_rng(perturbation.seed)
    amp = perturbation.position_amplitude
    offsets = rng.uniform(-amp, amp, size=(n, 3))
    rotations = np.stack([
        lie.random_rotation(rng, max_angle=perturbation.rotation_amplitude)
        for _ in range(n)])
    return FrameworkState(target_positions + offsets, rotations)


def _require(data, key, section=None):
    if key not in data:
        raise common.ParseError("Missing required key",
                                field=key if section is None
                                else "{}.{}".format(section, key))
    return data[key]


def _check_keys(data, allowed, section=None):
    for key in data:
        if key not in allowed:
            raise common.ParseError(
                "Unknown key", field=key if section is None
                else "{}.{}".format(section, key))


def _is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _parse_vector(value, length, field):
    if not isinstance(value, list) or len(value) != length or \
            not all(_is_number(x) for x in value):
        raise common.ParseError(
            "Expected a list of {} numbers".format(length), field=field)
    return [float(x) for x in value]


def _parse_edges(value, field):
    if not isinstance(value, list):
        raise common.ParseError("Expected a list of [i, j] pairs",
                                field=field)
    edges = []
    for k, edge in enumerate(value):
        if not isinstance(edge, list) or len(edge) != 2 or \
                not all(isinstance(i, int) and not isinstance(i, bool)
                        for i in edge):
            raise common.ParseError("Expected an [i, j] pair of integers",
                                    field="{}[{}]".format(field, k))
        edges.append((edge[0], edge[1]))
    return edges


def _parse_agents(value):
    if not isinstance(value, list) or not value:
        raise common.ParseError("Expected a non-empty list of agents",
                                field="agents")
    positions = []
    rotations = []
    for i, agent in enumerate(value):
        field = "agents[{}]".format(i)
        if not isinstance(agent, dict):
            raise common.ParseError("Expected an object", field=field)
        _check_keys(agent, ("p", "R"), field)
        positions.append(_parse_vector(_require(agent, "p", field), 3,
                                       field + ".p"))
        rotations.append(_parse_vector(_require(agent, "R", field), 9,
                                       field + ".R"))
    rotations = np.array(rotations).reshape(-1, 3, 3)
    state = FrameworkState(positions, rotations)

    for i, rot in enumerate(state.rotations):
        defect = lie.rotation_defect(rot)
        if defect > common.ROTATION_VALID_TOL:
            raise common.ValidationError(
                "Rotation of agent {} is not orthonormal (defect {:.3e})"
                .format(i, defect), constraint="agents[{}].R".format(i))
    # values printed with limited precision are pulled back onto SO(3)
    if lie.rotation_defect(state.rotations) > common.SKEW_TOL:
        state = state.replace(
            rotations=lie.reorthonormalize(state.rotations))
    return state


def scenario_from_dict(data):
    if not isinstance(data, dict):
        raise common.ParseError("Scenario must be an object")
    _check_keys(data, TOP_LEVEL_KEYS)

    name = _require(data, "name")
    if not isinstance(name, str) or not name:
        raise common.ParseError("Expected a non-empty string", field="name")
    description = data.get("description", "")
    bearing_edges = _parse_edges(_require(data, "bearing_edges"),
                                 "bearing_edges")
    distance_edges = _parse_edges(_require(data, "distance_edges"),
                                  "distance_edges")

    target_data = _require(data, "target")
    if not isinstance(target_data, dict):
        raise common.ParseError("Expected an object", field="target")
    _check_keys(target_data, TARGET_KEYS, "target")

    target_positions = None
    if "positions" in target_data:
        value = target_data["positions"]
        if not isinstance(value, list):
            raise common.ParseError("Expected a list of positions",
                                    field="target.positions")
        target_positions = np.array([
            _parse_vector(p, 3, "target.positions[{}]".format(i))
            for i, p in enumerate(value)])

    control = ControlConfig.from_dict(_require(data, "control"), "control")
    sim = SimConfig.from_dict(_require(data, "sim"), "sim")
    perturbation = None
    if "perturbation" in data:
        perturbation = PerturbationConfig.from_dict(data["perturbation"],
                                                    "perturbation")
        seed = common.get_seed_override()
        if seed is not None:
            perturbation = perturbation.replace(seed=seed)

    if "agents" in data:
        initial = _parse_agents(data["agents"])
    elif perturbation is not None and target_positions is not None:
        initial = perturbed_state(target_positions, perturbation)
    else:
        raise common.ParseError(
            "Missing required key (either agents, or target.positions "
            "with a perturbation block)", field="agents")

    graph = FormationGraph(initial.n, bearing_edges, distance_edges)
    try:
        validate_graph(graph)
    except (common.SelfLoopError, common.IndexOutOfRangeError,
            common.DuplicateEdgeError) as e:
        raise common.ValidationError(str(e), constraint="graph") from e
    dump_graph(graph)

    if "bearings" in target_data and "distances" in target_data:
        bearings = [_parse_vector(b, 3, "target.bearings[{}]".format(k))
                    for k, b in enumerate(target_data["bearings"])]
        distances = target_data["distances"]
        if not isinstance(distances, list) or \
                not all(_is_number(z) for z in distances):
            raise common.ParseError("Expected a list of numbers",
                                    field="target.distances")
        target = TargetFormation(np.array(bearings).reshape(-1, 3),
                                 [float(z) for z in distances])
    elif target_positions is not None:
        if target_positions.shape != (graph.n, 3):
            raise common.ValidationError(
                "Target positions must have shape ({}, 3)".format(graph.n),
                constraint="target.positions")
        try:
            target = make_targets(target_positions, graph)
        except common.CoincidentAgentsError as e:
            raise common.ValidationError(
                str(e), constraint="target.positions") from e
    else:
        raise common.ParseError(
            "Missing required key (bearings and distances, or positions)",
            field="target")

    scenario = Scenario(name, graph, initial, target, control, sim,
                        target_positions=target_positions,
                        perturbation=perturbation, description=description)
    return scenario.validate()


def scenario_to_dict(scenario):
    data = {
        "name": scenario.name,
    }
    if scenario.description:
        data["description"] = scenario.description
    data["agents"] = [
        {"p": [float(x) for x in p], "R": [float(x) for x in r.ravel()]}
        for p, r in zip(scenario.initial.positions,
                        scenario.initial.rotations)]
    data["bearing_edges"] = [list(e) for e in scenario.graph.bearing_edges]
    data["distance_edges"] = [list(e) for e in scenario.graph.distance_edges]
    target = {
        "bearings": [[float(x) for x in b]
                     for b in scenario.target.desired_bearings],
        "distances": [float(z) for z in scenario.target.desired_distances],
    }
    if scenario.target_positions is not None:
        target["positions"] = [[float(x) for x in p]
                               for p in scenario.target_positions]
    data["target"] = target
    if scenario.perturbation is not None:
        data["perturbation"] = scenario.perturbation.to_dict()
    data["control"] = scenario.control.to_dict()
    data["sim"] = scenario.sim.to_dict()
    return data


def load_scenario(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise common.ParseError("Cannot read scenario file {}: {}"
                                .format(path, e.strerror)) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise common.ParseError("Invalid JSON: {}".format(e.msg),
                                line=e.lineno) from e
    return scenario_from_dict(data)


def dump_scenario(scenario, path):
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(scenario_to_dict(scenario), f, indent=2)
            f.write("\n")
    except OSError as e:
        raise common.TrajectoryIOError("Cannot write scenario file {}: {}"
                                       .format(path, e.strerror)) from e


def builtin_names():
    if not ScenarioRegistry.names():
        ScenarioRegistry.discover(SCENARIO_DIR)
    return ScenarioRegistry.names()


def resolve_scenario(name_or_path):
    """
    Load a built-in scenario by name, or a scenario file by path
    """

    if name_or_path in builtin_names():
        return load_scenario(ScenarioRegistry.find(name_or_path))
    if os.path.isfile(name_or_path):
        return load_scenario(name_or_path)
    raise common.ParseError(
        "Unknown scenario '{}' (built-in scenarios: {})"
        .format(name_or_path, ", ".join(builtin_names())))
