# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import csv

import matplotlib
from matplotlib.figure import Figure
import numpy as np

from . import common
from .control import ControlInputs
from .rigidity import FrameworkState
from .simulation import Sample, Trajectory


CSV_HEADER = [
    "t", "agent", "px", "py", "pz",
    "r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32", "r33",
    "vx", "vy", "vz", "wx", "wy", "wz",
    "phi", "centroid_x", "centroid_y", "centroid_z", "scale",
]

PROJECTIONS = ('xy', 'xz', 'yz', 'iso')

SVG_RC = {
    "svg.hashsalt": "se3form",
    "svg.fonttype": "none",
}

_COS30 = np.sqrt(3.0) / 2.0


def _fmt(value):
    return "{:.17g}".format(value)


def write_trajectory(traj, path):
    if len(traj) == 0:
        raise common.ValidationError("Trajectory is empty",
                                     constraint="len(traj) >= 1")
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for sample in traj:
                state = sample.state
                for i in range(state.n):
                    row = [_fmt(sample.t), str(i)]
                    row.extend(_fmt(x) for x in state.positions[i])
                    row.extend(_fmt(x) for x in state.rotations[i].ravel())
                    row.extend(_fmt(x) for x in sample.inputs.v[i])
                    row.extend(_fmt(x) for x in sample.inputs.w[i])
                    row.append(_fmt(sample.phi))
                    row.extend(_fmt(x) for x in sample.centroid)
                    row.append(_fmt(sample.scale))
                    writer.writerow(row)
    except OSError as e:
        raise common.TrajectoryIOError("Cannot write trajectory {}: {}"
                                       .format(path, e.strerror)) from e
    common.debug_print("{} samples written to {}".format(len(traj), path))


def read_trajectory(path):
    """
    Read a trajectory CSV back. Only the columns stored in the file are
    restored; the error norms of each sample are left at zero.
    """

    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise common.TrajectoryIOError("Cannot read trajectory {}: {}"
                                       .format(path, e.strerror)) from e
    if not rows or rows[0] != CSV_HEADER:
        raise common.ParseError("Unexpected trajectory header", line=1)

    groups = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(CSV_HEADER):
            raise common.ParseError(
                "Expected {} columns, got {}"
                .format(len(CSV_HEADER), len(row)), line=lineno)
        try:
            t = float(row[0])
            agent = int(row[1])
            values = [float(x) for x in row[2:]]
        except ValueError as e:
            raise common.ParseError("Invalid number", line=lineno) from e
        if not groups or groups[-1][0] != t:
            groups.append((t, []))
        if agent != len(groups[-1][1]):
            raise common.ParseError(
                "Agent {} out of order".format(agent), line=lineno)
        groups[-1][1].append(values)

    traj = Trajectory()
    for k, (t, agents) in enumerate(groups):
        data = np.array(agents)
        state = FrameworkState(data[:, 0:3], data[:, 3:12].reshape(-1, 3, 3))
        inputs = ControlInputs(data[:, 12:15], data[:, 15:18])
        traj.append(Sample(k, t, state, inputs, float(data[0, 18])))
    return traj


def project_points(points, projection):
    points = np.asarray(points, dtype=float)
    if projection == 'xy':
        return points[..., 0], points[..., 1]
    if projection == 'xz':
        return points[..., 0], points[..., 2]
    if projection == 'yz':
        return points[..., 1], points[..., 2]
    if projection == 'iso':
        x = (points[..., 0] - points[..., 1]) * _COS30
        y = points[..., 2] + 0.5 * (points[..., 0] + points[..., 1])
        return x, y
    raise ValueError("Invalid projection: {}".format(projection))


def _save_svg(fig, path):
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as e:
        raise common.TrajectoryIOError("Cannot write plot {}: {}"
                                       .format(path, e.strerror)) from e


def emit_plot(traj, path, projection='iso', target_positions=None):
    """
    Agent paths with start and end markers. The target configuration is
    drawn around the final centroid when given.
    """

    if len(traj) == 0:
        raise common.ValidationError("Trajectory is empty",
                                     constraint="len(traj) >= 1")
    if projection not in PROJECTIONS:
        raise ValueError("Invalid projection: {}".format(projection))

    positions = np.stack([s.state.positions for s in traj])
    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(6.0, 6.0))
        ax = fig.add_subplot(1, 1, 1)
        for i in range(positions.shape[1]):
            xs, ys = project_points(positions[:, i], projection)
            color = "C{}".format(i % 10)
            ax.plot(xs, ys, color=color, linewidth=1.0,
                    gid="agent-{}-path".format(i))
            ax.plot(xs[:1], ys[:1], color=color, marker="o",
                    linestyle="none", gid="agent-{}-start".format(i))
            ax.plot(xs[-1:], ys[-1:], color=color, marker="s",
                    linestyle="none", gid="agent-{}-end".format(i))

        if target_positions is not None:
            target = np.asarray(target_positions, dtype=float)
            target = target - np.mean(target, axis=0) + \
                np.mean(positions[-1], axis=0)
            xs, ys = project_points(target, projection)
            ax.plot(xs, ys, color="red", marker="x", linestyle="none",
                    gid="target-formation")

        ax.set_aspect("equal", adjustable="datalim")
        ax.set_title("{} projection".format(projection))
        _save_svg(fig, path)


def emit_error_plot(traj, path):
    """
    Potential and bearing error norm against time on a log scale
    """

    if len(traj) == 0:
        raise common.ValidationError("Trajectory is empty",
                                     constraint="len(traj) >= 1")

    times = traj.times()
    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(6.0, 4.0))
        ax = fig.add_subplot(1, 1, 1)
        ax.plot(times, traj.potentials(), label="phi", gid="potential")
        ax.plot(times, [s.bearing_error for s in traj],
                label="|b - b*|", gid="bearing-error")
        ax.set_yscale("log", nonpositive="clip")
        ax.set_xlabel("t [s]")
        ax.legend()
        _save_svg(fig, path)
