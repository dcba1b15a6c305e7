# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import numpy as np
from scipy.linalg import block_diag, null_space

from . import common
from .utils import lie
from .utils.graph import (
    EdgeLabel,
    incidence,
    outgoing_incidence,
    kron_expand,
)


AXES = ("x", "y", "z")


class FrameworkState:
    """
    Positions p (n x 3, world frame) and rotations R (n x 3 x 3, body to
    world) of all agents. Arrays are read-only; use replace() to derive a
    new state.
    """

    def __init__(self, positions, rotations):
        positions = np.array(positions, dtype=float)
        rotations = np.array(rotations, dtype=float)
        if positions.ndim != 2 or positions.shape[1] != 3:
            raise common.ValidationError(
                "Positions must have shape (n, 3), got {}"
                .format(positions.shape), constraint="positions")
        if rotations.shape != (positions.shape[0], 3, 3):
            raise common.ValidationError(
                "Rotations must have shape ({}, 3, 3), got {}"
                .format(positions.shape[0], rotations.shape),
                constraint="rotations")
        positions.flags.writeable = False
        rotations.flags.writeable = False
        self.positions = positions
        self.rotations = rotations

    @property
    def n(self):
        return self.positions.shape[0]

    def replace(self, positions=None, rotations=None):
        return FrameworkState(
            self.positions if positions is None else positions,
            self.rotations if rotations is None else rotations)

    def perturbed(self, index, h):
        """
        Move one configuration coordinate by h.

        Indices [0, 3n) are world positions (additive), [3n, 6n) are body
        rotation coordinates (R_i <- R_i exp(h e_a)).
        """

        n = self.n
        if index < 3 * n:
            positions = self.positions.copy()
            positions[index // 3, index % 3] += h
            return self.replace(positions=positions)
        i, a = divmod(index - 3 * n, 3)
        delta = np.zeros(3)
        delta[a] = h
        rotations = self.rotations.copy()
        rotations[i] = rotations[i] @ lie.so3_exp(delta)
        return self.replace(rotations=rotations)

    def is_finite(self):
        return bool(np.all(np.isfinite(self.positions)) and
                    np.all(np.isfinite(self.rotations)))

    def __eq__(self, other):
        if not isinstance(other, FrameworkState):
            return NotImplemented
        return (np.array_equal(self.positions, other.positions) and
                np.array_equal(self.rotations, other.rotations))

    __hash__ = None

    def __repr__(self):
        return "FrameworkState(n={})".format(self.n)


class TargetFormation:
    """
    Desired bearings b* (m_b x 3) and desired distances z* (m_d,).
    d* is stored as z*^2 / 2 like the measured distance entries.
    """

    def __init__(self, desired_bearings, desired_distances):
        self.desired_bearings = np.array(desired_bearings,
                                         dtype=float).reshape(-1, 3)
        self.desired_distances = np.array(desired_distances,
                                          dtype=float).reshape(-1)
        self.desired_bearings.flags.writeable = False
        self.desired_distances.flags.writeable = False

    @property
    def d_star(self):
        return 0.5 * self.desired_distances ** 2

    @property
    def stacked(self):
        return np.concatenate([self.d_star, self.desired_bearings.ravel()])

    def __eq__(self, other):
        if not isinstance(other, TargetFormation):
            return NotImplemented
        return (np.array_equal(self.desired_bearings,
                               other.desired_bearings) and
                np.array_equal(self.desired_distances,
                               other.desired_distances))

    __hash__ = None


class RigidityMatrices:
    """
    Blocks of the mixed rigidity matrix, assembled as [[D, 0], [G, K]]
    """

    def __init__(self, D, G, K):
        self.D = D
        self.G = G
        self.K = K

    @property
    def assembled(self):
        zero = np.zeros((self.D.shape[0], self.K.shape[1]))
        return np.block([[self.D, zero], [self.G, self.K]])


class RigidityReport:
    def __init__(self, rank, null_basis, trivial_dimension, singular_values,
                 labels):
        self.rank = rank
        self.null_basis = null_basis
        self.trivial_dimension = trivial_dimension
        self.singular_values = singular_values
        self.labels = labels

    @property
    def null_dimension(self):
        return self.null_basis.shape[1]

    @property
    def infinitesimally_rigid(self):
        return self.null_dimension == self.trivial_dimension

    def labeled_basis(self, threshold=1e-9):
        """
        Per basis vector, the (label, value) pairs above threshold
        """

        basis = []
        for col in self.null_basis.T:
            basis.append([(self.labels[r], float(col[r]))
                          for r in range(col.shape[0])
                          if abs(col[r]) > threshold])
        return basis


def validate_state(state, graph):
    if state.n != graph.n:
        raise common.ValidationError(
            "State has {} agents but the graph has {} vertices"
            .format(state.n, graph.n), constraint="n")
    if not state.is_finite():
        raise common.ValidationError("State has non-finite entries",
                                     constraint="finite")
    for i, rot in enumerate(state.rotations):
        defect = lie.rotation_defect(rot)
        if defect > common.ROTATION_VALID_TOL:
            raise common.ValidationError(
                "Rotation of agent {} is not orthonormal (defect {:.3e})"
                .format(i, defect), constraint="R^T R = I")
        if np.linalg.det(rot) <= 0.0:
            raise common.ValidationError(
                "Rotation of agent {} has a negative determinant".format(i),
                constraint="det(R) = 1")
    for kind in EdgeLabel:
        edge_geometry(state, graph.tails(kind), graph.heads(kind))
    return state


def validate_target(target, graph):
    if target.desired_bearings.shape[0] != graph.m_b:
        raise common.ValidationError(
            "Expected {} desired bearings, got {}"
            .format(graph.m_b, target.desired_bearings.shape[0]),
            constraint="len(bearings) = m_b")
    if target.desired_distances.shape[0] != graph.m_d:
        raise common.ValidationError(
            "Expected {} desired distances, got {}"
            .format(graph.m_d, target.desired_distances.shape[0]),
            constraint="len(distances) = m_d")
    for k, z in enumerate(target.desired_distances):
        if not z > 0.0:
            raise common.ValidationError(
                "Desired distance {} must be positive, got {}".format(k, z),
                constraint="z* > 0")
    for k, b in enumerate(target.desired_bearings):
        norm = np.linalg.norm(b)
        if abs(norm - 1.0) > common.UNIT_NORM_TOL:
            raise common.ValidationError(
                "Desired bearing {} is not a unit vector (norm {})"
                .format(k, norm), constraint="|b*| = 1")
    return target


def edge_geometry(state, tails, heads):
    """
    Relative positions p_i - p_j and their lengths for edges (i, j)
    """

    rel = state.positions[tails] - state.positions[heads]
    dist = np.linalg.norm(rel, axis=-1)
    bad = np.nonzero(~(dist > common.COINCIDENT_TOL))[0]
    if bad.size > 0:
        k = bad[0]
        raise common.CoincidentAgentsError(int(tails[k]), int(heads[k]),
                                           float(dist[k]))
    return rel, dist


def edge_lengths(state, edges):
    edges = list(edges)
    if not edges:
        return np.zeros(0)
    tails = np.array([e[0] for e in edges], dtype=int)
    heads = np.array([e[1] for e in edges], dtype=int)
    return np.linalg.norm(state.positions[tails] - state.positions[heads],
                          axis=-1)


def bearing(state, edge):
    i, j = edge
    rel, dist = edge_geometry(state, np.array([i]), np.array([j]))
    return state.rotations[i].T @ (rel[0] / dist[0])


def bearings(state, graph):
    """
    Bearings of all bearing edges as an (m_b, 3) array, with the unit
    world-frame directions and the inverse lengths d_ij
    """

    tails = graph.tails(EdgeLabel.BEARING)
    heads = graph.heads(EdgeLabel.BEARING)
    rel, dist = edge_geometry(state, tails, heads)
    inv = 1.0 / dist
    unit = rel * inv[:, None]
    b = np.einsum('kji,kj->ki', state.rotations[tails], unit)
    return b, unit, inv


def bearing_rigidity_function(state, graph):
    b, _, _ = bearings(state, graph)
    return b.ravel()


def compact_bearing_rigidity_function(state, graph):
    """
    Matrix form -diag(d_ij R_i^T) E_bar^T p of the stacked bearings
    """

    if graph.m_b == 0:
        return np.zeros(0)
    tails = graph.tails(EdgeLabel.BEARING)
    _, dist = edge_geometry(state, tails, graph.heads(EdgeLabel.BEARING))
    blocks = [state.rotations[i].T / z for i, z in zip(tails, dist)]
    e_bar = kron_expand(incidence(graph, EdgeLabel.BEARING), 3)
    return -block_diag(*blocks) @ (e_bar.T @ state.positions.ravel())


def distance_function(state, graph):
    tails = graph.tails(EdgeLabel.DISTANCE)
    heads = graph.heads(EdgeLabel.DISTANCE)
    _, dist = edge_geometry(state, tails, heads)
    return 0.5 * dist ** 2


def mixed_rigidity_function(state, graph):
    return np.concatenate([distance_function(state, graph),
                           bearing_rigidity_function(state, graph)])


def _bearing_blocks(state, graph):
    n = state.n
    b, unit, inv = bearings(state, graph)
    tails = graph.tails(EdgeLabel.BEARING)
    if graph.m_b == 0:
        return np.zeros((0, 3 * n)), np.zeros((0, 3 * n))

    rt = np.swapaxes(state.rotations[tails], -1, -2)
    g_blocks = inv[:, None, None] * (rt @ lie.project(unit))
    # body-frame rotation columns: R_i^T hat(p_bar) R_i = hat(b_ij)
    k_blocks = lie.hat(b)

    e_bar = kron_expand(incidence(graph, EdgeLabel.BEARING), 3)
    e_o_bar = kron_expand(outgoing_incidence(graph, EdgeLabel.BEARING), 3)
    G = -block_diag(*g_blocks) @ e_bar.T
    K = -block_diag(*k_blocks) @ e_o_bar.T
    return G, K


def bearing_rigidity_matrix(state, graph):
    G, K = _bearing_blocks(state, graph)
    return np.hstack([G, K])


def mixed_rigidity_matrix(state, graph):
    n = state.n
    tails = graph.tails(EdgeLabel.DISTANCE)
    heads = graph.heads(EdgeLabel.DISTANCE)
    edge_geometry(state, tails, heads)

    if graph.m_d == 0:
        D = np.zeros((0, 3 * n))
    else:
        e_bar = kron_expand(incidence(graph, EdgeLabel.DISTANCE), 3)
        # e_k = p_j - p_i, so that J(e) E_bar^T gives grad of z^2 / 2
        e = (e_bar.T @ state.positions.ravel()).reshape(-1, 3)
        D = block_diag(*e[:, None, :]) @ e_bar.T
    G, K = _bearing_blocks(state, graph)
    return RigidityMatrices(D, G, K)


def finite_difference_jacobian(state, graph, h=1e-6, which='bearing'):
    common.check_step_size(h)
    if which == 'bearing':
        func = bearing_rigidity_function
    elif which == 'mixed':
        func = mixed_rigidity_function
    else:
        raise ValueError("Invalid function selector: {}".format(which))

    cols = []
    for index in range(6 * state.n):
        fp = func(state.perturbed(index, h), graph)
        fm = func(state.perturbed(index, -h), graph)
        cols.append((fp - fm) / (2.0 * h))
    return np.stack(cols, axis=1)


def infinitesimal_motion_space(mat, tol=common.NULL_SPACE_TOL):
    mat = np.asarray(mat, dtype=float)
    if mat.shape[0] == 0 or not np.any(mat):
        return np.eye(mat.shape[1])
    return null_space(mat, rcond=tol)


def trivial_motion_basis(state, include_scaling=True):
    """
    Columns: 3 translations, 3 coordinated rotations about the centroid
    and optionally the uniform scaling, in (p, omega) coordinates
    """

    n = state.n
    center = np.mean(state.positions, axis=0)
    rel = state.positions - center
    cols = []
    for a in range(3):
        vec = np.zeros((2, n, 3))
        vec[0, :, a] = 1.0
        cols.append(vec.ravel())
    for a in range(3):
        axis = np.zeros(3)
        axis[a] = 1.0
        vec = np.zeros((2, n, 3))
        vec[0] = np.cross(axis, rel)
        vec[1] = np.einsum('kji,j->ki', state.rotations, axis)
        cols.append(vec.ravel())
    if include_scaling:
        vec = np.zeros((2, n, 3))
        vec[0] = rel
        cols.append(vec.ravel())
    return np.stack(cols, axis=1)


def coordinate_labels(n):
    return (["p{}.{}".format(i, a) for i in range(n) for a in AXES] +
            ["w{}.{}".format(i, a) for i in range(n) for a in AXES])


def rigidity_report(state, graph, tol=common.NULL_SPACE_TOL):
    mat = mixed_rigidity_matrix(state, graph).assembled
    sv = np.linalg.svd(mat, compute_uv=False) if mat.size else np.zeros(0)
    null = infinitesimal_motion_space(mat, tol)
    rank = mat.shape[1] - null.shape[1]
    trivial = trivial_motion_basis(state, include_scaling=graph.m_d == 0)
    report = RigidityReport(rank, null, int(np.linalg.matrix_rank(trivial)),
                            sv, coordinate_labels(state.n))
    common.debug_print("rank={}, null={}, trivial={}".format(
        report.rank, report.null_dimension, report.trivial_dimension))
    return report


def relative_error(value, reference):
    """
    Largest entrywise difference, relative to the largest reference entry
    (or absolute when that entry is below one)
    """

    value = np.asarray(value, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if value.size == 0:
        return 0.0
    diff = float(np.max(np.abs(value - reference)))
    return diff / max(float(np.max(np.abs(reference))), 1.0)
