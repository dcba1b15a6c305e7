# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import numpy as np

from . import common
from . import rigidity
from .utils import lie
from .utils.graph import EdgeLabel, incidence, outgoing_incidence


class ControlInputs:
    """
    Body-frame linear velocities v (n x 3) and angular velocities w (n x 3)
    """

    def __init__(self, v, w):
        self.v = np.asarray(v, dtype=float)
        self.w = np.asarray(w, dtype=float)

    @property
    def n(self):
        return self.v.shape[0]

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros((n, 3)), np.zeros((n, 3)))

    def is_finite(self):
        return bool(np.all(np.isfinite(self.v)) and
                    np.all(np.isfinite(self.w)))

    def __iter__(self):
        yield self.v
        yield self.w


def constraint_residual(state, graph, target):
    """
    F - F*, distance entries first, then the stacked bearing errors
    """

    return (rigidity.mixed_rigidity_function(state, graph) -
            target.stacked)


def bearing_potential(state, graph, target):
    if graph.m_b < 1:
        raise common.ValidationError(
            "Bearing potential needs at least one bearing edge",
            constraint="m_b >= 1")
    err = (rigidity.bearing_rigidity_function(state, graph) -
           target.desired_bearings.ravel())
    return 0.5 * float(err @ err)


def mixed_potential(state, graph, target):
    r = constraint_residual(state, graph, target)
    return 0.5 * float(r @ r)


def potential(state, graph, target, law):
    if law == 'BearingOnly':
        return bearing_potential(state, graph, target)
    if law == 'Mixed':
        return mixed_potential(state, graph, target)
    raise ValueError("Invalid control law: {}".format(law))


class FormationController:
    """
    Gradient control law for a fixed graph and target.

    Incidence matrices are built once; each call evaluates the inputs for
    a state. Per-edge terms are summed to agents by matrix products, so
    the summation order is the edge declaration order.
    """

    def __init__(self, graph, target, cfg):
        cfg.validate()
        self.graph = graph
        self.target = target
        self.cfg = cfg

        self.__b_tails = graph.tails(EdgeLabel.BEARING)
        self.__b_heads = graph.heads(EdgeLabel.BEARING)
        self.__d_tails = graph.tails(EdgeLabel.DISTANCE)
        self.__d_heads = graph.heads(EdgeLabel.DISTANCE)
        self.__e_b = incidence(graph, EdgeLabel.BEARING)
        self.__e_o_b = outgoing_incidence(graph, EdgeLabel.BEARING)
        self.__e_d = incidence(graph, EdgeLabel.DISTANCE)
        self.__e_o_d = outgoing_incidence(graph, EdgeLabel.DISTANCE)

        if cfg.law == 'BearingOnly':
            if graph.m_b < 1:
                raise common.ValidationError(
                    "Bearing-only control needs at least one bearing edge",
                    constraint="m_b >= 1")
            # distance edges play no part in the bearing-only law
            self.__use_distances = False
        else:
            self.__use_distances = True

    def __edge_terms(self, state):
        rel_b, dist_b = rigidity.edge_geometry(
            state, self.__b_tails, self.__b_heads)
        inv = 1.0 / dist_b
        unit = rel_b * inv[:, None]
        rt = np.swapaxes(state.rotations[self.__b_tails], -1, -2)
        b = np.einsum('kij,kj->ki', rt, unit)
        r_b = b - self.target.desired_bearings

        if self.__use_distances:
            rel_d, dist_d = rigidity.edge_geometry(
                state, self.__d_tails, self.__d_heads)
            r_d = 0.5 * dist_d ** 2 - self.target.d_star
        else:
            rel_d = np.zeros((0, 3))
            r_d = np.zeros(0)
        return rel_b, inv, unit, b, r_b, rel_d, r_d

    def __scale(self, r_b, r_d):
        scale = self.cfg.gain
        if self.cfg.normalized:
            norm = np.sqrt(r_b.ravel() @ r_b.ravel() + r_d @ r_d)
            if norm > common.NORMALIZE_TOL:
                scale = scale / norm
        return scale

    def gradient(self, state):
        """
        Stacked gradient of the potential, world positions then body
        rotations, i.e. G^T r_b + D^T r_d and K^T r_b
        """

        return self.__gradient(state, self.__edge_terms(state))

    def __gradient(self, state, terms):
        _, inv, unit, b, r_b, rel_d, r_d = terms
        rotations = state.rotations[self.__b_tails]

        # G block transpose: d_ij P(p_bar) R_i r_k, +at the tail -at the head
        g = inv[:, None] * np.einsum(
            'kij,kj->ki', lie.project(unit),
            np.einsum('kij,kj->ki', rotations, r_b))
        grad_p = -self.__e_b @ g
        if self.__use_distances and r_d.shape[0]:
            grad_p = grad_p - self.__e_d @ (r_d[:, None] * rel_d)

        # K block transpose: hat(b)^T r_k = r_k x b, at the tail only
        grad_w = -self.__e_o_b @ np.cross(r_b, b)
        return np.concatenate([grad_p.ravel(), grad_w.ravel()])

    def __full_gradient(self, state, terms):
        n = state.n
        r_b, r_d = terms[4], terms[6]
        grad = self.__gradient(state, terms)
        scale = self.__scale(r_b, r_d)
        grad_p = grad[:3 * n].reshape(n, 3)
        grad_w = grad[3 * n:].reshape(n, 3)
        v = -scale * np.einsum('kji,kj->ki', state.rotations, grad_p)
        w = -scale * grad_w
        return ControlInputs(v, w)

    def __local(self, state, terms):
        _, inv, _, b, r_b, rel_d, r_d = terms
        scale = self.__scale(r_b, r_d)

        # outgoing-edge terms only, all in the measuring agent's body frame
        pos_terms = inv[:, None] * np.einsum('kij,kj->ki',
                                             lie.project(b), r_b)
        grad_v = -self.__e_o_b @ pos_terms
        if self.__use_distances and r_d.shape[0]:
            rt = np.swapaxes(state.rotations[self.__d_tails], -1, -2)
            body_rel = np.einsum('kij,kj->ki', rt, rel_d)
            grad_v = grad_v - self.__e_o_d @ (r_d[:, None] * body_rel)
        grad_w = -self.__e_o_b @ np.cross(r_b, b)
        return ControlInputs(-scale * grad_v, -scale * grad_w)

    def evaluate(self, state):
        """
        Control inputs, potential and the bearing and distance error
        norms from a single pass over the edges
        """

        terms = self.__edge_terms(state)
        r_b, r_d = terms[4], terms[6]
        if self.cfg.mode == 'Local':
            inputs = self.__local(state, terms)
        else:
            inputs = self.__full_gradient(state, terms)
        sq_b = float(r_b.ravel() @ r_b.ravel())
        sq_d = float(r_d @ r_d)
        return inputs, 0.5 * (sq_b + sq_d), np.sqrt(sq_b), np.sqrt(sq_d)

    def __call__(self, state):
        return self.evaluate(state)[0]

    def potential(self, state):
        return self.evaluate(state)[1]


def bearing_only_control(state, graph, target, cfg):
    if cfg.law != 'BearingOnly':
        raise common.ValidationError(
            "Bearing-only control called with law '{}'".format(cfg.law),
            constraint="law = BearingOnly")
    return FormationController(graph, target, cfg)(state)


def mixed_control(state, graph, target, cfg):
    if cfg.law != 'Mixed':
        raise common.ValidationError(
            "Mixed control called with law '{}'".format(cfg.law),
            constraint="law = Mixed")
    return FormationController(graph, target, cfg)(state)


def control_to_gradient(state, inputs, gain):
    """
    Recover the stacked gradient from inputs produced by the un-normalized
    FullGradient law: grad p_i = -R_i v_i / k, grad w_i = -w_i / k
    """

    if not gain > 0.0:
        raise ValueError("Gain must be positive, got {}".format(gain))
    grad_p = -np.einsum('kij,kj->ki', state.rotations, inputs.v) / gain
    grad_w = -inputs.w / gain
    return np.concatenate([grad_p.ravel(), grad_w.ravel()])


def gradient_oracle(state, graph, target, h=1e-6, law='Mixed'):
    """
    Central differences of the potential over the 6n configuration
    coordinates, rotations perturbed on the right
    """

    common.check_step_size(h)
    grad = np.zeros(6 * state.n)
    for index in range(6 * state.n):
        fp = potential(state.perturbed(index, h), graph, target, law)
        fm = potential(state.perturbed(index, -h), graph, target, law)
        grad[index] = (fp - fm) / (2.0 * h)
    return grad
