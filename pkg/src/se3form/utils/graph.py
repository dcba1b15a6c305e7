# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import enum

import numpy as np

from .. import common


class EdgeLabel(enum.Enum):
    BEARING = "Bearing"
    DISTANCE = "Distance"


class FormationGraph:
    """
    Directed graph with a bearing edge set and a distance edge set.

    An edge (i, j) is measured by agent i: it leaves vertex i (tail) and
    enters vertex j (head). Edge k of a kind is the k-th declared pair.
    """

    def __init__(self, n, bearing_edges=(), distance_edges=()):
        self.n = int(n)
        self.bearing_edges = tuple((int(i), int(j)) for i, j in bearing_edges)
        self.distance_edges = tuple((int(i), int(j))
                                    for i, j in distance_edges)

    @property
    def m_b(self):
        return len(self.bearing_edges)

    @property
    def m_d(self):
        return len(self.distance_edges)

    def edges(self, kind):
        if kind == EdgeLabel.BEARING:
            return self.bearing_edges
        if kind == EdgeLabel.DISTANCE:
            return self.distance_edges
        raise ValueError("Invalid edge kind: {}".format(kind))

    def tails(self, kind):
        return np.array([e[0] for e in self.edges(kind)], dtype=int)

    def heads(self, kind):
        return np.array([e[1] for e in self.edges(kind)], dtype=int)

    def neighbors(self, i, kind):
        """
        Heads of the edges measured by agent i
        """

        return [j for t, j in self.edges(kind) if t == i]

    def __eq__(self, other):
        if not isinstance(other, FormationGraph):
            return NotImplemented
        return (self.n == other.n and
                self.bearing_edges == other.bearing_edges and
                self.distance_edges == other.distance_edges)

    def __hash__(self):
        return hash((self.n, self.bearing_edges, self.distance_edges))

    def __repr__(self):
        return "FormationGraph(n={}, bearing_edges={}, distance_edges={})" \
            .format(self.n, list(self.bearing_edges),
                    list(self.distance_edges))


def validate_graph(graph, require_bearing=False):
    if graph.n < 1:
        raise common.IndexOutOfRangeError(
            "Graph must have at least one vertex, got {}".format(graph.n))

    for kind in EdgeLabel:
        seen = set()
        for k, (i, j) in enumerate(graph.edges(kind)):
            for v in (i, j):
                if not 0 <= v < graph.n:
                    raise common.IndexOutOfRangeError(
                        "{} edge {} ({}, {}) refers to vertex {} outside "
                        "[0, {})".format(kind.value, k, i, j, v, graph.n))
            if i == j:
                raise common.SelfLoopError(
                    "{} edge {} is a self loop on vertex {}"
                    .format(kind.value, k, i))
            if (i, j) in seen:
                raise common.DuplicateEdgeError(
                    "{} edge ({}, {}) is declared more than once"
                    .format(kind.value, i, j))
            seen.add((i, j))

    if require_bearing and graph.m_b < 1:
        raise common.ValidationError(
            "At least one bearing edge is required", constraint="m_b >= 1")

    return graph


def incidence(graph, kind):
    """
    [E]_ik = -1 if edge k leaves vertex i, +1 if it enters it
    """

    edges = graph.edges(kind)
    mat = np.zeros((graph.n, len(edges)))
    for k, (i, j) in enumerate(edges):
        mat[i, k] = -1.0
        mat[j, k] = 1.0
    return mat


def outgoing_incidence(graph, kind):
    """
    [E_o]_ik = -1 if edge k leaves vertex i
    """

    edges = graph.edges(kind)
    mat = np.zeros((graph.n, len(edges)))
    for k, (i, _) in enumerate(edges):
        mat[i, k] = -1.0
    return mat


def kron_expand(mat, d):
    if int(d) < 1:
        raise ValueError("Expansion size must be positive, got {}".format(d))
    return np.kron(np.asarray(mat, dtype=float), np.eye(int(d)))


def complete_graph_edges(n):
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def dump_graph(graph):
    common.debug_print("=== Graph (n={}) ===".format(graph.n))
    for kind in EdgeLabel:
        for k, (i, j) in enumerate(graph.edges(kind)):
            common.debug_print("{} {}: {} -> {}".format(kind.value, k, i, j))
