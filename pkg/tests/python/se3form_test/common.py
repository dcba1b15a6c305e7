import os
import shutil
import sys
import tempfile
import unittest

import numpy as np


SRC_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__),
                                       "..", "..", "..", "src"))
if SRC_DIR not in sys.path:
    sys.path.insert(0, SRC_DIR)

# pylint: disable=C0413
from se3form import common as se3_common
from se3form.rigidity import FrameworkState
from se3form.utils import lie
from se3form.utils.graph import FormationGraph


CUBE_POSITIONS = np.array([
    [-0.5, -0.5, -0.5], [0.5, -0.5, -0.5], [-0.5, 0.5, -0.5],
    [0.5, 0.5, -0.5], [-0.5, -0.5, 0.5], [0.5, -0.5, 0.5],
    [-0.5, 0.5, 0.5], [0.5, 0.5, 0.5],
])

SQUARE_POSITIONS = np.array([
    [0.0, 0.0, 0.5], [1.0, 0.0, 0.5], [1.0, 1.0, 0.5], [0.0, 1.0, 0.5],
])


def identity_rotations(n):
    return np.tile(np.eye(3), (n, 1, 1))


def framework(positions, rotations=None):
    positions = np.asarray(positions, dtype=float)
    if rotations is None:
        rotations = identity_rotations(positions.shape[0])
    return FrameworkState(positions, rotations)


def random_positions(rng, n, low=-5.0, high=5.0, min_distance=0.5):
    # resample until no two agents are closer than min_distance
    while True:
        positions = rng.uniform(low, high, size=(n, 3))
        diff = positions[:, None, :] - positions[None, :, :]
        dist = np.linalg.norm(diff, axis=-1) + np.eye(n) * 1e9
        if np.min(dist) >= min_distance:
            return positions


def random_framework(rng, n):
    rotations = np.stack([lie.random_rotation(rng) for _ in range(n)])
    return FrameworkState(random_positions(rng, n), rotations)


def random_graph(rng, n, m_b, m_d):
    # edge counts are capped at the n(n - 1) ordered pairs
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    b_idx = rng.choice(len(pairs), size=min(m_b, len(pairs)), replace=False)
    d_idx = rng.choice(len(pairs), size=min(m_d, len(pairs)), replace=False)
    return FormationGraph(n, [pairs[k] for k in sorted(b_idx)],
                          [pairs[k] for k in sorted(d_idx)])


def random_corpus(seed, count, n_min=4, n_max=10, with_distances=True):
    """
    Seeded (state, graph) pairs with 4 to 10 agents
    """

    rng = np.random.default_rng(seed)
    corpus = []
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        m_b = int(rng.integers(1, 2 * n + 1))
        m_d = int(rng.integers(1, n + 1)) if with_distances else 0
        corpus.append((random_framework(rng, n),
                       random_graph(rng, n, m_b, m_d)))
    return corpus


class TestBase(unittest.TestCase):

    package_name = "se3form"
    module_name = ""
    submodule_name = None

    @classmethod
    def setUpClass(cls):
        if cls.submodule_name is not None:
            print("\n======== Module Test: {}.{} ({}) ========"
                  .format(cls.package_name, cls.module_name,
                          cls.submodule_name))
        else:
            print("\n======== Module Test: {}.{} ========"
                  .format(cls.package_name, cls.module_name))

    def setUp(self):
        self.__saved_seed = os.environ.pop("SE3FORM_SEED", None)
        se3_common.disable_debug_mode()
        self.tmpdir = None
        self.setUpEachMethod()

    def setUpEachMethod(self):
        pass

    def tearDown(self):
        self.tearDownEachMethod()
        if self.tmpdir is not None:
            shutil.rmtree(self.tmpdir, ignore_errors=True)
        if self.__saved_seed is not None:
            os.environ["SE3FORM_SEED"] = self.__saved_seed
        else:
            os.environ.pop("SE3FORM_SEED", None)

    def tearDownEachMethod(self):
        pass

    def make_tmpdir(self):
        if self.tmpdir is None:
            self.tmpdir = tempfile.mkdtemp(prefix="se3form_test_")
        return self.tmpdir

    def assertAllClose(self, actual, expected, atol):
        actual = np.asarray(actual, dtype=float)
        expected = np.asarray(expected, dtype=float)
        self.assertEqual(actual.shape, expected.shape)
        if actual.size:
            err = float(np.max(np.abs(actual - expected)))
            self.assertLessEqual(err, atol,
                                 "max abs error {:.3e} > {:.3e}"
                                 .format(err, atol))
