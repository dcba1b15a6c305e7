# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import numpy as np
from scipy.linalg import polar

from .. import common


# All functions accept a single vector/matrix or a stack of them along the
# leading axes, e.g. omega of shape (n, 3) gives n matrices of shape (3, 3).


def hat(omega):
    """
    Map a vector to the skew-symmetric matrix with hat(w) @ x == cross(w, x)
    """

    omega = np.asarray(omega, dtype=float)
    x, y, z = omega[..., 0], omega[..., 1], omega[..., 2]
    zero = np.zeros_like(x)
    return np.stack([
        np.stack([zero, -z, y], axis=-1),
        np.stack([z, zero, -x], axis=-1),
        np.stack([-y, x, zero], axis=-1),
    ], axis=-2)


def vee(mat):
    """
    Inverse of hat. The symmetric part is discarded once the input is
    known to be skew within SKEW_TOL.
    """

    mat = np.asarray(mat, dtype=float)
    sym = mat + np.swapaxes(mat, -1, -2)
    defect = np.sqrt(np.sum(sym * sym, axis=(-2, -1)))
    if np.any(defect > common.SKEW_TOL):
        raise common.NotSkewError(
            "Matrix is not skew-symmetric (|M + M^T|_F = {:.3e})"
            .format(float(np.max(defect))))
    return np.stack([
        0.5 * (mat[..., 2, 1] - mat[..., 1, 2]),
        0.5 * (mat[..., 0, 2] - mat[..., 2, 0]),
        0.5 * (mat[..., 1, 0] - mat[..., 0, 1]),
    ], axis=-1)


def project(v):
    """
    Orthogonal projector onto the complement of v: I - (v/|v|)(v/|v|)^T
    """

    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v, axis=-1)
    if np.any(norm <= common.ZERO_VECTOR_TOL):
        raise common.ZeroVectorError(
            "Cannot project on the complement of a zero vector (|v| = {:.3e})"
            .format(float(np.min(norm))))
    u = v / norm[..., None]
    return np.eye(3) - u[..., :, None] * u[..., None, :]


def so3_exp(omega):
    """
    Rodrigues formula. Below SMALL_ANGLE the second order series
    I + W + W^2 / 2 is used instead.
    """

    omega = np.asarray(omega, dtype=float)
    theta = np.linalg.norm(omega, axis=-1)
    w = hat(omega)
    w2 = w @ w

    small = theta < common.SMALL_ANGLE
    safe = np.where(small, 1.0, theta)
    half = 0.5 * safe
    a = np.where(small, 1.0, np.sin(safe) / safe)
    b = np.where(small, 0.5, 2.0 * np.sin(half) ** 2 / (safe * safe))

    return np.eye(3) + a[..., None, None] * w + b[..., None, None] * w2


def dexp_inv_right(u, omega):
    """
    Right-trivialized inverse differential of exp, truncated after the
    second bracket: omega + u x omega / 2 + u x (u x omega) / 12
    """

    u = np.asarray(u, dtype=float)
    uxw = np.cross(u, omega)
    return omega + 0.5 * uxw + np.cross(u, uxw) / 12.0


def rotation_defect(rot):
    """
    Frobenius norm of R^T R - I (max over a stack)
    """

    rot = np.asarray(rot, dtype=float)
    gram = np.swapaxes(rot, -1, -2) @ rot - np.eye(3)
    return float(np.max(np.sqrt(np.sum(gram * gram, axis=(-2, -1)))))


def reorthonormalize(rot):
    """
    Nearest rotation matrix (polar factor) of a slightly drifted matrix
    """

    rot = np.asarray(rot, dtype=float)
    if rot.ndim > 2:
        return np.stack([reorthonormalize(r) for r in rot])

    sv = np.linalg.svd(rot, compute_uv=False)
    if sv[-1] <= common.ZERO_VECTOR_TOL * max(sv[0], 1.0):
        raise common.DegenerateError(
            "Matrix is rank deficient (smallest singular value {:.3e})"
            .format(sv[-1]))
    defect = rotation_defect(rot)
    if defect >= common.ROTATION_DEFECT_TOL:
        raise common.DegenerateError(
            "Matrix is too far from SO(3) to renormalize (defect {:.3e})"
            .format(defect))

    unitary, _ = polar(rot)
    if np.linalg.det(unitary) <= 0.0:
        raise common.DegenerateError("Matrix has a negative determinant")
    return unitary


def random_rotation(rng, max_angle=np.pi):
    """
    Rotation about a uniformly random axis by an angle in [0, max_angle]
    """

    axis = rng.normal(size=3)
    axis = axis / np.linalg.norm(axis)
    angle = rng.uniform(0.0, max_angle)
    return so3_exp(angle * axis)


def rot_x(angle):
    return so3_exp(np.array([angle, 0.0, 0.0]))


def rot_y(angle):
    return so3_exp(np.array([0.0, angle, 0.0]))


def rot_z(angle):
    return so3_exp(np.array([0.0, 0.0, angle]))
