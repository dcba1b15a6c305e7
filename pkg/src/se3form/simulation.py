# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import enum

import numpy as np
from scipy.spatial.distance import pdist

from . import common
from . import rigidity
from .control import ControlInputs, FormationController
from .utils import lie
from .utils.graph import validate_graph


class TerminationReason(enum.Enum):
    CONVERGED = "Converged"
    STEP_LIMIT = "StepLimit"
    NUMERICAL_FAILURE = "NumericalFailure"


class Sample:
    __slots__ = ("step", "t", "state", "inputs", "phi", "centroid", "scale",
                 "bearing_error", "distance_error")

    def __init__(self, step, t, state, inputs, phi, bearing_error=0.0,
                 distance_error=0.0):
        self.step = step
        self.t = t
        self.state = state
        self.inputs = inputs
        self.phi = phi
        self.centroid, self.scale = centroid_and_scale(state)
        self.bearing_error = bearing_error
        self.distance_error = distance_error


class Trajectory:
    def __init__(self, samples=None, reason=None, message=""):
        self.samples = list(samples or [])
        self.reason = reason
        self.message = message

    def append(self, sample):
        if self.samples and not sample.t > self.samples[-1].t:
            raise ValueError("Sample time {} does not follow {}"
                             .format(sample.t, self.samples[-1].t))
        self.samples.append(sample)

    def finish(self, reason, message=""):
        self.reason = reason
        self.message = message

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, index):
        return self.samples[index]

    def __iter__(self):
        return iter(self.samples)

    @property
    def first(self):
        return self.samples[0]

    @property
    def last(self):
        return self.samples[-1]

    @property
    def steps(self):
        return self.samples[-1].step if self.samples else 0

    @property
    def converged(self):
        return self.reason == TerminationReason.CONVERGED

    def times(self):
        return np.array([s.t for s in self.samples])

    def potentials(self):
        return np.array([s.phi for s in self.samples])

    def check(self):
        if self.reason == TerminationReason.NUMERICAL_FAILURE:
            raise common.NumericalFailureError(
                "Simulation failed at step {}: {}"
                .format(self.steps, self.message))
        return self


class InvariantReport:
    def __init__(self, initial_scale, centroid_drift, scale_drift,
                 rotation_defect, scale_rate, residual_norm):
        self.initial_scale = initial_scale
        self.centroid_drift = centroid_drift
        self.scale_drift = scale_drift
        self.rotation_defect = rotation_defect
        self.scale_rate = scale_rate
        self.residual_norm = residual_norm

    @property
    def relative_centroid_drift(self):
        return _relative(self.centroid_drift, self.initial_scale)

    @property
    def relative_scale_drift(self):
        return _relative(self.scale_drift, self.initial_scale)

    def as_dict(self):
        return {
            "initial_scale": self.initial_scale,
            "centroid_drift": self.centroid_drift,
            "scale_drift": self.scale_drift,
            "relative_centroid_drift": self.relative_centroid_drift,
            "relative_scale_drift": self.relative_scale_drift,
            "rotation_defect": self.rotation_defect,
            "scale_rate": self.scale_rate,
            "residual_norm": self.residual_norm,
        }


def _relative(value, scale):
    if scale > 0.0:
        return value / scale
    return value


def centroid_and_scale(state):
    if state.n < 1:
        raise ValueError("Framework has no agents")
    centroid = np.mean(state.positions, axis=0)
    rel = state.positions - centroid
    scale = float(np.sqrt(np.sum(rel * rel) / state.n))
    return centroid, scale


def shape_error(state, target_positions):
    """
    Largest mismatch between an inter-agent distance and the same
    distance in the target configuration
    """

    target_positions = np.asarray(target_positions, dtype=float)
    if target_positions.shape != state.positions.shape:
        raise ValueError("Target has shape {}, state has {}"
                         .format(target_positions.shape,
                                 state.positions.shape))
    if state.n < 2:
        return 0.0
    return float(np.max(np.abs(pdist(state.positions) -
                               pdist(target_positions))))


def _position_rates(rotations, inputs):
    return np.einsum('kij,kj->ki', rotations, inputs.v)


def step(state, inputs, dt, integrator='EulerExp', control_fn=None):
    """
    Advance p_i' = R_i v_i, R_i' = R_i hat(w_i) by one time step.

    RK4Exp re-evaluates control_fn at the intermediate stages; without it
    the inputs are held constant over the step.
    """

    if integrator == 'EulerExp':
        positions = state.positions + dt * _position_rates(state.rotations,
                                                           inputs)
        rotations = state.rotations @ lie.so3_exp(dt * inputs.w)
        return state.replace(positions=positions, rotations=rotations)

    if integrator != 'RK4Exp':
        raise ValueError("Invalid integrator: {}".format(integrator))

    p0 = state.positions
    r0 = state.rotations

    def rates(u, positions, stage_inputs):
        rotations = r0 @ lie.so3_exp(u)
        if control_fn is not None:
            stage_inputs = control_fn(state.replace(positions=positions,
                                                    rotations=rotations))
        return (_position_rates(rotations, stage_inputs),
                lie.dexp_inv_right(u, stage_inputs.w))

    kp1, ku1 = _position_rates(r0, inputs), inputs.w
    kp2, ku2 = rates(0.5 * dt * ku1, p0 + 0.5 * dt * kp1, inputs)
    kp3, ku3 = rates(0.5 * dt * ku2, p0 + 0.5 * dt * kp2, inputs)
    kp4, ku4 = rates(dt * ku3, p0 + dt * kp3, inputs)

    positions = p0 + dt / 6.0 * (kp1 + 2.0 * kp2 + 2.0 * kp3 + kp4)
    u = dt / 6.0 * (ku1 + 2.0 * ku2 + 2.0 * ku3 + ku4)
    return state.replace(positions=positions, rotations=r0 @ lie.so3_exp(u))


def simulate(state0, graph, target, control_cfg, sim_cfg):
    control_cfg.validate()
    sim_cfg.validate()
    validate_graph(graph, require_bearing=control_cfg.law == 'BearingOnly')
    rigidity.validate_target(target, graph)
    rigidity.validate_state(state0, graph)

    controller = FormationController(graph, target, control_cfg)
    control_fn = controller if sim_cfg.integrator == 'RK4Exp' else None
    log_interval = sim_cfg.record_interval * 1000

    traj = Trajectory()
    state = state0
    inputs, phi, err_b, err_d = controller.evaluate(state)
    last = Sample(0, 0.0, state, inputs, phi, err_b, err_d)
    traj.append(last)
    if phi <= sim_cfg.convergence_tol:
        traj.finish(TerminationReason.CONVERGED)
        return traj

    for k in range(1, sim_cfg.max_steps + 1):
        try:
            with np.errstate(all='ignore'):
                state = step(state, inputs, sim_cfg.dt, sim_cfg.integrator,
                             control_fn)
                if not state.is_finite():
                    raise common.NumericalFailureError(
                        "state is not finite")
                if k % sim_cfg.renorm_interval == 0:
                    state = state.replace(
                        rotations=lie.reorthonormalize(state.rotations))
                inputs, phi, err_b, err_d = controller.evaluate(state)
                if not (np.isfinite(phi) and inputs.is_finite()):
                    raise common.NumericalFailureError(
                        "control inputs are not finite")
        except (common.NumericalFailureError, common.CoincidentAgentsError,
                common.DegenerateError, common.ZeroVectorError) as e:
            if traj.last is not last:
                traj.append(last)
            traj.finish(TerminationReason.NUMERICAL_FAILURE, str(e))
            common.debug_print("Numerical failure at step {}: {}"
                               .format(k, e))
            return traj

        last = Sample(k, k * sim_cfg.dt, state, inputs, phi, err_b, err_d)
        converged = phi <= sim_cfg.convergence_tol
        if (converged or k % sim_cfg.record_interval == 0 or
                k == sim_cfg.max_steps):
            traj.append(last)
        if k % log_interval == 0:
            common.debug_print("step={}, t={:.6g}, phi={:.6e}"
                               .format(k, k * sim_cfg.dt, phi))
        if converged:
            traj.finish(TerminationReason.CONVERGED)
            return traj

    traj.finish(TerminationReason.STEP_LIMIT)
    return traj


def static_trajectory(state, steps, dt):
    """
    Trajectory of a framework held at rest with zero control inputs
    """

    traj = Trajectory()
    zero = ControlInputs.zeros(state.n)
    for k in range(steps + 1):
        traj.append(Sample(k, k * dt, state, zero, 0.0))
        state = step(state, zero, dt)
    traj.finish(TerminationReason.STEP_LIMIT)
    return traj


def invariant_report(traj):
    if len(traj) < 2:
        raise ValueError("Invariant report needs at least two samples, "
                         "got {}".format(len(traj)))
    first = traj.first
    centroid_drift = max(float(np.linalg.norm(s.centroid - first.centroid))
                         for s in traj)
    scale_drift = max(abs(s.scale - first.scale) for s in traj)
    defect = max(lie.rotation_defect(s.state.rotations) for s in traj)
    prev, last = traj[-2], traj[-1]
    scale_rate = (last.scale - prev.scale) / (last.t - prev.t)
    residual = float(np.hypot(last.bearing_error, last.distance_error))
    return InvariantReport(first.scale, centroid_drift, scale_drift, defect,
                           scale_rate, residual)
