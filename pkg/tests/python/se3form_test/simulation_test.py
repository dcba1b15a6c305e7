import unittest

import numpy as np

from . import common
from se3form import common as se3_common
from se3form import control
from se3form import rigidity
from se3form import simulation
from se3form.control import ControlInputs
from se3form.properties import ControlConfig, SimConfig
from se3form.rigidity import TargetFormation
from se3form.scenario import resolve_scenario
from se3form.simulation import TerminationReason
from se3form.utils import lie
from se3form.utils.graph import FormationGraph


# relative O(dt) allowance on the first order drift ratio of 2
DRIFT_ORDER_SLACK = 0.05

# null space dimension at the target square, against 6 trivial motions
MIXED_QUAD_NULL_DIMENSIONS = {
    "quad4-5b1d": 13,
    "quad4-3b4d": 14,
    "quad4-3b3d": 15,
}


def run(scenario, **overrides):
    sim = scenario.sim.replace(**overrides)
    return simulation.simulate(scenario.initial, scenario.graph,
                               scenario.target, scenario.control, sim)


class TestStep(common.TestBase):
    module_name = "simulation"
    submodule_name = "step"

    def test_ok_zero_inputs(self):
        print("[TEST] (OK) zero inputs leave the state unchanged")
        rng = np.random.default_rng(81)
        state = common.random_framework(rng, 4)
        moved = simulation.step(state, ControlInputs.zeros(4), 0.1)
        self.assertEqual(moved, state)

    def test_ok_translation(self):
        print("[TEST] (OK) constant linear velocity")
        state = common.framework([[1.0, 2.0, 3.0]])
        inputs = ControlInputs([[1.0, 0.0, 0.0]], [[0.0, 0.0, 0.0]])
        for integrator in ('EulerExp', 'RK4Exp'):
            moved = simulation.step(state, inputs, 0.1, integrator)
            self.assertAllClose(moved.positions, [[1.1, 2.0, 3.0]], 1e-15)
            self.assertAllClose(moved.rotations, [np.eye(3)], 0.0)

    def test_ok_rotation(self):
        print("[TEST] (OK) constant angular velocity")
        state = common.framework([[0.0, 0.0, 0.0]])
        inputs = ControlInputs([[0.0, 0.0, 0.0]], [[0.0, 0.0, np.pi / 2]])
        expect = [[[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]]
        for integrator in ('EulerExp', 'RK4Exp'):
            moved = simulation.step(state, inputs, 1.0, integrator)
            self.assertAllClose(moved.rotations, expect, 1e-15)
            self.assertAllClose(moved.positions, [[0.0, 0.0, 0.0]], 0.0)

    def test_ok_rk4_arc(self):
        print("[TEST] (OK) RK4Exp follows a circular arc")
        state = common.framework([[0.0, 0.0, 0.0]])
        inputs = ControlInputs([[1.0, 0.0, 0.0]], [[0.0, 0.0, 1.0]])
        dt = 0.1
        for _ in range(10):
            state = simulation.step(state, inputs, dt, 'RK4Exp')
        self.assertAllClose(state.positions,
                            [[np.sin(1.0), 1.0 - np.cos(1.0), 0.0]], 1e-7)
        self.assertAllClose(state.rotations, [lie.rot_z(1.0)], 1e-12)

    def test_ok_rk4_closed_loop(self):
        print("[TEST] (OK) RK4Exp agrees with fine EulerExp steps")
        rng = np.random.default_rng(82)
        rotations = np.stack([lie.random_rotation(rng) for _ in range(4)])
        state = common.framework(
            common.random_positions(rng, 4, -1.0, 1.0), rotations)
        graph = common.random_graph(rng, 4, 6, 2)
        target = TargetFormation(
            rigidity.bearings(state, graph)[0] + 0.1,
            rigidity.edge_lengths(state, graph.distance_edges) * 1.1)
        controller = control.FormationController(
            graph, target, ControlConfig(law='Mixed'))

        coarse = simulation.step(state, controller(state), 0.01, 'RK4Exp',
                                 controller)
        fine = state
        for _ in range(100):
            fine = simulation.step(fine, controller(fine), 1e-4)
        self.assertAllClose(coarse.positions, fine.positions, 1e-5)
        self.assertAllClose(coarse.rotations, fine.rotations, 1e-5)

    def test_ng_integrator(self):
        print("[TEST] (NG) unknown integrator")
        state = common.framework([[0.0, 0.0, 0.0]])
        with self.assertRaises(ValueError):
            simulation.step(state, ControlInputs.zeros(1), 0.1, 'Verlet')


class TestCentroidAndScale(common.TestBase):
    module_name = "simulation"
    submodule_name = "centroid_and_scale"

    def test_ok_cube(self):
        print("[TEST] (OK) cube centroid and scale")
        state = common.framework(2.0 * common.CUBE_POSITIONS)
        centroid, scale = simulation.centroid_and_scale(state)
        self.assertAllClose(centroid, np.zeros(3), 0.0)
        self.assertAlmostEqual(scale, np.sqrt(3.0), places=15)

    def test_ok_single_agent(self):
        print("[TEST] (OK) single agent")
        state = common.framework([[1.0, -2.0, 0.5]])
        centroid, scale = simulation.centroid_and_scale(state)
        self.assertAllClose(centroid, [1.0, -2.0, 0.5], 0.0)
        self.assertEqual(scale, 0.0)

    def test_ok_translation(self):
        print("[TEST] (OK) translation moves the centroid only")
        rng = np.random.default_rng(83)
        state = common.random_framework(rng, 6)
        shift = np.array([0.5, -3.0, 2.0])
        c0, s0 = simulation.centroid_and_scale(state)
        c1, s1 = simulation.centroid_and_scale(
            state.replace(positions=state.positions + shift))
        self.assertAllClose(c1, c0 + shift, 1e-14)
        self.assertAlmostEqual(s1, s0, places=13)

    def test_ok_shape_error(self):
        print("[TEST] (OK) shape error")
        state = common.framework(common.SQUARE_POSITIONS)
        moved = state.replace(positions=lie.rot_x(0.7).dot(
            state.positions.T).T + 3.0)
        self.assertLess(simulation.shape_error(moved,
                                               common.SQUARE_POSITIONS),
                        1e-14)
        stretched = state.replace(positions=2.0 * state.positions)
        self.assertAlmostEqual(simulation.shape_error(
            stretched, common.SQUARE_POSITIONS), np.sqrt(2.0), places=14)


class TestSimulate(common.TestBase):
    module_name = "simulation"
    submodule_name = "simulate"

    def test_ok_converged_at_start(self):
        print("[TEST] (OK) initial state at the target")
        state = common.framework(common.SQUARE_POSITIONS)
        graph = FormationGraph(4, [(0, 1), (1, 2), (2, 3)], [(3, 0)])
        b, _, _ = rigidity.bearings(state, graph)
        target = TargetFormation(b, [1.0])
        traj = simulation.simulate(state, graph, target,
                                   ControlConfig(law='Mixed'), SimConfig())
        self.assertEqual(traj.reason, TerminationReason.CONVERGED)
        self.assertEqual(len(traj), 1)
        self.assertEqual(traj.steps, 0)
        self.assertEqual(traj.last.t, 0.0)

    def test_ng_invalid_inputs(self):
        print("[TEST] (NG) invalid simulation inputs")
        state = common.framework(common.SQUARE_POSITIONS)
        graph = FormationGraph(4, [(0, 1)])
        target = TargetFormation([[1.0, 0.0, 0.0]], [])
        with self.assertRaises(se3_common.ValidationError):
            simulation.simulate(state, graph,
                                TargetFormation([[2.0, 0.0, 0.0]], []),
                                ControlConfig(), SimConfig())
        with self.assertRaises(se3_common.ValidationError):
            simulation.simulate(common.framework([[0.0, 0.0, 0.0]]), graph,
                                target, ControlConfig(), SimConfig())
        with self.assertRaises(se3_common.SelfLoopError):
            simulation.simulate(state, FormationGraph(4, [(1, 1)]), target,
                                ControlConfig(), SimConfig())

    def test_ok_large_step_guarded(self):
        print("[TEST] (OK) huge time step never passes as converged")
        scenario = resolve_scenario("quad4-5b1d")
        traj = run(scenario, dt=10.0, max_steps=200)
        self.assertIn(traj.reason, (TerminationReason.STEP_LIMIT,
                                    TerminationReason.NUMERICAL_FAILURE))
        for sample in traj:
            self.assertTrue(sample.state.is_finite())
        if traj.reason == TerminationReason.STEP_LIMIT:
            self.assertGreater(traj.last.phi, scenario.sim.convergence_tol)
        else:
            with self.assertRaises(se3_common.NumericalFailureError):
                traj.check()

    def test_ok_step_limit(self):
        print("[TEST] (OK) step limit and record interval")
        scenario = resolve_scenario("quad4-5b1d")
        traj = run(scenario, max_steps=25, record_interval=10)
        self.assertEqual(traj.reason, TerminationReason.STEP_LIMIT)
        self.assertEqual([s.step for s in traj], [0, 10, 20, 25])
        self.assertTrue(np.all(np.diff(traj.times()) > 0.0))
        self.assertIs(traj.check(), traj)
        self.assertLessEqual(len(run(scenario, max_steps=25)), 26)

    def test_ok_potential_decreases(self):
        print("[TEST] (OK) potential decreases along the 5b1d run")
        traj = run(resolve_scenario("quad4-5b1d"))
        self.assertEqual(traj.reason, TerminationReason.CONVERGED)
        self.assertTrue(np.all(np.diff(traj.potentials()) <= 0.0))

    def test_ok_rotation_hygiene(self):
        print("[TEST] (OK) rotations stay orthonormal")
        traj = run(resolve_scenario("quad4-bearing"), max_steps=3000,
                   renorm_interval=100)
        for sample in traj:
            self.assertLess(lie.rotation_defect(sample.state.rotations),
                            1e-8)

    def test_ok_static_trajectory(self):
        print("[TEST] (OK) static trajectory has no drift")
        rng = np.random.default_rng(84)
        traj = simulation.static_trajectory(common.random_framework(rng, 5),
                                            10, 0.1)
        self.assertEqual(len(traj), 11)
        report = simulation.invariant_report(traj)
        self.assertEqual(report.centroid_drift, 0.0)
        self.assertEqual(report.scale_drift, 0.0)
        self.assertEqual(report.scale_rate, 0.0)

    def test_ng_trajectory(self):
        print("[TEST] (NG) trajectory invariants")
        state = common.framework([[0.0, 0.0, 0.0]])
        traj = simulation.static_trajectory(state, 0, 0.1)
        with self.assertRaises(ValueError):
            simulation.invariant_report(traj)
        with self.assertRaises(ValueError):
            traj.append(simulation.Sample(1, 0.0, state,
                                          ControlInputs.zeros(1), 0.0))


class TestScenarioReproduction(common.TestBase):
    module_name = "simulation"
    submodule_name = "scenarios"

    def test_ok_cube_converges(self):
        print("[TEST] (OK) cube8-bearing converges at its initial scale")
        traj = run(resolve_scenario("cube8-bearing"), record_interval=100)
        self.assertEqual(traj.reason, TerminationReason.CONVERGED)
        self.assertLessEqual(traj.steps, 200000)
        self.assertLess(traj.last.bearing_error, 1e-3)
        report = simulation.invariant_report(traj)
        self.assertLess(report.relative_scale_drift, 1e-4)
        self.assertLess(report.rotation_defect, 1e-8)

    def test_ok_cube_invariants(self):
        print("[TEST] (OK) cube8-bearing centroid and scale at dt = 1e-3")
        traj = run(resolve_scenario("cube8-bearing"), dt=1e-3,
                   integrator='RK4Exp', record_interval=100)
        self.assertEqual(traj.reason, TerminationReason.CONVERGED)
        report = simulation.invariant_report(traj)
        self.assertLess(report.relative_centroid_drift, 1e-6)
        self.assertLess(report.relative_scale_drift, 1e-6)

    def test_ok_cube_drift_order(self):
        print("[TEST] (OK) EulerExp drift halves with dt")
        scenario = resolve_scenario("cube8-bearing")
        drifts = []
        for dt in (0.01, 0.005):
            traj = run(scenario, dt=dt, integrator='EulerExp',
                       record_interval=10)
            self.assertEqual(traj.reason, TerminationReason.CONVERGED)
            report = simulation.invariant_report(traj)
            drifts.append(report.scale_drift)
            # the position update sums to zero, so only roundoff moves it
            self.assertLess(report.relative_centroid_drift, 1e-10)
        self.assertGreater(drifts[0], 0.0)
        # s^2 grows by dt^2 |v|^2 per step, so the drift is dt times a
        # path integral that itself moves by O(dt) between the two runs
        slack = DRIFT_ORDER_SLACK
        self.assertGreaterEqual(drifts[0] / drifts[1], 2.0 * (1.0 - slack))

    def test_ok_mixed_centroid(self):
        print("[TEST] (OK) quad4-5b1d centroid at dt = 1e-3")
        traj = run(resolve_scenario("quad4-5b1d"), dt=1e-3,
                   record_interval=100)
        self.assertEqual(traj.reason, TerminationReason.CONVERGED)
        report = simulation.invariant_report(traj)
        self.assertLess(report.relative_centroid_drift, 1e-6)
        self.assertLess(abs(report.scale_rate), 1e-3)
        self.assertLess(report.residual_norm, 1e-3)

    def test_ok_mixed_rank_bound(self):
        print("[TEST] (OK) quad4 mixed variants are not rigid at the target")
        for name, null_dimension in MIXED_QUAD_NULL_DIMENSIONS.items():
            scenario = resolve_scenario(name)
            graph = scenario.graph
            state = common.framework(scenario.target_positions)
            report = rigidity.rigidity_report(state, graph)
            # each bearing block has rank 2, each distance row rank 1
            self.assertEqual(report.rank, 2 * graph.m_b + graph.m_d)
            self.assertEqual(report.null_dimension, null_dimension)
            self.assertEqual(report.trivial_dimension, 6)
            self.assertFalse(report.infinitesimally_rigid)

    def test_ok_mixed_variants(self):
        print("[TEST] (OK) quad4 mixed variants meet their constraints "
              "away from the target shape")
        for name in MIXED_QUAD_NULL_DIMENSIONS:
            scenario = resolve_scenario(name)
            traj = run(scenario, record_interval=100)
            self.assertEqual(traj.reason, TerminationReason.CONVERGED)
            self.assertLess(traj.last.phi, 1e-6)
            self.assertLess(traj.last.bearing_error, 1e-3)
            self.assertLess(traj.last.distance_error, 1e-3)
            lengths = rigidity.edge_lengths(traj.last.state,
                                            scenario.graph.distance_edges)
            self.assertLess(np.max(np.abs(
                lengths - scenario.target.desired_distances)), 1e-3)
            self.assertGreater(simulation.shape_error(
                traj.last.state, scenario.target_positions), 1e-3)

if __name__ == "__main__":
    unittest.main()
