import math

import numpy as np
from django.test import SimpleTestCase

from flocking.exceptions import CoincidentAgentsError, ConfigError
from flocking.services.geometry import AgentState, SwarmParams, VisualSignal, pair_geometry
from flocking.services.sensing import (
    NoiseBoundInput, NoiseParams, noise_bound, optic_flow, sense, stream_rng, visibility,
)
from flocking.tests.helpers import random_swarm


class TestOpticFlow(SimpleTestCase):
    """Test the optic-flow relation"""

    def test_stationary_neighbour_due_left(self):
        """Test a translating viewer passing a stationary neighbour at unit distance"""
        si = AgentState(x=0.0, y=0.0, v=1.0, theta=0.0)
        sj = AgentState(x=0.0, y=1.0, v=0.0, theta=0.0)
        self.assertAlmostEqual(optic_flow(si, sj, pair_geometry(si, sj)), 1.0)

    def test_pure_rotation(self):
        si = AgentState(x=0.0, y=0.0, v=0.0, theta=0.0, omega=1.0)
        sj = AgentState(x=3.0, y=-2.0, v=0.0, theta=1.0)
        self.assertAlmostEqual(optic_flow(si, sj, pair_geometry(si, sj)), -1.0)

    def test_equals_bearing_rate(self):
        """Test Qdot is the rate of change of the neighbour's bearing in the viewer's image"""
        rng = np.random.default_rng(10)
        for _ in range(500):
            si, sj = random_swarm(rng, 2)
            dx, dy = sj.x - si.x, sj.y - si.y
            (vix, viy), (vjx, vjy) = si.velocity, sj.velocity
            rate = (dx * (vjy - viy) - dy * (vjx - vix)) / (dx * dx + dy * dy) - si.omega
            q_dot = optic_flow(si, sj, pair_geometry(si, sj))
            self.assertAlmostEqual(q_dot, rate, delta=1e-10 * max(1.0, abs(rate)))

    def test_sin_identity(self):
        """Test v_j sin(sightline) - v_i sin(gamma_ij) = -r (Qdot + omega_i)"""
        rng = np.random.default_rng(11)
        for _ in range(1000):
            si, sj = random_swarm(rng, 2)
            geom = pair_geometry(si, sj)
            q_dot = optic_flow(si, sj, geom)
            lhs = sj.v * math.sin(geom.sightline_ji) - si.v * math.sin(geom.gamma_ij)
            rhs = -geom.r * (q_dot + si.omega)
            self.assertAlmostEqual(lhs, rhs, delta=1e-10 * max(1.0, abs(rhs)))

    def test_cos_identity(self):
        """Test v_j cos(sightline) - v_i cos(gamma_ij) = r_dot"""
        rng = np.random.default_rng(12)
        for _ in range(1000):
            si, sj = random_swarm(rng, 2)
            geom = pair_geometry(si, sj)
            lhs = sj.v * math.cos(geom.sightline_ji) - si.v * math.cos(geom.gamma_ij)
            self.assertAlmostEqual(lhs, geom.r_dot, delta=1e-10 * max(1.0, abs(geom.r_dot)))


class TestVisibility(SimpleTestCase):
    """Test the visibility limit and blind sectors"""

    def test_below_visibility_limit(self):
        params = SwarmParams(alpha_min=0.01)
        self.assertFalse(visibility(0.009, 1.0, params))
        self.assertTrue(visibility(0.01, 1.0, params))

    def test_blind_sectors(self):
        params = SwarmParams(alpha_min=0.0, Gamma=0.2)
        self.assertFalse(visibility(0.5, 0.1, params))
        self.assertFalse(visibility(0.5, -0.1, params))
        self.assertFalse(visibility(0.5, math.pi - 0.1, params))
        self.assertTrue(visibility(0.5, math.pi / 2, params))

    def test_no_sectors_when_gamma_zero(self):
        params = SwarmParams(alpha_min=0.0, Gamma=0.0)
        self.assertTrue(visibility(0.5, 0.0, params))
        self.assertTrue(visibility(0.5, -math.pi, params))


class TestSense(SimpleTestCase):
    """Test visual signal synthesis"""

    def setUp(self):
        self.params = SwarmParams()
        self.swarm = random_swarm(np.random.default_rng(20), 5)

    def test_one_signal_per_neighbour_in_order(self):
        signals = sense(self.swarm, 2, self.params, NoiseParams())
        self.assertEqual(len(signals), 4)
        for signal, j in zip(signals, [0, 1, 3, 4]):
            geom = pair_geometry(self.swarm[2], self.swarm[j])
            self.assertEqual(signal.gamma, geom.gamma_ij)
            self.assertAlmostEqual(1.0 / math.tan(signal.alpha), geom.r, delta=1e-9 * geom.r)

    def test_single_agent_has_no_signals(self):
        self.assertEqual(sense(self.swarm[:1], 0, self.params, NoiseParams()), [])

    def test_noise_requires_stream(self):
        with self.assertRaises(ValueError):
            sense(self.swarm, 0, self.params, NoiseParams(sigma_q=0.1))

    def test_noise_is_reproducible(self):
        noise = NoiseParams(sigma_q=0.1, sigma_a=0.01, seed=7)
        first = sense(self.swarm, 1, self.params, noise, rng=stream_rng(7, 3, 1))
        second = sense(self.swarm, 1, self.params, noise, rng=stream_rng(7, 3, 1))
        other = sense(self.swarm, 1, self.params, noise, rng=stream_rng(7, 3, 2))
        self.assertEqual(first, second)
        self.assertNotEqual(first, other)

    def test_noise_leaves_alpha_dot_alone(self):
        clean = sense(self.swarm, 0, self.params, NoiseParams())
        noisy = sense(self.swarm, 0, self.params, NoiseParams(sigma_q=0.1, sigma_a=0.01),
                      rng=stream_rng(0, 0, 0))
        for c, n in zip(clean, noisy):
            self.assertEqual(c.alpha_dot, n.alpha_dot)
            self.assertNotEqual(c.q_dot, n.q_dot)

    def test_noisy_alpha_is_clamped(self):
        noisy = sense(self.swarm, 0, self.params, NoiseParams(sigma_a=100.0),
                      rng=stream_rng(0, 0, 0))
        for signal in noisy:
            self.assertGreater(signal.alpha, 0.0)
            self.assertLess(signal.alpha, math.pi / 2)

    def test_differenced_alpha_rate(self):
        noise = NoiseParams(alpha_rate='difference')
        previous = [
            VisualSignal(gamma=s.gamma, alpha=s.alpha - 0.001, alpha_dot=0.0, q_dot=0.0)
            for s in sense(self.swarm, 0, self.params, NoiseParams())
        ]
        signals = sense(self.swarm, 0, self.params, noise, previous=previous, dt=0.01)
        for signal in signals:
            self.assertAlmostEqual(signal.alpha_dot, 0.1, places=9)

    def test_coincident_neighbour_names_pair(self):
        swarm = [AgentState(0.0, 0.0, 1.0, 0.0), AgentState(5.0, 0.0, 1.0, 0.0),
                 AgentState(0.0, 0.0, 1.0, 1.0)]
        with self.assertRaises(CoincidentAgentsError) as ctx:
            sense(swarm, 0, self.params, NoiseParams())
        self.assertEqual((ctx.exception.i, ctx.exception.j), (0, 2))


class TestNoiseBound(SimpleTestCase):
    """Test the optic-flow noise bound"""

    def test_reference_value(self):
        self.assertAlmostEqual(noise_bound(NoiseBoundInput(1.0, math.pi / 6, 10.0)), 0.05, places=12)

    def test_formatted_reference_value(self):
        q_bar = noise_bound(NoiseBoundInput(1.0, 0.523598775, 10.0))
        self.assertEqual(f"{q_bar:#.6g}", '0.0500000')

    def test_no_occlusion_gives_zero(self):
        self.assertEqual(noise_bound(NoiseBoundInput(1.0, 0.0, 10.0)), 0.0)

    def test_monotonicity(self):
        """Test the bound grows with n_bar and Gamma and shrinks with rho"""
        n_bars = np.linspace(0.1, 2.0, 5)
        gammas = np.linspace(0.05, math.pi / 2, 5)
        rhos = np.linspace(0.5, 20.0, 5)
        grid = np.array([[[noise_bound(NoiseBoundInput(n, g, r)) for r in rhos]
                          for g in gammas] for n in n_bars])
        self.assertTrue(np.all(np.diff(grid, axis=0) > 0))
        self.assertTrue(np.all(np.diff(grid, axis=1) > 0))
        self.assertTrue(np.all(np.diff(grid, axis=2) < 0))

    def test_invalid_inputs(self):
        with self.assertRaisesMessage(ConfigError, 'rho'):
            noise_bound(NoiseBoundInput(1.0, 0.5, 0.0))
        with self.assertRaisesMessage(ConfigError, 'Gamma'):
            noise_bound(NoiseBoundInput(1.0, 2.0, 1.0))
        with self.assertRaisesMessage(ConfigError, 'n_bar'):
            noise_bound(NoiseBoundInput(-1.0, 0.5, 1.0))
