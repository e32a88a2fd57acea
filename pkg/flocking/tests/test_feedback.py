import math
import time

import numpy as np
from django.test import SimpleTestCase

from flocking.exceptions import CoincidentAgentsError, GeometryError
from flocking.services.feedback import (
    control_from_rates, cs_acceleration, cs_desired_rates, guard_speed,
    rates_from_vector, relative_velocity_estimate, sign_select, size_mismatch_oracle,
    yfm_desired_rates, yfm_heading_control, yfm_speed_control,
)
from flocking.services.geometry import AgentState, SwarmParams, VisualSignal, pair_geometry, wrap_angle
from flocking.services.sensing import NoiseParams, sense
from flocking.tests.helpers import random_swarm, relative_error

EXACT = SwarmParams(alpha_min=0.0, Gamma=0.0)


class TestCuckerSmale(SimpleTestCase):
    """Test the perfect-information baseline"""

    def test_matching_velocities_give_zero(self):
        swarm = [AgentState(0.0, 0.0, 1.0, 0.3), AgentState(3.0, 4.0, 1.0, 0.3)]
        ax, ay = cs_acceleration(swarm, 0, 1.0, 0.4)
        self.assertAlmostEqual(ax, 0.0)
        self.assertAlmostEqual(ay, 0.0)

    def test_two_agent_kernel(self):
        """Test H (v_j - v_i) / (sigma^2 + r^2)^beta for one pair"""
        swarm = [AgentState(0.0, 0.0, 0.0, 0.0), AgentState(3.0, 4.0, 2.0, 0.0)]
        ax, ay = cs_acceleration(swarm, 0, 2.0, 0.5, sigma=1.0)
        self.assertAlmostEqual(ax, 2.0 * 2.0 / math.sqrt(26.0))
        self.assertAlmostEqual(ay, 0.0)

    def test_coincident_agents_raise(self):
        swarm = [AgentState(1.0, 1.0, 1.0, 0.0), AgentState(1.0, 1.0, 2.0, 0.0)]
        with self.assertRaises(CoincidentAgentsError):
            cs_acceleration(swarm, 0, 1.0, 0.4)


class TestRatesFromVector(SimpleTestCase):
    """Test conversion of a velocity rate into speed and heading rates"""

    def test_north_heading_pushed_east(self):
        rates = rates_from_vector(1.0, math.pi / 2, (1.0, 0.0))
        self.assertAlmostEqual(rates.v_dot_star, 0.0, places=12)
        self.assertAlmostEqual(rates.theta_dot_star, -1.0, places=12)

    def test_along_heading(self):
        rates = rates_from_vector(2.0, 0.0, (3.0, 0.0))
        self.assertAlmostEqual(rates.v_dot_star, 3.0)
        self.assertAlmostEqual(rates.theta_dot_star, 0.0)

    def test_speed_below_floor_raises(self):
        with self.assertRaises(GeometryError):
            rates_from_vector(1e-9, 0.0, (1.0, 0.0), v_floor=1e-6)

    def test_guard_keeps_sign(self):
        self.assertEqual(guard_speed(-1e-9, 1e-6), -1e-6)
        self.assertEqual(guard_speed(0.5, 1e-6), 0.5)


class TestSignSelect(SimpleTestCase):

    def test_forward_half_is_minus(self):
        self.assertEqual(sign_select(0.0, 0.0), -1)
        self.assertEqual(sign_select(0.3, -0.9), -1)

    def test_boundary_belongs_to_minus(self):
        self.assertEqual(sign_select(0.0, math.pi / 2), -1)
        self.assertEqual(sign_select(0.0, -math.pi / 2), -1)

    def test_rear_half_is_plus(self):
        self.assertEqual(sign_select(0.0, math.pi / 2 + 0.1), 1)
        self.assertEqual(sign_select(math.pi, 0.0), 1)


class TestRelativeVelocityReconstruction(SimpleTestCase):
    """Test the per-neighbour relative velocity rebuilt from visual signals"""

    def test_recovers_true_relative_velocity_on_both_branches(self):
        rng = np.random.default_rng(30)
        seen = set()
        for _ in range(1000):
            si, sj = random_swarm(rng, 2)
            signal = sense([si, sj], 0, EXACT, NoiseParams())[0]
            seen.add(sign_select(si.theta, signal.gamma))
            dvx, dvy = relative_velocity_estimate(signal, si.theta, si.omega, EXACT.L)
            (vix, viy), (vjx, vjy) = si.velocity, sj.velocity
            self.assertLess(relative_error(dvx, vjx - vix), 1e-9)
            self.assertLess(relative_error(dvy, vjy - viy), 1e-9)
        self.assertEqual(seen, {-1, 1})

    def test_cos_component_in_selected_frame(self):
        """Test s (1 + cot^2) L alpha_dot = v_j cos(phi - theta_j) - v_i cos(phi - theta_i)"""
        rng = np.random.default_rng(31)
        for _ in range(1000):
            si, sj = random_swarm(rng, 2)
            signal = sense([si, sj], 0, EXACT, NoiseParams())[0]
            s = sign_select(si.theta, signal.gamma)
            phi = wrap_angle(si.theta + signal.gamma)
            if s > 0:
                phi = wrap_angle(phi + math.pi)
            cot = 1.0 / math.tan(signal.alpha)
            lhs = s * (1.0 + cot * cot) * EXACT.L * signal.alpha_dot
            rhs = sj.v * math.cos(phi - sj.theta) - si.v * math.cos(phi - si.theta)
            self.assertAlmostEqual(lhs, rhs, delta=1e-10 * max(1.0, abs(rhs)))

    def test_wrong_length_scales_estimate(self):
        rng = np.random.default_rng(32)
        si, sj = random_swarm(rng, 2)
        signal = sense([si, sj], 0, EXACT, NoiseParams())[0]
        true = relative_velocity_estimate(signal, si.theta, si.omega, 1.0)
        scaled = relative_velocity_estimate(signal, si.theta, si.omega, 3.0)
        self.assertAlmostEqual(scaled[0], 3.0 * true[0], places=9)
        self.assertAlmostEqual(scaled[1], 3.0 * true[1], places=9)


class TestOracleEquivalence(SimpleTestCase):
    """Test the visual laws against the Cucker-Smale baseline"""

    def test_matches_baseline_on_random_configurations(self):
        rng = np.random.default_rng(40)
        started = time.perf_counter()
        for _ in range(1000):
            swarm = random_swarm(rng, int(rng.integers(2, 7)))
            for i, si in enumerate(swarm):
                signals = sense(swarm, i, EXACT, NoiseParams())
                visual = yfm_desired_rates(signals, si.v, si.omega, si.theta, EXACT)
                oracle = cs_desired_rates(swarm, i, EXACT)
                self.assertLess(relative_error(visual.v_dot_star, oracle.v_dot_star), 1e-9)
                self.assertLess(relative_error(visual.theta_dot_star, oracle.theta_dot_star), 1e-9)
                self.assertAlmostEqual(
                    yfm_speed_control(signals, si.omega, si.theta, EXACT), visual.v_dot_star, places=12
                )
        self.assertLess(time.perf_counter() - started, 5.0)

    def test_independent_of_body_length(self):
        rng = np.random.default_rng(41)
        for _ in range(200):
            swarm = random_swarm(rng, 4)
            reference = None
            for L in [0.08, 1.0, 10.0]:
                params = SwarmParams(L=L, alpha_min=0.0)
                si = swarm[0]
                rates = yfm_desired_rates(sense(swarm, 0, params, NoiseParams()),
                                          si.v, si.omega, si.theta, params)
                if reference is None:
                    reference = rates
                    continue
                self.assertLess(relative_error(rates.v_dot_star, reference.v_dot_star), 1e-9)
                self.assertLess(relative_error(rates.theta_dot_star, reference.theta_dot_star), 1e-9)

    def test_size_mismatch_matches_rescaled_baseline(self):
        """Test L = 1, L_e = 3 against the baseline with the rescaled coupling and offset"""
        params = SwarmParams(L=1.0, L_e=3.0, alpha_min=0.0)
        H_prime, sigma = size_mismatch_oracle(params.H, params.beta, params.L, params.L_e)
        rng = np.random.default_rng(42)
        for _ in range(1000):
            swarm = random_swarm(rng, int(rng.integers(2, 7)))
            i = int(rng.integers(0, len(swarm)))
            si = swarm[i]
            visual = yfm_desired_rates(sense(swarm, i, params, NoiseParams()),
                                       si.v, si.omega, si.theta, params)
            a = cs_acceleration(swarm, i, H_prime, params.beta, sigma)
            oracle = rates_from_vector(si.v, si.theta, a)
            self.assertLess(relative_error(visual.v_dot_star, oracle.v_dot_star), 1e-9)
            self.assertLess(relative_error(visual.theta_dot_star, oracle.theta_dot_star), 1e-9)

    def test_size_mismatch_constants(self):
        H_prime, sigma = size_mismatch_oracle(1.0, 0.4, 1.0, 3.0)
        self.assertAlmostEqual(H_prime, 3.0 ** 0.2)
        self.assertAlmostEqual(sigma, 1.0 / 3.0)
        self.assertAlmostEqual(sigma ** (-2 * 0.4) * H_prime, 3.0)


class TestVisualLaws(SimpleTestCase):
    """Test the speed and heading laws"""

    def setUp(self):
        self.params = SwarmParams()

    def test_consensus_gives_zero_rates(self):
        swarm = [AgentState(x, y, 1.2, 0.7) for x, y in [(0, 0), (3, 1), (-2, 4), (5, 5)]]
        for i, si in enumerate(swarm):
            rates = yfm_desired_rates(sense(swarm, i, self.params, NoiseParams()),
                                      si.v, si.omega, si.theta, self.params)
            self.assertAlmostEqual(rates.v_dot_star, 0.0, places=12)
            self.assertAlmostEqual(rates.theta_dot_star, 0.0, places=12)

    def test_invisible_neighbours_contribute_nothing(self):
        signals = [VisualSignal(gamma=0.5, alpha=0.3, alpha_dot=0.2, q_dot=1.0, visible=False)]
        rates = yfm_desired_rates(signals, 1.0, 0.0, 0.0, self.params)
        self.assertEqual(rates.v_dot_star, 0.0)
        self.assertEqual(rates.theta_dot_star, 0.0)

    def test_heading_law_drives_omega_to_target(self):
        swarm = random_swarm(np.random.default_rng(50), 3)
        si = swarm[0]
        signals = sense(swarm, 0, self.params, NoiseParams())
        rates = yfm_desired_rates(signals, si.v, si.omega, si.theta, self.params)
        u_omega = yfm_heading_control(signals, si.v, si.omega, si.theta, self.params)
        self.assertAlmostEqual(u_omega, -self.params.k * (si.omega - rates.theta_dot_star))

        control = control_from_rates(rates, si.omega, self.params.k)
        self.assertAlmostEqual(control.u_omega, u_omega)
        self.assertEqual(control.u_v, rates.v_dot_star)

    def test_faster_neighbour_ahead_speeds_agent_up(self):
        swarm = [AgentState(0.0, 0.0, 1.0, 0.0), AgentState(3.0, 0.0, 2.0, 0.0)]
        rates = yfm_desired_rates(sense(swarm, 0, self.params, NoiseParams()),
                                  1.0, 0.0, 0.0, self.params)
        self.assertGreater(rates.v_dot_star, 0.0)
        self.assertAlmostEqual(rates.theta_dot_star, 0.0, places=12)
        self.assertAlmostEqual(pair_geometry(*swarm).r_dot, 1.0)
