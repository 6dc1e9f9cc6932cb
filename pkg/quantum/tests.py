import json
import math
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from .amplitudes import (
    Order,
    amplitude_factored,
    amplitude_heisenberg,
    amplitude_ordered,
    order_gap,
    three_form_gap,
)
from .measurement import (
    InvalidMeasurementError,
    MeasurementSetting,
    chsh_value,
    correlator,
    marginal_distribution,
    random_measurement,
    signaling_gap,
    total_variation,
)
from .operators import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DimensionMismatchError,
    basis_state,
    commutator_norm,
    embed_a,
    embed_b,
    evolve,
    random_hermitian,
    random_state,
    singlet,
    time_evolution_operator,
)
from .scenario import InteractionPresentError, QuantumScenario, ScenarioError, random_scenario

DIMS = [(2, 2), (2, 3), (3, 3), (4, 4)]

ZERO_2 = np.zeros((2, 2), dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)


def sigma_xx_scenario(psi, t_a, t_b, t_in=0.0, t_out=1.0, coupling=0.5):
    return QuantumScenario(
        dim_a=2, dim_b=2,
        h_a=ZERO_2, h_b=ZERO_2,
        h_int=coupling * np.kron(SIGMA_X, SIGMA_X),
        o_a=SIGMA_Z, o_b=SIGMA_Z,
        psi_in=psi, psi_out=psi,
        t_in=t_in, t_a=t_a, t_b=t_b, t_out=t_out,
        name='sigma_x sigma_x',
    )


class OperatorTests(SimpleTestCase):
    def test_evolution_is_unitary(self):
        rng = np.random.default_rng(1)
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        u = time_evolution_operator((h + h.conj().T) / 2, 0.7)
        assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-12)

    def test_non_hermitian_generator(self):
        with self.assertRaises(ValueError):
            time_evolution_operator(np.array([[0, 1], [0, 0]]), 1.0)

    def test_zero_time_leaves_the_state(self):
        psi = random_state(np.random.default_rng(5), 3)
        h = random_hermitian(np.random.default_rng(6), 3)
        np.testing.assert_array_equal(evolve(psi, h, 0.0), psi)

    def test_pauli_rotations(self):
        zero = basis_state(2, 0)
        assert_allclose(evolve(zero, SIGMA_Z, np.pi), -zero, atol=1e-12)
        assert_allclose(evolve(zero, SIGMA_X, np.pi / 2), -1j * basis_state(2, 1), atol=1e-12)

    def test_evolution_preserves_the_norm(self):
        rng = np.random.default_rng(11)
        for i in range(100):
            dim = DIMS[i % len(DIMS)][0] * DIMS[i % len(DIMS)][1]
            psi = random_state(rng, dim)
            moved = evolve(psi, random_hermitian(rng, dim), rng.uniform(-5, 5))
            self.assertAlmostEqual(float(np.linalg.norm(moved)), 1.0, delta=1e-12)

    def test_evolve_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            evolve(basis_state(3, 0), SIGMA_Z, 1.0)

    def test_commutators(self):
        self.assertEqual(commutator_norm(SIGMA_X, SIGMA_Z), 2.0)
        assert_allclose(SIGMA_X @ SIGMA_Z - SIGMA_Z @ SIGMA_X, -2j * SIGMA_Y)
        self.assertEqual(commutator_norm(SIGMA_Z, SIGMA_Z), 0.0)

    def test_operators_on_different_parties_commute(self):
        rng = np.random.default_rng(12)
        for dim_a, dim_b in DIMS:
            o_a = embed_a(random_hermitian(rng, dim_a), dim_b)
            o_b = embed_b(random_hermitian(rng, dim_b), dim_a)
            h_a = embed_a(random_hermitian(rng, dim_a), dim_b)
            h_b = embed_b(random_hermitian(rng, dim_b), dim_a)
            with self.subTest(dims=(dim_a, dim_b)):
                self.assertLess(commutator_norm(o_a, o_b), 1e-12)
                self.assertLess(commutator_norm(h_a, h_b), 1e-12)

    def test_commutator_shape_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            commutator_norm(SIGMA_X, np.eye(3))


class ScenarioTests(SimpleTestCase):
    def test_unnormalized_state(self):
        with self.assertRaises(ScenarioError):
            sigma_xx_scenario(np.array([1, 1, 0, 0], dtype=complex), 0.3, 0.7)

    def test_time_order(self):
        with self.assertRaises(ScenarioError):
            sigma_xx_scenario(basis_state(4, 0), 0.3, 1.7)

    def test_non_hermitian_generator(self):
        with self.assertRaises(ScenarioError):
            QuantumScenario(
                dim_a=2, dim_b=2,
                h_a=np.array([[0, 1], [0, 0]], dtype=complex), h_b=ZERO_2,
                o_a=SIGMA_Z, o_b=SIGMA_Z,
                psi_in=basis_state(4, 0), psi_out=basis_state(4, 0),
            )

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            QuantumScenario(
                dim_a=2, dim_b=3,
                h_a=ZERO_2, h_b=ZERO_2,
                o_a=SIGMA_Z, o_b=SIGMA_Z,
                psi_in=basis_state(6, 0), psi_out=basis_state(6, 0),
            )

    def test_assumption_gaps(self):
        rng = np.random.default_rng(2)
        gaps = random_scenario(rng, 2, 3).assumption_gaps()
        self.assertTrue(all(g < 1e-12 for g in gaps.values()))
        coupled = sigma_xx_scenario(basis_state(4, 0), 0.3, 0.7).assumption_gaps()
        self.assertGreater(coupled['H_A,O_B'], 0.1)


class OrderIndependenceTests(SimpleTestCase):
    def test_random_commuting_scenarios(self):
        rng = np.random.default_rng(2024)
        for i in range(200):
            dim_a, dim_b = DIMS[i % len(DIMS)]
            s = random_scenario(rng, dim_a, dim_b)
            with self.subTest(trial=i, dims=(dim_a, dim_b)):
                self.assertLess(order_gap(s), 1e-10)
                self.assertLess(three_form_gap(s), 1e-10)

    def test_heisenberg_form(self):
        s = random_scenario(np.random.default_rng(8), 3, 2)
        for order in Order:
            self.assertAlmostEqual(
                abs(amplitude_heisenberg(s, order).value - amplitude_ordered(s, order).value), 0.0, delta=1e-12
            )

    def test_factored_forms_refuse_interactions(self):
        s = sigma_xx_scenario(basis_state(4, 0), 0.3, 0.7)
        with self.assertRaises(InteractionPresentError):
            amplitude_factored(s, Order.A_FIRST)
        with self.assertRaises(InteractionPresentError):
            amplitude_heisenberg(s, Order.B_FIRST)


class InteractionCounterexampleTests(SimpleTestCase):
    def setUp(self):
        self.scenario = sigma_xx_scenario(basis_state(4, 0), 0.3, 0.7)

    def test_amplitudes(self):
        self.assertAlmostEqual(amplitude_ordered(self.scenario, Order.A_FIRST).value, math.cos(0.1), delta=1e-12)
        self.assertAlmostEqual(amplitude_ordered(self.scenario, Order.B_FIRST).value, math.cos(0.9), delta=1e-12)

    def test_order_gap(self):
        gap = order_gap(self.scenario)
        self.assertAlmostEqual(gap, math.cos(0.1) - math.cos(0.9), delta=1e-12)
        self.assertGreater(gap, 0.01)

    def test_marginal_signaling(self):
        gap = signaling_gap(self.scenario, MeasurementSetting.pauli('z'), MeasurementSetting.computational(2))
        self.assertAlmostEqual(gap, 0.5 * math.sin(0.3) * math.sin(0.4), delta=1e-12)
        self.assertGreater(gap, 1e-3)

    def test_product_state_signals_through_sigma_y(self):
        s = sigma_xx_scenario(np.kron(PLUS, basis_state(2, 0)), t_a=0.0, t_b=1.0)
        gap = signaling_gap(s, MeasurementSetting.pauli('z'), MeasurementSetting.pauli('y'))
        self.assertAlmostEqual(gap, math.sin(1.0) / 2, delta=1e-12)

    def test_singlet_cannot_signal_through_sigma_xx(self):
        s = sigma_xx_scenario(singlet(), 0.3, 0.7)
        gap = signaling_gap(s, MeasurementSetting.pauli('z'), MeasurementSetting.computational(2))
        self.assertLess(gap, 1e-12)


class NoSignalingTests(SimpleTestCase):
    def test_random_commuting_scenarios(self):
        rng = np.random.default_rng(99)
        for i in range(100):
            dim_a, dim_b = DIMS[i % len(DIMS)]
            s = random_scenario(rng, dim_a, dim_b)
            remote = random_measurement(rng, dim_a)
            local = random_measurement(rng, dim_b)
            with self.subTest(trial=i):
                tv = total_variation(
                    marginal_distribution(s, remote, local),
                    marginal_distribution(s, None, local),
                )
                self.assertLess(tv, 1e-10)

    def test_marginal_is_a_distribution(self):
        rng = np.random.default_rng(4)
        s = random_scenario(rng, 3, 2)
        p = marginal_distribution(s, random_measurement(rng, 3), MeasurementSetting.computational(2))
        self.assertAlmostEqual(float(np.sum(p)), 1.0, delta=1e-12)

    def test_wrong_dimension(self):
        s = random_scenario(np.random.default_rng(4), 3, 2)
        with self.assertRaises(InvalidMeasurementError):
            marginal_distribution(s, MeasurementSetting.computational(2), MeasurementSetting.computational(2))


class ChshTests(SimpleTestCase):
    def test_singlet_correlator(self):
        for a, b in ((0.0, 0.0), (0.3, 1.1), (np.pi / 2, -np.pi / 4)):
            self.assertAlmostEqual(correlator(singlet(), a, b), -math.cos(a - b), delta=1e-12)

    def test_tsirelson_bound(self):
        s = chsh_value(singlet(), (0.0, np.pi / 2), (np.pi / 4, -np.pi / 4))
        self.assertAlmostEqual(abs(s), 2 * math.sqrt(2), delta=1e-9)

    def test_symmetric_b_angles_cancel(self):
        s = chsh_value(singlet(), (0.0, np.pi / 2), (np.pi / 4, 3 * np.pi / 4))
        self.assertAlmostEqual(s, 0.0, delta=1e-12)

    def test_product_state_respects_classical_bound(self):
        s = chsh_value(np.kron(basis_state(2, 0), basis_state(2, 0)), (0.0, np.pi / 2), (np.pi / 4, -np.pi / 4))
        self.assertLessEqual(abs(s), 2.0 + 1e-12)

    def test_invalid_projectors(self):
        with self.assertRaises(InvalidMeasurementError):
            MeasurementSetting((np.eye(2), np.eye(2)))


class QuantumCommandTests(SimpleTestCase):
    def call(self, *args, **options):
        out, err = StringIO(), StringIO()
        call_command('quantum', *args, stdout=out, stderr=err, **options)
        return json.loads(out.getvalue())

    def test_commuting_amplitude(self):
        records = self.call('amplitude', 'commuting_2x2.json')
        self.assertTrue(all(r['passed'] for r in records))
        self.assertLess(records[0]['gap'], 1e-10)

    def test_random_trials(self):
        records = self.call('nosignal', 'commuting_2x2.json', trials='20', seed='5')
        self.assertEqual([r['operation'] for r in records], ['nosignal', 'random_nosignal'])
        self.assertTrue(all(r['seed'] == '5' for r in records))

    def test_singlet_chsh(self):
        records = self.call('chsh', 'singlet_chsh.json')
        self.assertAlmostEqual(records[0]['outputs']['abs_S'], 2.828427, delta=1e-6)

    def test_interacting_amplitude_fails(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('amplitude', 'interacting_sigmaxx.json')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_expect_fail_inverts(self):
        records = self.call('amplitude', 'interacting_sigmaxx.json', expect_fail=True)
        self.assertGreater(records[0]['gap'], 0.01)
        with self.assertRaises(CommandError) as ctx:
            self.call('amplitude', 'commuting_2x2.json', expect_fail=True)
        self.assertEqual(ctx.exception.returncode, 1)

    def test_counterexample_passes(self):
        records = self.call('counterexample', 'interacting_sigmaxx.json')
        gaps = {r['operation']: r['gap'] for r in records}
        self.assertAlmostEqual(gaps['counterexample_amplitude'], math.cos(0.1) - math.cos(0.9), delta=1e-12)
        self.assertAlmostEqual(gaps['counterexample_signal'], 0.5 * math.sin(0.3) * math.sin(0.4), delta=1e-12)

    def test_unknown_subcommand(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('entangle', 'commuting_2x2.json')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_missing_scenario(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('amplitude', 'no_such_scenario.json')
        self.assertEqual(ctx.exception.returncode, 2)
