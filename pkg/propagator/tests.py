import cmath
import json
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from kinematics.events import Event4, SyncParam
from kinematics.transforms import resynchronize
from .integrands import (
    PropagatorPoint,
    integrand_einstein,
    integrand_resynced,
    middle_form_check,
    propagator_quadrature_1p1,
    propagator_smooth_1p1,
    relative_gap,
    resynced_phase,
    spacelike_decay_ratio,
    substitution_gap,
)

EINSTEIN = SyncParam.einstein()


class IntegrandIdentityTests(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(1234)

    def draw(self):
        sync = SyncParam(tuple(self.rng.uniform(-3, 3, 3)), 'p')
        x_prime = Event4(*self.rng.uniform(-3, 3, 4), convention='p')
        kvec = (self.rng.uniform(-3, 3), self.rng.uniform(-3, 3, 3))
        m = float(self.rng.choice([0.0, 1.0]))
        return sync, x_prime, kvec, m

    def test_resynced_matches_einstein_at_base_point(self):
        worst = 0.0
        for _ in range(1000):
            sync, x_prime, kvec, m = self.draw()
            base = PropagatorPoint(resynchronize(x_prime, sync, EINSTEIN), m, 1e-3)
            worst = max(worst, relative_gap(
                integrand_resynced(kvec, x_prime, sync, m, 1e-3),
                integrand_einstein(kvec, base),
            ))
        self.assertLess(worst, 1e-14)

    def test_middle_form_substitution(self):
        worst = 0.0
        for _ in range(1000):
            sync, x_prime, kvec, m = self.draw()
            worst = max(worst, substitution_gap(kvec, x_prime, sync, m, 1e-3))
        self.assertLess(worst, 1e-14)

    def test_middle_forms_agree_in_value(self):
        sync = SyncParam((0.5, 0.25, 0.0), 'p')
        x_prime = Event4(1.0, 2.0, -1.0, 0.5, convention='p')
        second, third = middle_form_check((1.5, (0.5, -1.0, 2.0)), x_prime, sync, 1.0, 1e-3)
        self.assertLess(relative_gap(second, third), 1e-14)

    def test_einstein_convention_gives_zero_gap(self):
        x = Event4(0.7, -1.2, 0.4, 2.0)
        kvec = (1.1, (0.3, -0.2, 2.5))
        self.assertEqual(
            integrand_resynced(kvec, x, EINSTEIN, 1.0, 1e-3),
            integrand_einstein(kvec, PropagatorPoint(x, 1.0, 1e-3)),
        )

    def test_phase_is_the_base_frame_phase(self):
        sync = SyncParam.along_x(0.5, 'p')
        x_prime = Event4(2.0, 2.0, convention='p')
        # base time 2 - 0.5 * 2 = 1
        self.assertEqual(resynced_phase((3.0, (1.0,)), x_prime, sync), 3.0 * 1.0 - 1.0 * 2.0)

    def test_einstein_values(self):
        at_origin = integrand_einstein((0.0, (0.0,)), PropagatorPoint(Event4(0.0, 0.0), 1.0, 0.01))
        self.assertAlmostEqual(at_origin, 1 / complex(-1.0, 0.01), delta=1e-15)
        half_turn = integrand_einstein((1.0, (0.0,)), PropagatorPoint(Event4(np.pi, 0.0), 0.0, 0.01))
        self.assertAlmostEqual(half_turn, cmath.exp(-1j * np.pi) / complex(1.0, 0.01), delta=1e-15)

    def test_photon_convention_point(self):
        photon = SyncParam.along_x(-0.4, 'photon')
        x_prime = Event4(0.6, 1.0, convention='photon')
        kvec = (1.0, (0.5, 0.0, 0.0))
        resynced = integrand_resynced(kvec, x_prime, photon, 1.0, 1e-3)
        einstein = integrand_einstein(kvec, PropagatorPoint(Event4(1.0, 1.0), 1.0, 1e-3))
        self.assertLess(relative_gap(resynced, einstein), 1e-15)

    def test_invalid_parameters(self):
        x = Event4(0.0, 0.0)
        with self.assertRaises(ValueError):
            PropagatorPoint(x, 1.0, 0.0)
        with self.assertRaises(ValueError):
            PropagatorPoint(x, -1.0, 1e-3)
        with self.assertRaises(ValueError):
            integrand_resynced((1.0, (0.0,)), x, EINSTEIN, 1.0, -1e-3)


class QuadratureTests(SimpleTestCase):
    def test_conventions_agree(self):
        einstein = propagator_quadrature_1p1(1.0, 0.5, 1.0, 0.05, 0.0)
        resynced = propagator_quadrature_1p1(1.0, 0.5, 1.0, 0.05, 0.7)
        self.assertLess(relative_gap(einstein, resynced), 1e-6)

    def test_parity(self):
        forward = propagator_quadrature_1p1(1.0, 0.5, 1.0, 0.05, 0.0)
        mirrored = propagator_quadrature_1p1(-1.0, -0.5, 1.0, 0.05, 0.0)
        self.assertLess(relative_gap(forward, mirrored), 1e-6)

    def test_grid_too_coarse(self):
        with self.assertRaises(ValueError):
            propagator_quadrature_1p1(1.0, 0.5, 1.0, 0.05, 0.0, n=32)

    def test_grid_sums_the_shared_integrand(self):
        t, x, m, eps, cutoff, n = 1.0, 0.5, 1.0, 0.05, 20.0, 64
        step = 2.0 * cutoff / n
        nodes = -cutoff + step * (np.arange(n) + 0.5)
        point = PropagatorPoint(Event4(t, x), m, eps)
        expected = sum(integrand_einstein((w, (k,)), point) for w in nodes for k in nodes) * step * step
        got = propagator_quadrature_1p1(t, x, m, eps, 0.0, cutoff, n)
        self.assertLess(relative_gap(got, expected), 1e-12)


class SmoothPropagatorTests(SimpleTestCase):
    def test_large_mass_spacelike_decay(self):
        self.assertLess(spacelike_decay_ratio(10.0, 0.05, 2.0, cutoff=20.0, n=512), 1e-4)

    def test_hard_cutoff_grid_hides_the_decay(self):
        ratio = spacelike_decay_ratio(10.0, 0.05, 2.0, cutoff=20.0, n=512, propagator=propagator_quadrature_1p1)
        self.assertGreater(ratio, 0.1)

    def test_conventions_agree(self):
        einstein = propagator_smooth_1p1(1.0, 0.5, 1.0, 0.05, 0.0)
        resynced = propagator_smooth_1p1(1.0, 0.5, 1.0, 0.05, 0.7)
        self.assertLess(relative_gap(einstein, resynced), 1e-12)

    def test_parity(self):
        forward = propagator_smooth_1p1(1.0, 0.5, 1.0, 0.05, 0.0)
        mirrored = propagator_smooth_1p1(-1.0, -0.5, 1.0, 0.05, 0.0)
        self.assertLess(relative_gap(forward, mirrored), 1e-12)

    def test_invalid_parameters(self):
        with self.assertRaises(ValueError):
            propagator_smooth_1p1(1.0, 0.5, 1.0, 0.0, 0.0)
        with self.assertRaises(ValueError):
            propagator_smooth_1p1(1.0, 0.5, 1.0, 0.05, 0.0, cutoff=-1.0)


class PropagatorCommandTests(SimpleTestCase):
    def call(self, **options):
        out = StringIO()
        call_command('propagator', stdout=out, stderr=StringIO(), **options)
        return json.loads(out.getvalue())

    def test_samples_pass(self):
        records = self.call(samples='200', seed='9')
        self.assertEqual([r['operation'] for r in records], ['integrand_identity', 'middle_form'])
        self.assertTrue(all(r['passed'] for r in records))
        self.assertLess(records[0]['outputs']['max_relative_gap'], 1e-14)

    def test_single_sample(self):
        records = self.call(samples='1', seed='0')
        self.assertTrue(records[0]['passed'])

    def test_quadrature(self):
        records = self.call(samples='10', seed='1', quadrature=True, grid='256')
        by_name = {r['operation']: r for r in records}
        self.assertTrue(by_name['quadrature']['passed'])
        self.assertTrue(by_name['quadrature_parity']['passed'])
        decay = by_name['quadrature_decay']
        self.assertTrue(decay['passed'])
        self.assertLess(decay['outputs']['ratio'], 1e-4)
        self.assertGreater(decay['outputs']['midpoint_ratio'], decay['outputs']['ratio'])

    def test_single_einstein_sample_has_zero_gap(self):
        records = self.call(samples='1', seed='0', alpha='0')
        self.assertEqual(records[0]['gap'], 0.0)
        self.assertEqual(records[0]['outputs']['max_relative_gap'], 0.0)

    def test_fixed_convention(self):
        records = self.call(samples='100', seed='2', alpha='0.5,-0.25,1')
        self.assertTrue(all(r['passed'] for r in records))

    def test_bad_alpha_is_input_error(self):
        with self.assertRaises(CommandError) as ctx:
            self.call(samples='1', alpha='0.5,0.5')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_deterministic_apart_from_elapsed(self):
        first = self.call(samples='50', seed='3')
        second = self.call(samples='50', seed='3')
        for record in first + second:
            record.pop('elapsed')
        self.assertEqual(first, second)
