import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose, assert_array_equal

from kinematics.events import DegenerateConventionError, Event4, SyncParam
from kinematics.transforms import resynchronize
from .tensors import (
    ConventionMismatchError,
    EINSTEIN_METRIC,
    NotUnitVectorError,
    WaveFourVector,
    directional_light_speed,
    dispersion_check,
    dot_kx,
    four_vector_pullback,
    line_element,
    metric_from_alpha,
    slowness,
    transform_wavevector,
)

EINSTEIN = SyncParam.einstein()


def displayed_metric(a):
    """Entry-by-entry construction of the resynchronized metric."""
    g = [[0.0] * 4 for _ in range(4)]
    g[0][0] = 1.0
    for i in range(3):
        g[0][i + 1] = -a[i]
        g[i + 1][0] = -a[i]
        for j in range(3):
            g[i + 1][j + 1] = a[i] * a[j] - (1.0 if i == j else 0.0)
    return np.array(g)


def random_unit(rng):
    n = rng.normal(size=3)
    return n / np.linalg.norm(n)


class MetricTests(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(11)
        self.alphas = [self.rng.uniform(-5, 5, 3) for _ in range(100)]

    def test_einstein_metric(self):
        assert_array_equal(metric_from_alpha((0.0, 0.0, 0.0)).g, EINSTEIN_METRIC)

    def test_matches_displayed_matrix_exactly(self):
        for a in self.alphas:
            assert_array_equal(metric_from_alpha(a).g, displayed_metric(a))

    def test_symmetric(self):
        for a in self.alphas:
            self.assertTrue(metric_from_alpha(a).is_symmetric(tol=0.0))

    def test_matches_pullback(self):
        for a in self.alphas:
            scale = 1.0 + float(a @ a)
            assert_allclose(four_vector_pullback(a), metric_from_alpha(a).g, rtol=0, atol=1e-12 * scale)

    def test_determinant_is_minus_one(self):
        for a in self.alphas:
            self.assertAlmostEqual(metric_from_alpha(a).determinant, -1.0, delta=1e-12)

    def test_line_element_is_invariant(self):
        for a in self.alphas:
            dx = self.rng.uniform(-1, 1, 4)
            einstein = dx[0] ** 2 - dx[1] ** 2 - dx[2] ** 2 - dx[3] ** 2
            primed = dx.copy()
            primed[0] = dx[0] + float(a @ dx[1:])
            g = metric_from_alpha(a).g
            scale = float(np.abs(primed) @ np.abs(g) @ np.abs(primed))
            self.assertAlmostEqual(line_element(primed, a), einstein, delta=1e-12 * max(1.0, scale))


class LightSpeedTests(SimpleTestCase):
    def test_harmonic_mean_exact_for_representable_inputs(self):
        n = np.array([1.0, 0.0, 0.0])
        for a in ((0.5, 0.0, 0.0), (0.25, 3.0, -1.0), (-0.75, 0.0, 2.0)):
            self.assertEqual(slowness(n, a) + slowness(-n, a), 2.0)

    def test_harmonic_mean_random(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            a = rng.uniform(-5, 5, 3)
            n = random_unit(rng)
            self.assertAlmostEqual(slowness(n, a) + slowness(-n, a), 2.0, delta=1e-12)

    def test_directional_speeds(self):
        n = np.array([1.0, 0.0, 0.0])
        self.assertAlmostEqual(directional_light_speed(n, (0.5, 0.0, 0.0)), 2.0 / 3.0, delta=1e-15)
        self.assertEqual(directional_light_speed(-n, (0.5, 0.0, 0.0)), 2.0)

    def test_perpendicular_direction_is_unaffected(self):
        self.assertEqual(directional_light_speed(np.array([0.0, 1.0, 0.0]), (0.9, 0.0, 0.0)), 1.0)

    def test_degenerate_direction(self):
        with self.assertRaises(DegenerateConventionError):
            directional_light_speed(np.array([-1.0, 0.0, 0.0]), (1.0, 0.0, 0.0))

    def test_not_a_unit_vector(self):
        with self.assertRaises(NotUnitVectorError):
            slowness(np.array([2.0, 0.0, 0.0]), (0.1, 0.0, 0.0))


class WaveVectorTests(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(17)

    def random_wave(self, m=1.0):
        k = self.rng.uniform(-3, 3, 3)
        omega = float(np.sqrt(k @ k + m ** 2)) * self.rng.choice([-1.0, 1.0])
        return WaveFourVector(omega, tuple(k))

    def test_phase_is_invariant(self):
        for _ in range(100):
            w = self.random_wave()
            e = Event4(*self.rng.uniform(-3, 3, 4))
            sync = SyncParam(tuple(self.rng.uniform(-5, 5, 3)), 'p')
            w_prime = transform_wavevector(w, EINSTEIN, sync)
            e_prime = resynchronize(e, EINSTEIN, sync)
            scale = 1.0 + abs(w_prime.omega * e_prime.t) + float(np.sum(np.abs(w_prime.k_vector * e.position)))
            self.assertAlmostEqual(dot_kx(w_prime, e_prime), dot_kx(w, e), delta=1e-12 * scale)

    def test_dispersion_is_invariant(self):
        for m in (0.0, 1.0):
            for _ in range(100):
                w = self.random_wave(m)
                sync = SyncParam(tuple(self.rng.uniform(-5, 5, 3)), 'p')
                w_prime = transform_wavevector(w, EINSTEIN, sync)
                self.assertEqual(w_prime.omega, w.omega)
                self.assertAlmostEqual(dispersion_check(w_prime, sync, m), 0.0, delta=1e-12 * (1 + w.omega ** 2))

    def test_exact_shift(self):
        w = WaveFourVector(2.0, (1.0, 0.0, 0.0))
        w_prime = transform_wavevector(w, EINSTEIN, SyncParam((0.5, -0.25, 0.0), 'p'))
        self.assertEqual(w_prime.k, (2.0, -0.5, 0.0))
        self.assertEqual(w_prime.convention, 'p')

    def test_light_wave_shift(self):
        w_prime = transform_wavevector(WaveFourVector(1.0, (1.0, 0.0, 0.0)), EINSTEIN, SyncParam.along_x(0.4, 'p'))
        self.assertEqual(w_prime.k, (1.4, 0.0, 0.0))
        self.assertEqual(w_prime.omega, 1.0)

    def test_phase_speed_is_the_directional_light_speed(self):
        x_hat = (1.0, 0.0, 0.0)
        a = (0.4, 0.0, 0.0)
        w_prime = transform_wavevector(WaveFourVector(1.0, x_hat), EINSTEIN, SyncParam(a, 'p'))
        self.assertAlmostEqual(w_prime.phase_speed(), 1 / 1.4, delta=1e-12)
        self.assertAlmostEqual(w_prime.phase_speed(x_hat), directional_light_speed(x_hat, a), delta=1e-12)

    def test_phase_speed_along_random_directions(self):
        for _ in range(100):
            n = self.rng.normal(size=3)
            n /= np.linalg.norm(n)
            a = tuple(self.rng.uniform(-0.9, 0.9, 3) / np.sqrt(3))
            w_prime = transform_wavevector(WaveFourVector(1.0, tuple(n)), EINSTEIN, SyncParam(a, 'p'))
            self.assertAlmostEqual(w_prime.phase_speed(n), directional_light_speed(n, a), delta=1e-12)

    def test_phase_speed_without_a_component(self):
        with self.assertRaises(DegenerateConventionError):
            WaveFourVector(1.0, (0.0, 1.0, 0.0)).phase_speed((1.0, 0.0, 0.0))

    def test_same_convention_is_identity(self):
        p = SyncParam((0.3, -0.2, 0.5), 'p')
        w = WaveFourVector(1.7, (0.1, 2.0, -0.3), convention='p')
        self.assertEqual(transform_wavevector(w, p, p), w)

    def test_transforms_compose(self):
        for _ in range(100):
            p, q, r = (SyncParam(tuple(self.rng.uniform(-3, 3, 3)), label) for label in 'pqr')
            w = self.random_wave()
            w_p = transform_wavevector(w, EINSTEIN, p)
            via = transform_wavevector(transform_wavevector(w_p, p, q), q, r)
            direct = transform_wavevector(w_p, p, r)
            self.assertEqual(via.convention, 'r')
            self.assertEqual(via.omega, direct.omega)
            assert_allclose(via.k_vector, direct.k_vector, atol=1e-12 * (1 + abs(w.omega)) * 10)
            back = transform_wavevector(transform_wavevector(w_p, p, q), q, p)
            assert_allclose(back.k_vector, w_p.k_vector, atol=1e-12 * (1 + abs(w.omega)) * 10)

    def test_pure_frequency_phase(self):
        w = WaveFourVector(2.0, (0.0, 0.0, 0.0))
        for x in (0.0, -7.5, 123.0):
            self.assertEqual(dot_kx(w, Event4(3.0, x, 1.0, -2.0)), 6.0)
        self.assertEqual(dot_kx(WaveFourVector(1.0, (1.0,)), Event4(1.0, 1.0)), 0.0)

    def test_dispersion_arithmetic(self):
        self.assertEqual(dispersion_check(WaveFourVector(1.0, (0.0,)), EINSTEIN, 1.0), 0.0)
        self.assertEqual(dispersion_check(WaveFourVector(2.0, (0.0,)), EINSTEIN, 1.0), 3.0)

    def test_mismatched_conventions(self):
        w = WaveFourVector(1.0, (1.0,))
        with self.assertRaises(ConventionMismatchError):
            dot_kx(w, Event4(0.0, 0.0, convention='p'))
        with self.assertRaises(ConventionMismatchError):
            transform_wavevector(w, SyncParam.along_x(0.5, 'p'), EINSTEIN)
        with self.assertRaises(ConventionMismatchError):
            dispersion_check(w, SyncParam.along_x(0.5, 'p'), 0.0)
