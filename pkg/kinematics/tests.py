import json
import os
import tempfile
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from metric.tensors import ConventionMismatchError
from .events import (
    ConventionRegistry,
    DegenerateConventionError,
    Event4,
    NonPositiveInputError,
    Ordering,
    SeparationKind,
    SyncParam,
    UnknownConventionError,
)
from .transforms import (
    alpha_for_arrival,
    alpha_for_one_way_velocity,
    classify_separation,
    coordinate_order,
    epsilon_to_a,
    one_way_velocity,
    reception_time,
    resynchronize,
    round_trip_time,
    round_trip_time_signed,
    winnie_epsilon,
)

EINSTEIN = SyncParam.einstein()
ALPHAS = [-0.9, -0.4, 0.0, 0.5, 0.99, 3.0]


class OneWayVelocityTests(SimpleTestCase):
    def test_light_speeds_match_closed_form_exactly(self):
        for a in ALPHAS:
            with self.subTest(a=a):
                self.assertEqual(one_way_velocity(1.0, a), 1.0 / (1.0 + a))
                self.assertEqual(one_way_velocity(-1.0, a), -1.0 / (1.0 - a))

    def test_round_trip_over_unit_length_is_two(self):
        for a in ALPHAS:
            with self.subTest(a=a):
                forward = one_way_velocity(1.0, a)
                backward = one_way_velocity(-1.0, a)
                self.assertAlmostEqual(round_trip_time_signed(1.0, forward, backward), 2.0, delta=1e-12)
                if abs(a) < 1:
                    self.assertAlmostEqual(round_trip_time(1.0, forward, abs(backward)), 2.0, delta=1e-12)

    def test_round_trip_for_large_a_has_a_negative_leg(self):
        forward = one_way_velocity(1.0, 3.0)
        backward = one_way_velocity(-1.0, 3.0)
        self.assertEqual(forward, 0.25)
        self.assertEqual(backward, 0.5)
        self.assertEqual(round_trip_time_signed(1.0, forward, backward), 2.0)

    def test_einstein_is_identity(self):
        for v in (-0.7, 0.0, 0.3, 1.0):
            self.assertEqual(one_way_velocity(v, 0.0), v)

    def test_child_runner(self):
        a = alpha_for_one_way_velocity(2.0, 4.0)
        self.assertEqual(a, -0.25)
        self.assertAlmostEqual(one_way_velocity(2.0, a), 4.0, delta=1e-12)
        self.assertAlmostEqual(one_way_velocity(-2.0, a), -4.0 / 3.0, delta=1e-12)

    def test_degenerate_convention(self):
        with self.assertRaises(DegenerateConventionError):
            one_way_velocity(-1.0, 1.0)
        with self.assertRaises(DegenerateConventionError):
            one_way_velocity(1.0, -1.0)

    def test_round_trip_rejects_non_positive_inputs(self):
        with self.assertRaises(NonPositiveInputError):
            round_trip_time(0.0, 1.0, 1.0)
        with self.assertRaises(NonPositiveInputError):
            round_trip_time(1.0, -1.0, 1.0)
        with self.assertRaises(NonPositiveInputError):
            round_trip_time_signed(-1.0, 1.0, -1.0)


class ResynchronizeTests(SimpleTestCase):
    def test_photon_arrives_at_point_six(self):
        photon = SyncParam.along_x(-0.4, 'photon')
        moved = resynchronize(Event4(1.0, 1.0), EINSTEIN, photon)
        self.assertAlmostEqual(moved.t, 0.6, delta=1e-12)
        self.assertEqual(moved.x, 1.0)
        self.assertEqual(moved.convention, 'photon')
        self.assertAlmostEqual(alpha_for_arrival(1.0, 1.0, 0.6), -0.4, delta=1e-12)

    def test_origin_is_fixed(self):
        for a in ALPHAS:
            moved = resynchronize(Event4(1.0, 0.0), EINSTEIN, SyncParam.along_x(a))
            self.assertEqual(moved.t, 1.0)

    def test_round_trip_is_bit_exact_for_representable_inputs(self):
        p = SyncParam((0.5, 0.25, 0.0), 'p')
        q = SyncParam((0.25, -0.5, 1.0), 'q')
        event = Event4(1.0, 2.0, 4.0, -1.0, convention='p')
        back = resynchronize(resynchronize(event, p, q), q, p)
        self.assertEqual(back, event)

    def test_round_trip_random(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            p = SyncParam(tuple(rng.uniform(-5, 5, 3)), 'p')
            q = SyncParam(tuple(rng.uniform(-5, 5, 3)), 'q')
            event = Event4(*rng.uniform(-10, 10, 4), convention='p')
            back = resynchronize(resynchronize(event, p, q), q, p)
            self.assertAlmostEqual(back.t, event.t, delta=1e-12 * (1 + abs(event.t)))
            self.assertEqual(back.position, event.position)

    def test_composition_through_einstein(self):
        p = SyncParam.along_x(0.5, 'p')
        q = SyncParam.along_x(-0.25, 'q')
        event = Event4(3.0, 2.0, convention='p')
        direct = resynchronize(event, p, q)
        via = resynchronize(resynchronize(event, p, EINSTEIN), EINSTEIN, q)
        self.assertEqual(direct, via)


class EpsilonTests(SimpleTestCase):
    def test_einstein_is_one_half(self):
        self.assertEqual(winnie_epsilon(0.0), 0.5)

    def test_round_trip(self):
        for a in (-0.5, 0.5, 0.25, 3.0):
            self.assertEqual(epsilon_to_a(winnie_epsilon(a)), a)

    def test_unit_interval_iff_subluminal(self):
        self.assertTrue(0 < winnie_epsilon(0.99) < 1)
        self.assertFalse(0 < winnie_epsilon(3.0) < 1)
        self.assertFalse(0 < winnie_epsilon(-1.0) < 1)


class SeparationTests(SimpleTestCase):
    def _pair(self, sync, first=(0.0, 0.0), second=(2.0, 1.0)):
        return (
            resynchronize(Event4(*first), EINSTEIN, sync),
            resynchronize(Event4(*second), EINSTEIN, sync),
        )

    def test_interval_is_invariant(self):
        for a in (-3.0, -0.4, 0.0, 0.5, 3.0):
            sync = SyncParam.along_x(a)
            e1, e2 = self._pair(sync)
            causal = classify_separation(e1, e2, sync)
            self.assertEqual(causal.kind, SeparationKind.TIMELIKE)
            self.assertAlmostEqual(causal.interval_squared, 3.0, delta=1e-12)

    def test_timelike_order_flips_without_changing_the_interval(self):
        einstein_pair = self._pair(EINSTEIN)
        self.assertEqual(coordinate_order(*einstein_pair, EINSTEIN), Ordering.FIRST_EARLIER)

        flipped = SyncParam.along_x(-3.0)
        e1, e2 = self._pair(flipped)
        self.assertEqual(e2.t, -1.0)
        self.assertEqual(coordinate_order(e1, e2, flipped), Ordering.SECOND_EARLIER)

    def test_lightlike_and_spacelike(self):
        sync = SyncParam.along_x(0.7)
        self.assertEqual(
            classify_separation(*self._pair(sync, second=(1.0, 1.0)), sync).kind, SeparationKind.LIGHTLIKE
        )
        self.assertEqual(
            classify_separation(*self._pair(sync, second=(1.0, 2.0)), sync).kind, SeparationKind.SPACELIKE
        )

    def test_co_located_events_never_flip(self):
        for a in (-3.0, 0.0, 3.0):
            sync = SyncParam.along_x(a)
            e1, e2 = self._pair(sync, first=(0.0, 1.0), second=(2.0, 1.0))
            self.assertEqual(coordinate_order(e1, e2, sync), Ordering.FIRST_EARLIER)

    def test_mismatched_tags(self):
        e1 = Event4(0.0, 0.0)
        e2 = Event4(1.0, 0.0, convention='other')
        with self.assertRaises(ConventionMismatchError):
            classify_separation(e1, e2, EINSTEIN)


class ReceptionTimeTests(SimpleTestCase):
    def test_single_clock_differences_do_not_depend_on_convention(self):
        observer = (3.0, 0.0, 0.0)
        events = [Event4(0.0, 0.0), Event4(1.0, 1.0, 0.5)]
        einstein = [reception_time(e, observer, EINSTEIN) for e in events]
        for a in ((0.7, 0.0, 0.0), (-2.0, 0.3, 1.0)):
            sync = SyncParam(a, 'p')
            moved = [resynchronize(e, EINSTEIN, sync) for e in events]
            received = [reception_time(e, observer, sync) for e in moved]
            self.assertAlmostEqual(received[1] - received[0], einstein[1] - einstein[0], delta=1e-12)


class ConventionRegistryTests(SimpleTestCase):
    def test_einstein_always_present(self):
        registry = ConventionRegistry()
        self.assertIn('einstein', registry)
        self.assertTrue(registry.resolve('einstein').is_einstein)

    def test_unknown_label(self):
        with self.assertRaises(UnknownConventionError):
            ConventionRegistry().resolve('nowhere')

    def test_conflicting_redefinition(self):
        registry = ConventionRegistry()
        registry.add(SyncParam.along_x(0.5, 'p'))
        with self.assertRaises(ValueError):
            registry.add(SyncParam.along_x(0.25, 'p'))

    def test_sync_param_validation(self):
        self.assertEqual(SyncParam((0.3,), 'p').a, (0.3, 0.0, 0.0))
        with self.assertRaises(ValueError):
            SyncParam((0.1, 0.2), 'p')
        with self.assertRaises(ValueError):
            SyncParam((float('nan'), 0.0, 0.0), 'p')


class TransformCommandTests(SimpleTestCase):
    def call(self, *args, **options):
        out = StringIO()
        call_command('transform', *args, stdout=out, stderr=StringIO(), **options)
        return json.loads(out.getvalue())

    def test_photon(self):
        event = self.call(t='1', x='1', from_alpha='0', to_alpha='-0.4')
        self.assertEqual(event['t'], 0.6)
        self.assertEqual(event['x'], 1.0)

    def test_origin_unchanged(self):
        event = self.call(t='1', x='0', from_alpha='0.3', to_alpha='-2.5')
        self.assertEqual(event['t'], 1.0)

    def test_round_trip_is_bit_identical(self):
        there = self.call(t='1.5', x='2', y='-1', from_alpha='0.5,0.25,0', to_alpha='-0.75')
        back = self.call(
            t=repr(there['t']), x='2', y='-1', from_alpha='-0.75', to_alpha='0.5,0.25,0'
        )
        self.assertEqual(back['t'], 1.5)

    def test_parse_error_names_field(self):
        with self.assertRaises(CommandError) as ctx:
            self.call(t='abc', x='1')
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('t:', str(ctx.exception))

    def test_missing_field(self):
        with self.assertRaises(CommandError) as ctx:
            self.call(t='1')
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('x:', str(ctx.exception))

    def test_bundled_scenario(self):
        result = self.call(scenario='photon_0p6.json')
        arrival = next(e for e in result['events'] if e['name'] == 'arrival')
        self.assertEqual(arrival['t'], 0.6)
        self.assertEqual(arrival['convention'], 'photon')

    def test_bundled_scenario_speeds(self):
        rows = self.call(scenario='photon_0p6.json')['speeds']
        speeds = {(r['convention'], r['v']): r['one_way_velocity'] for r in rows}
        self.assertEqual(len(speeds), 4)
        self.assertEqual(speeds[('einstein', 1.0)], 1.0)
        self.assertEqual(speeds[('einstein', -1.0)], -1.0)
        self.assertAlmostEqual(speeds[('photon', 1.0)], 1 / 0.6, delta=1e-12)
        self.assertAlmostEqual(speeds[('photon', -1.0)], -1 / 1.4, delta=1e-12)

    def test_bundled_scenario_round_trips(self):
        rows = self.call(scenario='photon_0p6.json')['round_trips']
        self.assertEqual({r['convention'] for r in rows}, {'einstein', 'photon'})
        for row in rows:
            self.assertFalse(row['degenerate'])
            self.assertAlmostEqual(row['round_trip_time'], 2.0, delta=1e-12)

    def write_scenario(self, data):
        with tempfile.NamedTemporaryFile('w', suffix='.json', delete=False) as f:
            json.dump(data, f)
        self.addCleanup(os.remove, f.name)
        return f.name

    def test_degenerate_convention_rows(self):
        path = self.write_scenario({
            'sync': [{'label': 'edge', 'alpha': [1.0]}],
            'kinematics': {'velocities': [-1.0], 'lengths': [2.0]},
        })
        result = self.call(scenario=path)
        self.assertEqual(result['events'], [])
        edge_speed = next(r for r in result['speeds'] if r['convention'] == 'edge')
        self.assertTrue(edge_speed['degenerate'])
        self.assertIsNone(edge_speed['one_way_velocity'])
        edge_trip = next(r for r in result['round_trips'] if r['convention'] == 'edge')
        self.assertTrue(edge_trip['degenerate'])
        einstein_trip = next(r for r in result['round_trips'] if r['convention'] == 'einstein')
        self.assertEqual(einstein_trip['round_trip_time'], 4.0)

    def test_non_positive_length_is_input_error(self):
        path = self.write_scenario({'kinematics': {'lengths': [0.0]}})
        with self.assertRaises(CommandError) as ctx:
            self.call(scenario=path)
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('lengths', str(ctx.exception))

    def test_empty_kinematics_section(self):
        path = self.write_scenario({'kinematics': {}})
        with self.assertRaises(CommandError) as ctx:
            self.call(scenario=path)
        self.assertEqual(ctx.exception.returncode, 2)


class LightspeedCommandTests(SimpleTestCase):
    def call(self, **options):
        out = StringIO()
        call_command('lightspeed', stdout=out, stderr=StringIO(), **options)
        return json.loads(out.getvalue())

    def test_half(self):
        result = self.call(alpha='0.5')
        self.assertAlmostEqual(result['forward'], 2.0 / 3.0, delta=1e-15)
        self.assertEqual(result['backward'], 2.0)
        self.assertEqual(result['round_trip_time'], 2.0)

    def test_einstein(self):
        result = self.call(alpha='0')
        self.assertEqual((result['forward'], result['backward'], result['round_trip_time']), (1.0, 1.0, 2.0))

    def test_direction_is_normalized_and_reported(self):
        result = self.call(alpha='0.3,0.3,0', direction='2,0,0')
        self.assertEqual(result['direction'], [1.0, 0.0, 0.0])

    def test_degenerate_direction_exits_three(self):
        with self.assertRaises(CommandError) as ctx:
            self.call(alpha='1', direction='-1,0,0')
        self.assertEqual(ctx.exception.returncode, 3)

    def test_zero_direction_is_input_error(self):
        with self.assertRaises(CommandError) as ctx:
            self.call(alpha='0.2', direction='0,0,0')
        self.assertEqual(ctx.exception.returncode, 2)
