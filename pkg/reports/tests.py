import io
import json
import os
import tempfile
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings

from .models import VerificationRecord
from .records import Report, digest, read_report_csv
from .serializers import MAX_SEED, QuantumFlagsSerializer, ScenarioFileSerializer
from .sweeps import read_sweep_csv, run_sweep, sweep_to_csv
from .utils import load_scenario_file

ZERO = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
SIGMA_Z = [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]


def quantum_section(**overrides):
    section = {
        'dim_a': 2, 'dim_b': 2,
        'h_a': ZERO, 'h_b': ZERO, 'o_a': SIGMA_Z, 'o_b': SIGMA_Z,
        't_in': 0.0, 't_a': 0.2, 't_b': 0.4, 't_out': 1.0,
        'psi_in': [[1, 0], [0, 0], [0, 0], [0, 0]],
        'psi_out': [[1, 0], [0, 0], [0, 0], [0, 0]],
    }
    section.update(overrides)
    return section


class ScenarioFileSerializerTests(SimpleTestCase):
    def errors(self, data):
        serializer = ScenarioFileSerializer(data=data)
        self.assertFalse(serializer.is_valid())
        return serializer.errors

    def test_bundled_scenarios_are_valid(self):
        for name in ('commuting_2x2.json', 'singlet_chsh.json', 'interacting_sigmaxx.json', 'photon_0p6.json'):
            with self.subTest(name=name):
                load_scenario_file(name)

    def test_quantum_section_builds_a_scenario(self):
        serializer = ScenarioFileSerializer(data={'quantum': quantum_section()})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        scenario = serializer.validated_data['quantum']['scenario']
        self.assertEqual(scenario.dim, 4)
        self.assertFalse(scenario.is_interacting)

    def test_undefined_sync_label(self):
        errors = self.errors({
            'sync': [{'label': 'p', 'alpha': [0.5]}],
            'kinematics': {'events': [{'t': 1, 'x': 1, 'convention': 'q'}]},
        })
        self.assertIn('kinematics', errors)

    def test_duplicate_sync_label(self):
        errors = self.errors({'sync': [{'label': 'p', 'alpha': [0.5]}, {'label': 'p', 'alpha': [0.25]}]})
        self.assertIn('sync', errors)

    def test_ragged_matrix(self):
        errors = self.errors({'quantum': quantum_section(h_a=[[[0, 0], [0, 0]], [[0, 0]]])})
        self.assertIn('h_a', errors['quantum'])

    def test_dimension_inconsistent_matrix(self):
        errors = self.errors({'quantum': quantum_section(o_b=[[[1, 0]]])})
        self.assertIn('o_b', errors['quantum'])

    def test_unnormalized_state(self):
        errors = self.errors({'quantum': quantum_section(psi_in=[[1, 0], [1, 0], [0, 0], [0, 0]])})
        self.assertIn('quantum', errors)

    def test_measurement_needs_exactly_one_form(self):
        errors = self.errors({'quantum': quantum_section(remote={'basis': 'z', 'angle': 0.3})})
        self.assertIn('remote', errors['quantum'])

    def test_seed_range(self):
        self.assertTrue(QuantumFlagsSerializer(data={'seed': MAX_SEED, 'trials': 0}).is_valid())
        self.assertFalse(QuantumFlagsSerializer(data={'seed': MAX_SEED + 1, 'trials': 0}).is_valid())
        self.assertFalse(QuantumFlagsSerializer(data={'seed': -1, 'trials': 0}).is_valid())


class ScenarioLoadingTests(SimpleTestCase):
    def test_invalid_json(self):
        with tempfile.NamedTemporaryFile('w', suffix='.json', delete=False) as f:
            f.write('{"quantum": ')
        self.addCleanup(os.remove, f.name)
        with self.assertRaises(CommandError) as ctx:
            load_scenario_file(f.name)
        self.assertEqual(ctx.exception.returncode, 2)

    def test_missing_file(self):
        with self.assertRaises(CommandError) as ctx:
            load_scenario_file('/nonexistent/scenario.json')
        self.assertEqual(ctx.exception.returncode, 2)


class ReportTests(SimpleTestCase):
    def report(self):
        report = Report(command='quantum', seed=42, version='1.0.0')
        report.check('order_gap', {'n': 1}, {'value': 1 + 2j}, gap=1e-16, tolerance=1e-10)
        report.check('counterexample', {'n': 2}, {'ratio': np.float64(2 / 3)}, gap=0.37, tolerance=0.01, expect='above')
        return report

    def test_check_modes(self):
        report = self.report()
        self.assertTrue(report.passed)
        report.check('worse', {}, {}, gap=0.5, tolerance=0.01)
        report.check('above_fails', {}, {}, gap=0.001, tolerance=0.01, expect='above')
        self.assertFalse(report.passed)
        self.assertEqual(len(report.failures()), 2)
        self.assertEqual(report.worst_failure().operation, 'worse')

    def test_every_record_carries_seed_and_version(self):
        for record in self.report().records:
            self.assertEqual(record.seed, '42')
            self.assertEqual(record.version, '1.0.0')

    def test_digest_is_stable(self):
        self.assertEqual(digest({'b': 1, 'a': [1.5, 2]}), digest({'a': [1.5, 2], 'b': 1}))
        self.assertNotEqual(digest({'a': 1}), digest({'a': 2}))

    def test_json_outputs_are_plain(self):
        records = json.loads(self.report().render('json'))
        self.assertEqual(records[0]['outputs']['value'], [1.0, 2.0])

    def test_csv_round_trip_is_byte_identical(self):
        text = self.report().render('csv')
        self.assertTrue(text.startswith('command,operation,inputs_digest,outputs,gap,'))
        self.assertNotIn('\r', text)
        frame = read_report_csv(io.StringIO(text))
        self.assertEqual(frame.to_csv(index=False, lineterminator='\n'), text)


class SweepTests(SimpleTestCase):
    def test_lightspeed_sweep(self):
        frame = run_sweep('lightspeed', -0.9, 0.9, 7)
        self.assertEqual(len(frame), 7)
        self.assertTrue(frame['alpha'].is_monotonic_increasing)
        np.testing.assert_allclose(frame['round_trip_time'], 2.0, atol=1e-12)

    def test_endpoints_only(self):
        frame = run_sweep('epsilon', -0.5, 0.5, 2)
        self.assertEqual(list(frame['alpha']), [-0.5, 0.5])
        self.assertEqual(list(frame['epsilon']), [0.25, 0.75])

    def test_degenerate_rows_are_marked(self):
        frame = run_sweep('lightspeed', -1.0, 1.0, 3)
        self.assertEqual(list(frame['degenerate']), [True, False, True])

    def test_interval_sweep_flips_order_only(self):
        frame = run_sweep('interval', -3.0, 3.0, 7)
        np.testing.assert_allclose(frame['interval_squared'], 3.0, atol=1e-12)
        self.assertEqual(set(frame['kind']), {'timelike'})
        self.assertEqual(frame['order'].iloc[0], 'second')
        self.assertEqual(frame['order'].iloc[-1], 'first')

    def test_parallel_rows_keep_alpha_order(self):
        serial = run_sweep('transform', -2.0, 2.0, 9)
        parallel = run_sweep('transform', -2.0, 2.0, 9, n_jobs=2)
        self.assertEqual(sweep_to_csv(serial), sweep_to_csv(parallel))

    def test_csv_round_trip_is_byte_identical(self):
        text = sweep_to_csv(run_sweep('lightspeed', -1.0, 1.0, 5))
        self.assertEqual(sweep_to_csv(read_sweep_csv(io.StringIO(text))), text)


class SweepCommandTests(SimpleTestCase):
    def call(self, **options):
        out = StringIO()
        call_command('sweep', stdout=out, stderr=StringIO(), **options)
        return read_sweep_csv(io.StringIO(out.getvalue()))

    def test_lightspeed(self):
        frame = self.call(alpha_min='-0.9', alpha_max='0.9', steps='7', op='lightspeed')
        self.assertEqual(len(frame), 7)
        np.testing.assert_allclose(frame['round_trip_time'], 2.0, atol=1e-12)

    def test_nosignal(self):
        frame = self.call(alpha_min='-0.5', alpha_max='0.5', steps='5', op='nosignal', scenario='commuting_2x2.json')
        self.assertTrue((frame['tv_distance'] < 1e-10).all())

    def test_amplitude_with_random_scenario(self):
        frame = self.call(alpha_min='-1', alpha_max='1', steps='5', op='amplitude', seed='3')
        self.assertTrue((frame['gap'] < 1e-10).all())
        self.assertIn('B-first', set(frame['order']))

    def test_json_output_is_strict_json(self):
        out = StringIO()
        call_command(
            'sweep', alpha_min='-1', alpha_max='1', steps='3', op='lightspeed', output='json',
            stdout=out, stderr=StringIO(),
        )
        self.assertNotIn('NaN', out.getvalue())

        def reject(token):
            raise ValueError(f"non-standard JSON constant {token}")

        rows = json.loads(out.getvalue(), parse_constant=reject)
        self.assertEqual([row['degenerate'] for row in rows], [True, False, True])
        self.assertIsNone(rows[0]['forward'])
        self.assertEqual(rows[1]['round_trip_time'], 2.0)

    def test_unknown_op_lists_valid_ops(self):
        with self.assertRaises(CommandError) as ctx:
            self.call(alpha_min='0', alpha_max='1', steps='3', op='warp')
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('lightspeed', str(ctx.exception))
        self.assertIn('nosignal', str(ctx.exception))

    def test_too_few_steps(self):
        with self.assertRaises(CommandError) as ctx:
            self.call(alpha_min='0', alpha_max='1', steps='1', op='epsilon')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_interacting_amplitude_sweep_fails(self):
        with self.assertRaises(CommandError) as ctx:
            self.call(alpha_min='-1', alpha_max='1', steps='3', op='amplitude', scenario='interacting_sigmaxx.json')
        self.assertEqual(ctx.exception.returncode, 1)


class SeedTests(SimpleTestCase):
    def seeds(self, **options):
        out = StringIO()
        call_command('quantum', 'nosignal', 'commuting_2x2.json', stdout=out, stderr=StringIO(), **options)
        return {r['seed'] for r in json.loads(out.getvalue())}

    @override_settings(SYNCHRONY_SEED=7)
    def test_setting_supplies_default(self):
        self.assertEqual(self.seeds(), {'7'})

    @override_settings(SYNCHRONY_SEED=7)
    def test_flag_wins(self):
        self.assertEqual(self.seeds(seed='11'), {'11'})


class RecordTests(TestCase):
    def test_record_saves_rows(self):
        call_command(
            'quantum', 'amplitude', 'commuting_2x2.json', record=True, stdout=StringIO(), stderr=StringIO()
        )
        rows = VerificationRecord.objects.filter(command='quantum')
        self.assertEqual(rows.count(), 2)
        self.assertTrue(all(row.passed for row in rows))
        self.assertEqual({row.operation for row in rows}, {'order_gap', 'three_form_gap'})

    def test_failed_run_is_still_recorded(self):
        with self.assertRaises(CommandError):
            call_command(
                'quantum', 'amplitude', 'interacting_sigmaxx.json', record=True,
                stdout=StringIO(), stderr=StringIO(),
            )
        row = VerificationRecord.objects.get(operation='order_gap')
        self.assertFalse(row.passed)
        self.assertIn('FAIL', str(row))

    def test_without_record_nothing_is_saved(self):
        call_command('propagator', samples='5', stdout=StringIO(), stderr=StringIO())
        self.assertEqual(VerificationRecord.objects.count(), 0)
