"""
Tabulate one operation over a range of alpha values.

Usage:
    python synchrony.py sweep --alpha-min -0.9 --alpha-max 0.9 --steps 7 --op lightspeed
    python synchrony.py sweep --alpha-min -3 --alpha-max 3 --steps 13 --op interval
    python synchrony.py sweep --alpha-min -0.5 --alpha-max 0.5 --steps 5 --op nosignal --scenario commuting_2x2.json

Ops: lightspeed, transform, epsilon, interval, amplitude, nosignal. The
quantum ops use the scenario's quantum section, or a seeded random 2x2
commuting scenario when no scenario is given. Rows are emitted in alpha
order; amplitude and nosignal exit 1 if any row exceeds its tolerance.
"""

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from quantum.measurement import MeasurementSetting, random_measurement
from quantum.scenario import random_scenario
from reports.serializers import SweepFlagsSerializer
from reports.sweeps import CHECKED_COLUMNS, quantum_context, run_sweep, sweep_to_csv, sweep_to_json
from reports.utils import (
    EXIT_INPUT,
    EXIT_TOLERANCE,
    load_scenario_file,
    output_options,
    resolve_seed,
    validate_or_fail,
    write_text,
)


class Command(BaseCommand):
    help = 'Emit one CSV row per alpha value for the chosen op'

    def add_arguments(self, parser):
        parser.add_argument('--alpha-min', type=str, help='Smallest alpha')
        parser.add_argument('--alpha-max', type=str, help='Largest alpha')
        parser.add_argument('--steps', type=str, help='Number of alpha values, endpoints included (>= 2)')
        parser.add_argument('--op', type=str, help='Operation to tabulate')
        parser.add_argument('--seed', type=str, help='Seed for random quantum scenarios (default: SYNCHRONY_SEED)')
        parser.add_argument('--scenario', type=str, help='Scenario file for the quantum ops')
        parser.add_argument('--output', type=str, choices=['csv', 'json'], help='Table format (default: csv)')
        parser.add_argument('--path', type=str, help='Write the table here instead of stdout')

    def handle(self, *args, **options):
        data = {
            key: options[key]
            for key in ('alpha_min', 'alpha_max', 'steps', 'op')
            if options.get(key) is not None
        }
        data['seed'] = resolve_seed(options.get('seed'))
        flags = validate_or_fail(SweepFlagsSerializer, data)
        op = flags['op']

        scenario_file = load_scenario_file(options['scenario']) if options.get('scenario') else {}
        context = self.quantum_context(scenario_file, flags['seed']) if op in CHECKED_COLUMNS else None

        frame = run_sweep(
            op, flags['alpha_min'], flags['alpha_max'], flags['steps'],
            context=context, n_jobs=settings.SYNCHRONY_SWEEP_JOBS,
        )

        output_format, path = output_options({'output': options.get('output') or 'csv', 'path': options.get('path')})
        if output_format == 'csv':
            text = sweep_to_csv(frame)
        else:
            text = sweep_to_json(frame)
        write_text(text, path, self.stdout)

        if op in CHECKED_COLUMNS:
            column, tolerance_name = CHECKED_COLUMNS[op]
            tolerance = settings.SYNCHRONY_TOLERANCES[tolerance_name]
            worst = float(frame[column].max())
            if not worst < tolerance:
                raise CommandError(
                    f"{op} sweep: worst {column} {worst!r} exceeds tolerance {tolerance!r}",
                    returncode=EXIT_TOLERANCE,
                )
        self.stderr.write(self.style.SUCCESS(f"{op} sweep: {len(frame)} rows"))

    def quantum_context(self, scenario_file, seed):
        rng = np.random.default_rng(seed)
        section = scenario_file.get('quantum')
        if section is None:
            if scenario_file:
                raise CommandError("scenario: quantum section is required for this op", returncode=EXIT_INPUT)
            scenario = random_scenario(rng, 2, 2, name='random sweep scenario')
            return quantum_context(scenario, random_measurement(rng, 2), MeasurementSetting.computational(2))
        scenario = section['scenario']
        remote = section['remote_setting'] or random_measurement(rng, scenario.dim_a)
        return quantum_context(scenario, remote, section['local_setting'])
