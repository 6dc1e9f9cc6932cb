"""
Order-independence, no-signaling and CHSH checks on a scenario file.

Usage:
    python synchrony.py quantum amplitude commuting_2x2.json
    python synchrony.py quantum nosignal commuting_2x2.json --trials 100
    python synchrony.py quantum chsh singlet_chsh.json
    python synchrony.py quantum counterexample interacting_sigmaxx.json
    python synchrony.py quantum amplitude interacting_sigmaxx.json --expect-fail

Scenario names that are not paths are looked up among the bundled scenarios.
`--trials N` adds N seeded random commuting scenarios to the amplitude and
nosignal checks. Exit 0 iff every check passes (inverted by --expect-fail).
"""

import logging
import time

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from quantum.amplitudes import Order, amplitude_ordered, order_gap, three_form_gap
from quantum.measurement import (
    chsh_value,
    marginal_distribution,
    random_measurement,
    total_variation,
)
from quantum.scenario import random_scenario
from reports.records import Report
from reports.serializers import QuantumFlagsSerializer
from reports.utils import EXIT_INPUT, emit_report, load_scenario_file, resolve_seed, validate_or_fail

logger = logging.getLogger(__name__)

SUBCOMMANDS = ['amplitude', 'nosignal', 'chsh', 'counterexample']

TRIAL_DIMS = [(2, 2), (2, 3), (3, 3), (4, 4)]


def nosignal_distance(scenario, remote, local):
    return total_variation(
        marginal_distribution(scenario, remote, local),
        marginal_distribution(scenario, None, local),
    )


class Command(BaseCommand):
    help = 'Run quantum verifications (amplitude | nosignal | chsh | counterexample) on a scenario'

    def add_arguments(self, parser):
        parser.add_argument('subcommand', type=str, help=f"One of: {', '.join(SUBCOMMANDS)}")
        parser.add_argument('scenario', type=str, help='Scenario file path or bundled scenario name')
        parser.add_argument('--output', type=str, choices=['csv', 'json'], help='Report format (default: json)')
        parser.add_argument('--path', type=str, help='Write the report here instead of stdout')
        parser.add_argument('--seed', type=str, help='Seed for random trials (default: SYNCHRONY_SEED)')
        parser.add_argument('--trials', type=str, default='0', help='Random commuting scenarios to add (default: 0)')
        parser.add_argument(
            '--expect-fail',
            action='store_true',
            help='Invert the exit code: succeed only if some check fails'
        )
        parser.add_argument('--record', action='store_true', help='Also save the report rows to the database')

    def handle(self, *args, **options):
        subcommand = options['subcommand']
        if subcommand not in SUBCOMMANDS:
            raise CommandError(
                f"subcommand: '{subcommand}' is not valid; choose from {', '.join(SUBCOMMANDS)}",
                returncode=EXIT_INPUT,
            )
        flags = validate_or_fail(
            QuantumFlagsSerializer,
            {'seed': resolve_seed(options.get('seed')), 'trials': options['trials']},
        )
        scenario_file = load_scenario_file(options['scenario'])
        section = scenario_file.get('quantum')
        if section is None:
            raise CommandError("scenario: quantum section is required", returncode=EXIT_INPUT)

        self.tolerances = settings.SYNCHRONY_TOLERANCES
        self.rng = np.random.default_rng(flags['seed'])
        report = Report(command='quantum', seed=flags['seed'], version=settings.SYNCHRONY_VERSION)

        getattr(self, f'check_{subcommand}')(report, section, flags['trials'])
        emit_report(self, report, options, scenario_file, expect_fail=options['expect_fail'])

    def check_amplitude(self, report, section, trials):
        s = section['scenario']
        start = time.perf_counter()
        a_first = amplitude_ordered(s, Order.A_FIRST).value
        b_first = amplitude_ordered(s, Order.B_FIRST).value
        gap = abs(a_first - b_first)
        report.check(
            'order_gap',
            inputs={'scenario': section['name']},
            outputs={
                'a_first': a_first,
                'b_first': b_first,
                'interacting': s.is_interacting,
                'assumption_gaps': s.assumption_gaps(),
            },
            gap=gap,
            tolerance=self.tolerances['amplitude'],
            elapsed=time.perf_counter() - start,
        )
        if not s.is_interacting:
            start = time.perf_counter()
            report.check(
                'three_form_gap',
                inputs={'scenario': section['name']},
                outputs={},
                gap=three_form_gap(s),
                tolerance=self.tolerances['amplitude'],
                elapsed=time.perf_counter() - start,
            )

        if trials:
            start = time.perf_counter()
            worst_order, worst_forms = 0.0, 0.0
            for i in range(trials):
                dim_a, dim_b = TRIAL_DIMS[i % len(TRIAL_DIMS)]
                trial = random_scenario(self.rng, dim_a, dim_b)
                worst_order = max(worst_order, order_gap(trial))
                worst_forms = max(worst_forms, three_form_gap(trial))
            report.check(
                'random_order_gap',
                inputs={'trials': trials},
                outputs={'three_form_gap': worst_forms},
                gap=max(worst_order, worst_forms),
                tolerance=self.tolerances['amplitude'],
                elapsed=time.perf_counter() - start,
            )

    def check_nosignal(self, report, section, trials):
        s = section['scenario']
        remote = section['remote_setting'] or random_measurement(self.rng, s.dim_a)
        local = section['local_setting']
        start = time.perf_counter()
        with_remote = marginal_distribution(s, remote, local)
        without = marginal_distribution(s, None, local)
        report.check(
            'nosignal',
            inputs={'scenario': section['name']},
            outputs={'with_remote': with_remote, 'without_remote': without},
            gap=total_variation(with_remote, without),
            tolerance=self.tolerances['nosignal'],
            elapsed=time.perf_counter() - start,
        )

        if trials:
            start = time.perf_counter()
            worst = 0.0
            for i in range(trials):
                dim_a, dim_b = TRIAL_DIMS[i % len(TRIAL_DIMS)]
                trial = random_scenario(self.rng, dim_a, dim_b)
                worst = max(worst, nosignal_distance(
                    trial,
                    random_measurement(self.rng, dim_a),
                    random_measurement(self.rng, dim_b),
                ))
            report.check(
                'random_nosignal',
                inputs={'trials': trials},
                outputs={},
                gap=worst,
                tolerance=self.tolerances['nosignal'],
                elapsed=time.perf_counter() - start,
            )

    def check_chsh(self, report, section, trials):
        s = section['scenario']
        if 'chsh' not in section:
            raise CommandError("scenario: quantum.chsh is required for chsh", returncode=EXIT_INPUT)
        if (s.dim_a, s.dim_b) != (2, 2):
            raise CommandError(
                f"scenario: chsh needs two qubits, got {s.dim_a}x{s.dim_b}", returncode=EXIT_INPUT
            )
        chsh = section['chsh']
        start = time.perf_counter()
        value = chsh_value(s.psi_in, chsh['angles_a'], chsh['angles_b'])
        report.check(
            'chsh',
            inputs={'angles_a': chsh['angles_a'], 'angles_b': chsh['angles_b']},
            outputs={'S': value, 'abs_S': abs(value), 'expected': chsh['expected']},
            gap=abs(abs(value) - chsh['expected']),
            tolerance=self.tolerances['chsh'],
            elapsed=time.perf_counter() - start,
        )

    def check_counterexample(self, report, section, trials):
        s = section['scenario']
        if not s.is_interacting:
            logger.warning(f"counterexample run on non-interacting scenario '{s.name}'")
        start = time.perf_counter()
        report.check(
            'counterexample_amplitude',
            inputs={'scenario': section['name']},
            outputs={
                'a_first': amplitude_ordered(s, Order.A_FIRST).value,
                'b_first': amplitude_ordered(s, Order.B_FIRST).value,
            },
            gap=order_gap(s),
            tolerance=self.tolerances['counterexample_amplitude'],
            expect='above',
            elapsed=time.perf_counter() - start,
        )
        remote = section['remote_setting'] or random_measurement(self.rng, s.dim_a)
        start = time.perf_counter()
        report.check(
            'counterexample_signal',
            inputs={'scenario': section['name']},
            outputs={},
            gap=nosignal_distance(s, remote, section['local_setting']),
            tolerance=self.tolerances['counterexample_signal'],
            expect='above',
            elapsed=time.perf_counter() - start,
        )
