"""
Propagator integrand identity under random resynchronizations.

Usage:
    python synchrony.py propagator --samples 1000 --seed 7
    python synchrony.py propagator --quadrature --grid 512

Each sample draws a point x' in a random convention a, a wave vector, a
mass and a regulator, and compares the resynchronized integrand with the
Einstein integrand at the base point, plus the second-to-third form
substitution. --quadrature adds the 1+1-D comparison a=0 vs a=0.7 with its
parity mirror. It also checks the m=10 spacelike decay on the smooth-cutoff
propagator; the hard-cutoff grid ratio is reported next to it.
"""

import logging
import time

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand

from kinematics.events import Event4, SyncParam
from kinematics.transforms import resynchronize
from propagator.integrands import (
    PropagatorPoint,
    integrand_einstein,
    integrand_resynced,
    propagator_quadrature_1p1,
    relative_gap,
    spacelike_decay_ratio,
    substitution_gap,
)
from reports.records import Report
from reports.serializers import PropagatorFlagsSerializer
from reports.utils import emit_report, load_scenario_file, resolve_seed, validate_or_fail

logger = logging.getLogger(__name__)

SAMPLE_RANGE = 3.0
DEFAULT_MASSES = [0.0, 1.0]
DEFAULT_EPSILONS = [1e-3]

# 1+1-D comparison point
QUADRATURE_POINT = (1.0, 0.5)
QUADRATURE_MASS = 1.0
QUADRATURE_EPS = 0.05
QUADRATURE_ALPHA = 0.7

# large-mass decay: spacelike (0, d) against timelike (d, 0)
DECAY_MASS = 10.0
DECAY_DISTANCE = 2.0


def sample_gaps(rng, samples, masses, epsilons, alpha=None):
    """
    (worst identity gap, its sample index, worst substitution gap) over random
    samples. A given `alpha` fixes the convention; otherwise each sample draws one.
    """
    einstein = SyncParam.einstein()
    fixed = SyncParam(alpha, label='fixed') if alpha is not None else None
    worst, worst_index, worst_substitution = 0.0, 0, 0.0
    for i in range(samples):
        sync = fixed or SyncParam(tuple(rng.uniform(-SAMPLE_RANGE, SAMPLE_RANGE, size=3)), label='sample')
        t, x, y, z = rng.uniform(-SAMPLE_RANGE, SAMPLE_RANGE, size=4)
        omega = rng.uniform(-SAMPLE_RANGE, SAMPLE_RANGE)
        k = rng.uniform(-SAMPLE_RANGE, SAMPLE_RANGE, size=3)
        m = masses[int(rng.integers(len(masses)))]
        eps = epsilons[int(rng.integers(len(epsilons)))]

        x_prime = Event4(t, x, y, z, convention=sync.label)
        base = PropagatorPoint(resynchronize(x_prime, sync, einstein), m, eps)
        gap = relative_gap(
            integrand_resynced((omega, k), x_prime, sync, m, eps),
            integrand_einstein((omega, k), base),
        )
        if gap > worst:
            worst, worst_index = gap, i

        # same draw read as a primed wave vector for the substitution step
        worst_substitution = max(worst_substitution, substitution_gap((omega, k), x_prime, sync, m, eps))
    return worst, worst_index, worst_substitution


class Command(BaseCommand):
    help = 'Check the resynchronized propagator integrand against the Einstein one'

    def add_arguments(self, parser):
        parser.add_argument('--samples', type=str, help='Number of random samples (default: 1000)')
        parser.add_argument('--seed', type=str, help='Seed (default: SYNCHRONY_SEED)')
        parser.add_argument(
            '--alpha', type=str, help='Fix the convention for every sample: "a" or "ax,ay,az" (default: random)'
        )
        parser.add_argument('--quadrature', action='store_true', help='Add the 1+1-D quadrature comparison')
        parser.add_argument('--cutoff', type=str, default='20.0', help='Quadrature momentum cutoff (default: 20)')
        parser.add_argument('--grid', type=str, default='512', help='Quadrature points per axis (default: 512)')
        parser.add_argument('--scenario', type=str, help='Scenario file with a propagator section')
        parser.add_argument('--output', type=str, choices=['csv', 'json'], help='Report format (default: json)')
        parser.add_argument('--path', type=str, help='Write the report here instead of stdout')
        parser.add_argument('--record', action='store_true', help='Also save the report rows to the database')

    def handle(self, *args, **options):
        scenario_file = load_scenario_file(options['scenario']) if options.get('scenario') else {}
        section = scenario_file.get('propagator', {})

        seed = options.get('seed')
        if seed is None:
            seed = section.get('seed')
        data = {
            'samples': options.get('samples') or section.get('samples', 1000),
            'seed': resolve_seed(seed),
            'cutoff': options['cutoff'],
            'grid': options['grid'],
        }
        if options.get('alpha') is not None:
            data['alpha'] = options['alpha']
        flags = validate_or_fail(PropagatorFlagsSerializer, data)
        masses = section.get('masses', DEFAULT_MASSES)
        epsilons = section.get('epsilons', DEFAULT_EPSILONS)
        tolerances = settings.SYNCHRONY_TOLERANCES

        rng = np.random.default_rng(flags['seed'])
        report = Report(command='propagator', seed=flags['seed'], version=settings.SYNCHRONY_VERSION)

        start = time.perf_counter()
        worst, worst_index, worst_substitution = sample_gaps(
            rng, flags['samples'], masses, epsilons, alpha=flags.get('alpha')
        )
        elapsed = time.perf_counter() - start
        inputs = {'samples': flags['samples'], 'masses': masses, 'epsilons': epsilons, 'alpha': flags.get('alpha')}
        report.check(
            'integrand_identity', inputs,
            outputs={'max_relative_gap': worst, 'worst_sample': worst_index},
            gap=worst, tolerance=tolerances['integrand'], elapsed=elapsed,
        )
        report.check(
            'middle_form', inputs,
            outputs={'max_substitution_gap': worst_substitution},
            gap=worst_substitution, tolerance=tolerances['middle_form'],
        )
        self.stderr.write(f"max relative gap over {flags['samples']} samples: {worst!r}")

        if options['quadrature']:
            self.check_quadrature(
                report, flags['cutoff'], flags['grid'], tolerances['quadrature'], tolerances['quadrature_decay']
            )

        emit_report(self, report, options, scenario_file)

    def check_quadrature(self, report, cutoff, grid, tolerance, decay_tolerance):
        t, x = QUADRATURE_POINT
        inputs = {
            't': t, 'x': x, 'm': QUADRATURE_MASS, 'eps': QUADRATURE_EPS,
            'alpha': QUADRATURE_ALPHA, 'cutoff': cutoff, 'grid': grid,
        }

        start = time.perf_counter()
        einstein = propagator_quadrature_1p1(t, x, QUADRATURE_MASS, QUADRATURE_EPS, 0.0, cutoff, grid)
        resynced = propagator_quadrature_1p1(t, x, QUADRATURE_MASS, QUADRATURE_EPS, QUADRATURE_ALPHA, cutoff, grid)
        report.check(
            'quadrature', inputs,
            outputs={'einstein': einstein, 'resynced': resynced},
            gap=relative_gap(einstein, resynced), tolerance=tolerance,
            elapsed=time.perf_counter() - start,
        )

        start = time.perf_counter()
        mirrored = propagator_quadrature_1p1(-t, -x, QUADRATURE_MASS, QUADRATURE_EPS, 0.0, cutoff, grid)
        report.check(
            'quadrature_parity', inputs,
            outputs={'forward': einstein, 'mirrored': mirrored},
            gap=relative_gap(einstein, mirrored), tolerance=tolerance,
            elapsed=time.perf_counter() - start,
        )

        start = time.perf_counter()
        ratio = spacelike_decay_ratio(DECAY_MASS, QUADRATURE_EPS, DECAY_DISTANCE, cutoff, grid)
        midpoint_ratio = spacelike_decay_ratio(
            DECAY_MASS, QUADRATURE_EPS, DECAY_DISTANCE, cutoff, grid, propagator=propagator_quadrature_1p1
        )
        report.check(
            'quadrature_decay',
            {'m': DECAY_MASS, 'eps': QUADRATURE_EPS, 'distance': DECAY_DISTANCE, 'cutoff': cutoff, 'grid': grid},
            outputs={'ratio': ratio, 'midpoint_ratio': midpoint_ratio},
            gap=ratio, tolerance=decay_tolerance,
            elapsed=time.perf_counter() - start,
        )
