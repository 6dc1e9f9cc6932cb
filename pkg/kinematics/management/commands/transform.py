"""
Re-express an event in another synchronization convention.

Usage:
    python synchrony.py transform --t 1 --x 1 --from-alpha 0 --to-alpha -0.4
    python synchrony.py transform --scenario photon_0p6.json

Inline flags print one event. A scenario file prints an object with every
event of its `kinematics` section moved to the convention named by its `to`
label (Einstein when absent), plus, under every `sync` convention, the
one-way speed of each listed x-velocity and the out-and-back light time
over each listed length.

Transforming there and back restores t bit for bit when the intermediate
sums are exactly representable (the documented examples); otherwise the
round trip is within a few ulps.
"""

import json
import logging

from django.core.management.base import BaseCommand, CommandError

from kinematics.events import EINSTEIN, ConventionRegistry, DegenerateConventionError, Event4, SyncParam
from kinematics.transforms import one_way_velocity, resynchronize, round_trip_time_signed
from reports.serializers import TransformFlagsSerializer
from reports.utils import EXIT_INPUT, load_scenario_file, validate_or_fail

logger = logging.getLogger(__name__)


def flag_sync(a):
    if all(c == 0.0 for c in a):
        return SyncParam.einstein()
    return SyncParam(a, label='a=' + ','.join(repr(c) for c in a))


class Command(BaseCommand):
    help = 'Resynchronize an event: t\' = t - a_from.x + a_to.x, x\' = x'

    def add_arguments(self, parser):
        parser.add_argument('--t', type=str, help='Coordinate time of the event')
        parser.add_argument('--x', type=str, help='x coordinate')
        parser.add_argument('--y', type=str, help='y coordinate (default: 0)')
        parser.add_argument('--z', type=str, help='z coordinate (default: 0)')
        parser.add_argument(
            '--from-alpha',
            type=str,
            help='Convention the event is given in: "a" or "ax,ay,az" (default: Einstein)'
        )
        parser.add_argument(
            '--to-alpha',
            type=str,
            help='Target convention: "a" or "ax,ay,az" (default: Einstein)'
        )
        parser.add_argument(
            '--scenario',
            type=str,
            help='Scenario file (or bundled scenario name) with a kinematics section'
        )

    def handle(self, *args, **options):
        if options.get('scenario'):
            result = self.transform_scenario(options['scenario'])
            self.stdout.write(json.dumps(result))
            return

        data = {
            key: options[key]
            for key in ('t', 'x', 'y', 'z', 'from_alpha', 'to_alpha')
            if options.get(key) is not None
        }
        flags = validate_or_fail(TransformFlagsSerializer, data)
        from_sync = flag_sync(flags['from_alpha'])
        to_sync = flag_sync(flags['to_alpha'])

        event = Event4(flags['t'], flags['x'], flags['y'], flags['z'], convention=from_sync.label)
        moved = resynchronize(event, from_sync, to_sync)
        logger.info(f"transform {event} -> {moved}")
        self.stdout.write(json.dumps(moved.to_dict()))

    def transform_scenario(self, path):
        scenario = load_scenario_file(path)
        registry = ConventionRegistry()
        for entry in scenario['sync']:
            registry.add(SyncParam(entry['alpha'], label=entry['label']))

        section = scenario.get('kinematics', {})
        events = section.get('events', [])
        velocities = section.get('velocities', [])
        lengths = section.get('lengths', [])
        if not (events or velocities or lengths):
            raise CommandError(
                "scenario: kinematics needs events, velocities or lengths", returncode=EXIT_INPUT
            )

        moved = []
        for spec in events:
            source = registry.resolve(spec['convention'])
            target = registry.resolve(spec.get('to', EINSTEIN))
            event = Event4(spec['t'], spec['x'], spec['y'], spec['z'], convention=source.label)
            result = resynchronize(event, source, target).to_dict()
            if spec['name']:
                result['name'] = spec['name']
            moved.append(result)

        return {
            'events': moved,
            'speeds': [speed_row(sync, v) for sync in registry for v in velocities],
            'round_trips': [round_trip_row(sync, length) for sync in registry for length in lengths],
        }


def speed_row(sync, v):
    """One-way speed of an Einstein x-velocity v under `sync`; None on a simultaneity surface."""
    row = {'convention': sync.label, 'v': v, 'one_way_velocity': None, 'degenerate': False}
    try:
        row['one_way_velocity'] = one_way_velocity(v, sync.a[0])
    except DegenerateConventionError:
        row['degenerate'] = True
    return row


def round_trip_row(sync, length):
    """Out along +x and back: the sum of signed leg durations, 2L whenever it is defined."""
    a = sync.a[0]
    row = {'convention': sync.label, 'length': length, 'round_trip_time': None, 'degenerate': False}
    try:
        row['round_trip_time'] = round_trip_time_signed(
            length, one_way_velocity(1.0, a), one_way_velocity(-1.0, a)
        )
    except DegenerateConventionError:
        row['degenerate'] = True
    return row
