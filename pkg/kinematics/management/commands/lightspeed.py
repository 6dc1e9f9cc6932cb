"""
One-way light speeds in a given convention.

Usage:
    python synchrony.py lightspeed --alpha 0.5
    python synchrony.py lightspeed --alpha 0.2,0.1,0 --direction 1,1,0

The direction is normalized before use and printed back. The round trip
over unit length is 2.0 in every convention.
"""

import json

import numpy as np
from django.core.management.base import BaseCommand, CommandError

from kinematics.events import DegenerateConventionError
from metric.tensors import directional_light_speed, slowness
from reports.serializers import LightspeedFlagsSerializer
from reports.utils import EXIT_DEGENERATE, validate_or_fail


class Command(BaseCommand):
    help = 'Print forward/backward one-way light speeds and the unit round-trip time'

    def add_arguments(self, parser):
        parser.add_argument(
            '--alpha',
            type=str,
            help='Resynchronization vector a = alpha*c: "a" or "ax,ay,az"'
        )
        parser.add_argument(
            '--direction',
            type=str,
            help='Direction of propagation "nx,ny,nz" (default: 1,0,0)'
        )

    def handle(self, *args, **options):
        data = {key: options[key] for key in ('alpha', 'direction') if options.get(key) is not None}
        flags = validate_or_fail(LightspeedFlagsSerializer, data)

        a = flags['alpha']
        direction = np.array(flags['direction'], dtype=float)
        n = direction / np.linalg.norm(direction)

        try:
            forward = directional_light_speed(n, a)
            backward = directional_light_speed(-n, a)
        except DegenerateConventionError as e:
            raise CommandError(f"degenerate direction: {e}", returncode=EXIT_DEGENERATE)

        result = {
            'alpha': list(a),
            'direction': [float(c) for c in n],
            'forward': forward,
            'backward': backward,
            'round_trip_time': slowness(n, a) + slowness(-n, a),
        }
        self.stdout.write(json.dumps(result))
