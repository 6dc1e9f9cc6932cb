"""
Input validation for scenario files and command-line flags.

Every command pushes its raw input through one of these serializers; the
serializer's `errors` dict names the offending field, which the command
turns into an exit-code-2 diagnostic.
"""

import numpy as np
from rest_framework import serializers

from kinematics.events import EINSTEIN
from quantum.measurement import InvalidMeasurementError, MeasurementSetting
from quantum.operators import DimensionMismatchError
from quantum.scenario import QuantumScenario, ScenarioError

MAX_SEED = 2 ** 64 - 1

SWEEP_OPS = ['lightspeed', 'transform', 'epsilon', 'interval', 'amplitude', 'nosignal']


def _number(value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise serializers.ValidationError(f"expected a number, got {value!r}")
    if not np.isfinite(value):
        raise serializers.ValidationError("numbers must be finite")
    return float(value)


def _complex(entry):
    """[re, im] pair or a bare real number."""
    if isinstance(entry, (list, tuple)):
        if len(entry) != 2:
            raise serializers.ValidationError(f"complex entries are [re, im] pairs, got {entry!r}")
        return complex(_number(entry[0]), _number(entry[1]))
    return complex(_number(entry), 0.0)


class ComplexVectorField(serializers.Field):
    """[[re, im], ...]"""

    def to_internal_value(self, data):
        if not isinstance(data, list) or not data:
            raise serializers.ValidationError("expected a non-empty list of [re, im] pairs")
        return np.array([_complex(entry) for entry in data], dtype=complex)

    def to_representation(self, value):
        return [[float(z.real), float(z.imag)] for z in np.asarray(value, dtype=complex)]


class ComplexMatrixField(serializers.Field):
    """[[[re, im], ...], ...]; rows must all have the same length."""

    def to_internal_value(self, data):
        if not isinstance(data, list) or not data or not all(isinstance(row, list) for row in data):
            raise serializers.ValidationError("expected a non-empty list of rows")
        widths = {len(row) for row in data}
        if len(widths) != 1:
            raise serializers.ValidationError(f"matrix is not rectangular (row lengths {sorted(widths)})")
        return np.array([[_complex(entry) for entry in row] for row in data], dtype=complex)

    def to_representation(self, value):
        return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(value, dtype=complex)]


class NumberListField(serializers.Field):
    """A JSON list of numbers, or the flag form "0.1,0.2,0.3"."""

    def __init__(self, lengths=(1, 3), pad_to=3, **kwargs):
        self.lengths = lengths
        self.pad_to = pad_to
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        if isinstance(data, str):
            try:
                values = [float(part) for part in data.split(',')]
            except ValueError:
                raise serializers.ValidationError(f"expected comma-separated numbers, got {data!r}")
        elif isinstance(data, (int, float)) and not isinstance(data, bool):
            values = [data]
        elif isinstance(data, list):
            values = data
        else:
            raise serializers.ValidationError(f"expected numbers, got {data!r}")
        values = [_number(v) for v in values]
        if len(values) not in self.lengths:
            raise serializers.ValidationError(
                f"expected {' or '.join(str(n) for n in self.lengths)} components, got {len(values)}"
            )
        if self.pad_to and len(values) < self.pad_to:
            values = values + [0.0] * (self.pad_to - len(values))
        return tuple(values)

    def to_representation(self, value):
        return list(value)


class SeedField(serializers.IntegerField):
    def __init__(self, **kwargs):
        kwargs.setdefault('min_value', 0)
        kwargs.setdefault('max_value', MAX_SEED)
        super().__init__(**kwargs)


# --- scenario file sections ---------------------------------------------------

class SyncEntrySerializer(serializers.Serializer):
    label = serializers.CharField(max_length=64)
    alpha = NumberListField()


class EventSerializer(serializers.Serializer):
    name = serializers.CharField(required=False, default='')
    t = serializers.FloatField()
    x = serializers.FloatField()
    y = serializers.FloatField(default=0.0)
    z = serializers.FloatField(default=0.0)
    convention = serializers.CharField(default=EINSTEIN)
    to = serializers.CharField(required=False)


class KinematicsSectionSerializer(serializers.Serializer):
    events = EventSerializer(many=True, required=False, default=list)
    velocities = serializers.ListField(child=serializers.FloatField(), required=False, default=list)
    lengths = serializers.ListField(child=serializers.FloatField(), required=False, default=list)

    def validate_lengths(self, value):
        if any(length <= 0.0 for length in value):
            raise serializers.ValidationError("round-trip lengths must be positive")
        return value


class MeasurementSerializer(serializers.Serializer):
    """One of: a Pauli axis, an in-plane spin angle, or basis vectors as matrix columns."""
    basis = serializers.ChoiceField(choices=['x', 'y', 'z', 'computational'], required=False)
    angle = serializers.FloatField(required=False)
    matrix = ComplexMatrixField(required=False)

    def validate(self, attrs):
        given = [key for key in ('basis', 'angle', 'matrix') if key in attrs]
        if len(given) != 1:
            raise serializers.ValidationError("give exactly one of basis, angle, matrix")
        return attrs


def build_measurement(spec, dim):
    if 'angle' in spec:
        return MeasurementSetting.spin(spec['angle'])
    if 'matrix' in spec:
        return MeasurementSetting.from_basis(spec['matrix'])
    if spec['basis'] == 'computational':
        return MeasurementSetting.computational(dim)
    return MeasurementSetting.pauli(spec['basis'])


class ChshSerializer(serializers.Serializer):
    angles_a = serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2)
    angles_b = serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2)
    expected = serializers.FloatField(default=2.0 * np.sqrt(2.0))


class QuantumSectionSerializer(serializers.Serializer):
    name = serializers.CharField(required=False, default='scenario')
    dim_a = serializers.IntegerField(min_value=1)
    dim_b = serializers.IntegerField(min_value=1)
    h_a = ComplexMatrixField()
    h_b = ComplexMatrixField()
    h_int = ComplexMatrixField(required=False, allow_null=True, default=None)
    o_a = ComplexMatrixField()
    o_b = ComplexMatrixField()
    t_in = serializers.FloatField()
    t_a = serializers.FloatField()
    t_b = serializers.FloatField()
    t_out = serializers.FloatField()
    psi_in = ComplexVectorField()
    psi_out = ComplexVectorField()
    remote = MeasurementSerializer(required=False)
    local = MeasurementSerializer(required=False)
    chsh = ChshSerializer(required=False)

    def validate(self, attrs):
        dim_a, dim_b = attrs['dim_a'], attrs['dim_b']
        expected = {
            'h_a': (dim_a, dim_a), 'o_a': (dim_a, dim_a),
            'h_b': (dim_b, dim_b), 'o_b': (dim_b, dim_b),
            'h_int': (dim_a * dim_b, dim_a * dim_b),
            'psi_in': (dim_a * dim_b,), 'psi_out': (dim_a * dim_b,),
        }
        errors = {}
        for key, shape in expected.items():
            value = attrs.get(key)
            if value is not None and value.shape != shape:
                errors[key] = f"expected shape {shape} for dims {dim_a}x{dim_b}, got {value.shape}"
        if errors:
            raise serializers.ValidationError(errors)

        try:
            attrs['scenario'] = QuantumScenario(
                dim_a=dim_a, dim_b=dim_b,
                h_a=attrs['h_a'], h_b=attrs['h_b'], h_int=attrs['h_int'],
                o_a=attrs['o_a'], o_b=attrs['o_b'],
                psi_in=attrs['psi_in'], psi_out=attrs['psi_out'],
                t_in=attrs['t_in'], t_a=attrs['t_a'], t_b=attrs['t_b'], t_out=attrs['t_out'],
                name=attrs['name'],
            )
            attrs['remote_setting'] = build_measurement(attrs['remote'], dim_a) if 'remote' in attrs else None
            attrs['local_setting'] = build_measurement(
                attrs.get('local', {'basis': 'computational'}), dim_b
            )
        except (ScenarioError, DimensionMismatchError, InvalidMeasurementError) as e:
            raise serializers.ValidationError(str(e))
        return attrs


class PropagatorSectionSerializer(serializers.Serializer):
    masses = serializers.ListField(child=serializers.FloatField(min_value=0.0), default=lambda: [0.0, 1.0])
    epsilons = serializers.ListField(child=serializers.FloatField(min_value=1e-300), default=lambda: [1e-3])
    samples = serializers.IntegerField(min_value=1, default=1000)
    seed = SeedField(required=False)


class OutputSectionSerializer(serializers.Serializer):
    format = serializers.ChoiceField(choices=['csv', 'json'], default='json')
    path = serializers.CharField(required=False)


class ScenarioFileSerializer(serializers.Serializer):
    sync = SyncEntrySerializer(many=True, required=False, default=list)
    kinematics = KinematicsSectionSerializer(required=False)
    quantum = QuantumSectionSerializer(required=False)
    propagator = PropagatorSectionSerializer(required=False)
    output = OutputSectionSerializer(required=False)

    def validate(self, attrs):
        labels = [entry['label'] for entry in attrs['sync']]
        duplicates = {label for label in labels if labels.count(label) > 1}
        if duplicates:
            raise serializers.ValidationError({'sync': f"duplicate labels: {sorted(duplicates)}"})
        known = set(labels) | {EINSTEIN}
        for i, event in enumerate(attrs.get('kinematics', {}).get('events', [])):
            for key in ('convention', 'to'):
                label = event.get(key)
                if label is not None and label not in known:
                    raise serializers.ValidationError(
                        {'kinematics': f"events[{i}].{key}: convention '{label}' is not defined in sync"}
                    )
        return attrs


# --- command-line flags ------------------------------------------------------

class TransformFlagsSerializer(serializers.Serializer):
    t = serializers.FloatField()
    x = serializers.FloatField()
    y = serializers.FloatField(default=0.0)
    z = serializers.FloatField(default=0.0)
    from_alpha = NumberListField(default=(0.0, 0.0, 0.0))
    to_alpha = NumberListField(default=(0.0, 0.0, 0.0))


class LightspeedFlagsSerializer(serializers.Serializer):
    alpha = NumberListField()
    direction = NumberListField(lengths=(3,), default=(1.0, 0.0, 0.0))

    def validate_direction(self, value):
        if not any(value):
            raise serializers.ValidationError("direction must be non-zero")
        return value


class PropagatorFlagsSerializer(serializers.Serializer):
    samples = serializers.IntegerField(min_value=1)
    seed = SeedField()
    cutoff = serializers.FloatField(min_value=1e-12)
    grid = serializers.IntegerField(min_value=64)
    alpha = NumberListField(required=False)


class QuantumFlagsSerializer(serializers.Serializer):
    seed = SeedField()
    trials = serializers.IntegerField(min_value=0)


class SweepFlagsSerializer(serializers.Serializer):
    alpha_min = serializers.FloatField()
    alpha_max = serializers.FloatField()
    steps = serializers.IntegerField(min_value=2)
    op = serializers.ChoiceField(
        choices=SWEEP_OPS,
        error_messages={'invalid_choice': f'"{{input}}" is not a valid op; valid ops: {", ".join(SWEEP_OPS)}'},
    )
    seed = SeedField()

    def validate(self, attrs):
        if attrs['alpha_min'] > attrs['alpha_max']:
            raise serializers.ValidationError({'alpha_min': "must not exceed alpha_max"})
        return attrs
