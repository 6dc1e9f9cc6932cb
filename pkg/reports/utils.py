import json
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import CommandError

from .serializers import ScenarioFileSerializer

logger = logging.getLogger(__name__)

EXIT_TOLERANCE = 1
EXIT_INPUT = 2
EXIT_DEGENERATE = 3


def format_errors(errors, prefix=''):
    """Flatten a DRF errors dict into 'field.sub: message' lines."""
    lines = []
    if isinstance(errors, dict):
        for key, value in errors.items():
            name = prefix if key == 'non_field_errors' else (f"{prefix}.{key}" if prefix else str(key))
            lines.extend(format_errors(value, name))
    elif isinstance(errors, list):
        for i, value in enumerate(errors):
            if isinstance(value, (dict, list)):
                lines.extend(format_errors(value, f"{prefix}[{i}]"))
            else:
                lines.append(f"{prefix or 'input'}: {value}")
    else:
        lines.append(f"{prefix or 'input'}: {errors}")
    return lines


def validate_or_fail(serializer_class, data):
    """Validated data, or an exit-code-2 CommandError naming each bad field."""
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        message = '; '.join(format_errors(serializer.errors))
        logger.warning(f"invalid input: {message}")
        raise CommandError(f"invalid input: {message}", returncode=EXIT_INPUT)
    return serializer.validated_data


def resolve_scenario_path(path):
    """A path as given, or a bundled scenario name such as 'singlet_chsh.json'."""
    candidate = Path(path)
    if candidate.exists():
        return candidate
    bundled = Path(settings.SYNCHRONY_SCENARIO_DIR) / path
    if bundled.exists():
        return bundled
    raise CommandError(f"scenario: file not found: {path}", returncode=EXIT_INPUT)


def load_scenario_file(path):
    scenario_path = resolve_scenario_path(path)
    try:
        with open(scenario_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise CommandError(f"scenario: invalid JSON in {scenario_path}: {e}", returncode=EXIT_INPUT)
    if not isinstance(data, dict):
        raise CommandError("scenario: top level must be a JSON object", returncode=EXIT_INPUT)
    logger.info(f"loaded scenario file {scenario_path}")
    return validate_or_fail(ScenarioFileSerializer, data)


def resolve_seed(seed_option):
    """--seed wins over SYNCHRONY_SEED."""
    return seed_option if seed_option is not None else settings.SYNCHRONY_SEED


def output_options(options, scenario=None):
    """(format, path) from flags, falling back to the scenario's output section."""
    section = (scenario or {}).get('output', {})
    output_format = options.get('output') or section.get('format') or 'json'
    path = options.get('path') or section.get('path')
    return output_format, path


def write_text(text, path, stdout):
    if path:
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
        logger.info(f"wrote {path}")
    else:
        stdout.write(text, ending='')


def emit_report(command, report, options, scenario=None, expect_fail=False):
    """
    Write the report, optionally persist it, and turn failures into exit 1.
    With expect_fail the verdict is inverted: a run that passes every check
    is the failure.
    """
    output_format, path = output_options(options, scenario)
    write_text(report.render(output_format), path, command.stdout)

    if options.get('record'):
        from .models import VerificationRecord

        saved = VerificationRecord.record_report(report)
        command.stderr.write(command.style.SUCCESS(f"recorded {len(saved)} rows"))

    worst = report.worst_failure()
    failed = worst is not None
    if failed:
        command.stderr.write(
            f"worst gap: {worst.operation} gap={worst.gap!r} tolerance={worst.tolerance!r}"
        )
    if failed != expect_fail:
        if expect_fail:
            raise CommandError("expected a tolerance failure but every check passed", returncode=EXIT_TOLERANCE)
        raise CommandError(
            f"{len(report.failures())} of {len(report.records)} checks failed", returncode=EXIT_TOLERANCE
        )
    status = 'expected failure observed' if expect_fail else 'all checks passed'
    command.stderr.write(command.style.SUCCESS(f"{status} ({len(report.records)} checks)"))
