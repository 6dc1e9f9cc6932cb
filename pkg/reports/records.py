"""
Machine-readable verification reports.

A report is a list of records (operation, inputs digest, outputs, tolerance,
pass/fail, elapsed time), each stamped with the seed and tool version. Two
runs with the same flags, scenario and seed differ only in `elapsed`.
"""

import hashlib
import io
import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

COLUMNS = [
    'command', 'operation', 'inputs_digest', 'outputs', 'gap',
    'tolerance', 'passed', 'seed', 'version', 'elapsed',
]


def jsonable(value):
    """Plain JSON types for numpy scalars/arrays and complex numbers."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def digest(inputs):
    canonical = json.dumps(jsonable(inputs), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()[:16]


@dataclass
class ReportRecord:
    command: str
    operation: str
    inputs_digest: str
    outputs: dict
    gap: float
    tolerance: float
    passed: bool
    seed: str
    version: str
    elapsed: float = 0.0


@dataclass
class Report:
    command: str
    seed: int
    version: str
    records: list = field(default_factory=list)

    def check(self, operation, inputs, outputs, gap, tolerance, expect='below', elapsed=0.0):
        """
        Record one tolerance check. expect='below' passes when gap < tolerance,
        expect='above' passes when gap > tolerance (counterexamples).
        """
        passed = gap < tolerance if expect == 'below' else gap > tolerance
        record = ReportRecord(
            command=self.command,
            operation=operation,
            inputs_digest=digest(inputs),
            outputs=jsonable(outputs),
            gap=float(gap),
            tolerance=float(tolerance),
            passed=bool(passed),
            seed=str(self.seed),
            version=self.version,
            elapsed=float(elapsed),
        )
        self.records.append(record)
        log = logger.info if passed else logger.warning
        log(f"{self.command}/{operation}: gap={gap!r} tolerance={tolerance!r} passed={passed}")
        return record

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    def failures(self):
        return [r for r in self.records if not r.passed]

    def worst_failure(self):
        failures = self.failures()
        if not failures:
            return None
        # a failed 'above' check has its gap below tolerance; rank by how far off each is
        return max(failures, key=lambda r: abs(r.gap - r.tolerance) / max(r.tolerance, 1e-300))

    def to_frame(self):
        rows = [asdict(r) for r in self.records]
        frame = pd.DataFrame(rows, columns=COLUMNS)
        frame['outputs'] = [json.dumps(r.outputs, sort_keys=True) for r in self.records]
        return frame

    def render(self, output_format):
        if output_format == 'csv':
            buffer = io.StringIO()
            self.to_frame().to_csv(buffer, index=False, lineterminator='\n')
            return buffer.getvalue()
        return json.dumps([asdict(r) for r in self.records], indent=2, sort_keys=True) + '\n'


TEXT_COLUMNS = ['command', 'operation', 'inputs_digest', 'outputs', 'seed', 'version']


def read_report_csv(path_or_buffer):
    """Parse an emitted report; re-rendering the frame gives the same bytes."""
    return pd.read_csv(
        path_or_buffer,
        dtype={column: str for column in TEXT_COLUMNS},
        float_precision='round_trip',
    )
