from django.db import models, transaction


class VerificationRecord(models.Model):
    """
    One report record, kept when a command runs with --record.
    Seeds are stored as text: they are unsigned 64-bit.
    """
    command = models.CharField(max_length=32)
    operation = models.CharField(max_length=64)
    inputs_digest = models.CharField(max_length=64)
    outputs = models.JSONField(default=dict)
    gap = models.FloatField()
    tolerance = models.FloatField()
    passed = models.BooleanField()
    seed = models.CharField(max_length=20)
    version = models.CharField(max_length=20)
    elapsed = models.FloatField(default=0)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        verbose_name = 'Verification Record'
        verbose_name_plural = 'Verification Records'
        indexes = [
            models.Index(fields=['command', 'operation'], name='reports_command_op_idx'),
        ]

    def __str__(self):
        status = 'pass' if self.passed else 'FAIL'
        return f"{self.command}/{self.operation} [{status}] gap={self.gap:.3e}"

    @classmethod
    def record_report(cls, report):
        """Save every record of a Report in one transaction."""
        rows = [
            cls(
                command=r.command,
                operation=r.operation,
                inputs_digest=r.inputs_digest,
                outputs=r.outputs,
                gap=r.gap,
                tolerance=r.tolerance,
                passed=r.passed,
                seed=r.seed,
                version=r.version,
                elapsed=r.elapsed,
            )
            for r in report.records
        ]
        with transaction.atomic():
            return cls.objects.bulk_create(rows)
