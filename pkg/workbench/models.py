from django.core.serializers.json import DjangoJSONEncoder
from django.db import models


class SuiteRun(models.Model):
    name = models.CharField(max_length=40)
    seed = models.BigIntegerField(default=0)
    checked = models.PositiveIntegerField(default=0)
    failed = models.PositiveIntegerField(default=0)
    passed = models.BooleanField(default=False)
    report = models.JSONField(default=dict, encoder=DjangoJSONEncoder)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at', '-id']

    def __str__(self):
        return f"{self.name} seed={self.seed}: {self.checked - self.failed}/{self.checked}"

    @classmethod
    def record(cls, report):
        """Store a finished suite report (without the per-instance listing)."""
        return cls.objects.create(
            name=report.name,
            seed=report.seed,
            checked=report.checked,
            failed=report.failed,
            passed=report.passed,
            report=report.as_dict(instances=False),
        )

    def summary(self):
        return {
            'id': self.id,
            'name': self.name,
            'seed': self.seed,
            'checked': self.checked,
            'failed': self.failed,
            'passed': self.passed,
            'created_at': self.created_at,
        }
