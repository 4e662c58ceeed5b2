from django.db import models


class KnownNegative(models.Model):
    """A manifold whose fundamental group is known not to be circularly orderable."""

    name = models.CharField(max_length=200, unique=True)
    identification = models.CharField(max_length=500)
    aliases = models.JSONField(default=list, blank=True)
    citation = models.TextField()

    class Meta:
        ordering = ["name"]

    def __str__(self):
        return f"{self.name} ({self.identification})"


class VerdictRecord(models.Model):
    """A stored query and the result document it produced."""

    subcommand = models.CharField(max_length=50)
    query = models.JSONField()
    result = models.JSONField()
    verdict = models.CharField(max_length=20, blank=True)
    created = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created"]

    def __str__(self):
        return f"{self.subcommand}: {self.verdict} ({self.created:%Y-%m-%d %H:%M})"
