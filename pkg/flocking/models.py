from django.db import models
import uuid


class SimulationRun(models.Model):
    """Track one invocation of the flock command"""
    VERB_CHOICES = [
        ('run', 'Single Scenario'),
        ('sweep', 'Parameter Sweep'),
        ('analyze', 'Oscillation Analysis'),
        ('flowfield', 'Optic-Flow Profile'),
        ('noisebound', 'Noise Bound'),
    ]
    STATUS_CHOICES = [
        ('pending', 'Pending'),
        ('running', 'Running'),
        ('completed', 'Completed'),
        ('failed', 'Failed'),
    ]

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    verb = models.CharField(max_length=20, choices=VERB_CHOICES)
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default='pending')
    config_text = models.TextField(blank=True, help_text="Scenario document as read from disk")
    overrides = models.JSONField(default=list, help_text="key=value overrides given on the command line")
    seed = models.CharField(max_length=20, blank=True, help_text="Scenario seed, unsigned 64-bit, stored as text")
    output_dir = models.CharField(max_length=500, blank=True)
    summary = models.JSONField(default=dict, help_text="Headline results of the run")
    error_message = models.TextField(blank=True)
    started_at = models.DateTimeField(auto_now_add=True)
    completed_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        ordering = ['-started_at']

    def __str__(self):
        return f"{self.get_verb_display()} {self.id} - {self.status}"


class RunLog(models.Model):
    """Log the steps of a run"""
    run = models.ForeignKey(SimulationRun, on_delete=models.CASCADE, related_name='logs')
    step = models.CharField(max_length=100)
    message = models.TextField()
    level = models.CharField(max_length=20, choices=[
        ('debug', 'Debug'),
        ('info', 'Info'),
        ('warning', 'Warning'),
        ('error', 'Error'),
    ], default='info')
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['created_at', 'id']

    def __str__(self):
        return f"{self.run.id} - {self.step}: {self.message}"
