# Generated by Django 5.2.5 on 2026-10-19 09:12

import django.db.models.deletion
import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SimulationRun',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('verb', models.CharField(choices=[('run', 'Single Scenario'), ('sweep', 'Parameter Sweep'), ('analyze', 'Oscillation Analysis'), ('flowfield', 'Optic-Flow Profile'), ('noisebound', 'Noise Bound')], max_length=20)),
                ('status', models.CharField(choices=[('pending', 'Pending'), ('running', 'Running'), ('completed', 'Completed'), ('failed', 'Failed')], default='pending', max_length=20)),
                ('config_text', models.TextField(blank=True, help_text='Scenario document as read from disk')),
                ('overrides', models.JSONField(default=list, help_text='key=value overrides given on the command line')),
                ('seed', models.CharField(blank=True, help_text='Scenario seed, unsigned 64-bit, stored as text', max_length=20)),
                ('output_dir', models.CharField(blank=True, max_length=500)),
                ('summary', models.JSONField(default=dict, help_text='Headline results of the run')),
                ('error_message', models.TextField(blank=True)),
                ('started_at', models.DateTimeField(auto_now_add=True)),
                ('completed_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'ordering': ['-started_at'],
            },
        ),
        migrations.CreateModel(
            name='RunLog',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('step', models.CharField(max_length=100)),
                ('message', models.TextField()),
                ('level', models.CharField(choices=[('debug', 'Debug'), ('info', 'Info'), ('warning', 'Warning'), ('error', 'Error')], default='info', max_length=20)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='logs', to='flocking.simulationrun')),
            ],
            options={
                'ordering': ['created_at', 'id'],
            },
        ),
    ]
