# Generated by Django 5.2.8 on 2026-10-17 09:00

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='VerificationRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(max_length=32)),
                ('operation', models.CharField(max_length=64)),
                ('inputs_digest', models.CharField(max_length=64)),
                ('outputs', models.JSONField(default=dict)),
                ('gap', models.FloatField()),
                ('tolerance', models.FloatField()),
                ('passed', models.BooleanField()),
                ('seed', models.CharField(max_length=20)),
                ('version', models.CharField(max_length=20)),
                ('elapsed', models.FloatField(default=0)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Verification Record',
                'verbose_name_plural': 'Verification Records',
                'indexes': [models.Index(fields=['command', 'operation'], name='reports_command_op_idx')],
            },
        ),
    ]
