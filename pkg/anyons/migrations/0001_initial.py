# Generated by Django 5.2.6 on 2026-10-18 10:02

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
                ('command', models.CharField(choices=[('spectrum', 'Espectro por setor'), ('reduce', 'Redução à banda mais baixa'), ('dirac', 'Colchetes de Dirac'), ('cyon', 'Grandezas de cyon'), ('duality', 'Mapa de dualidade'), ('sweep', 'Varredura de parâmetros')], max_length=20, verbose_name='Comando')),
                ('config_path', models.CharField(max_length=500, verbose_name='Arquivo de Configuração')),
                ('output_dir', models.CharField(max_length=500, verbose_name='Diretório de Saída')),
                ('overrides', models.JSONField(default=dict, verbose_name='Substituições')),
                ('options', models.JSONField(default=dict, verbose_name='Opções do Comando')),
                ('status', models.CharField(choices=[('pending', 'Pendente'), ('processing', 'Processando'), ('completed', 'Concluído'), ('failed', 'Falhou')], default='pending', max_length=20, verbose_name='Status')),
                ('started_at', models.DateTimeField(auto_now_add=True)),
                ('completed_at', models.DateTimeField(blank=True, null=True)),
                ('exit_code', models.IntegerField(blank=True, null=True, verbose_name='Código de Saída')),
                ('error_message', models.TextField(blank=True, null=True, verbose_name='Mensagem de Erro')),
            ],
            options={
                'verbose_name': 'Execução',
                'verbose_name_plural': 'Execuções',
                'ordering': ['-started_at'],
            },
        ),
    ]
