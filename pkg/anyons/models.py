from django.db import models
import uuid


class SimulationRun(models.Model):
    """Modelo para registrar cada execução de comando do cyon_lab"""
    COMMANDS = [
        ('spectrum', 'Espectro por setor'),
        ('reduce', 'Redução à banda mais baixa'),
        ('dirac', 'Colchetes de Dirac'),
        ('cyon', 'Grandezas de cyon'),
        ('duality', 'Mapa de dualidade'),
        ('sweep', 'Varredura de parâmetros'),
    ]

    STATUS_CHOICES = [
        ('pending', 'Pendente'),
        ('processing', 'Processando'),
        ('completed', 'Concluído'),
        ('failed', 'Falhou'),
    ]

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    command = models.CharField(max_length=20, choices=COMMANDS, verbose_name="Comando")
    config_path = models.CharField(max_length=500, verbose_name="Arquivo de Configuração")
    output_dir = models.CharField(max_length=500, verbose_name="Diretório de Saída")
    overrides = models.JSONField(default=dict, verbose_name="Substituições")
    options = models.JSONField(default=dict, verbose_name="Opções do Comando")
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default='pending', verbose_name="Status")

    started_at = models.DateTimeField(auto_now_add=True)
    completed_at = models.DateTimeField(blank=True, null=True)
    exit_code = models.IntegerField(blank=True, null=True, verbose_name="Código de Saída")
    error_message = models.TextField(blank=True, null=True, verbose_name="Mensagem de Erro")

    class Meta:
        verbose_name = "Execução"
        verbose_name_plural = "Execuções"
        ordering = ['-started_at']

    def __str__(self):
        return f"{self.command} - {self.config_path} ({self.status})"
