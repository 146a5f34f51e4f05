import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from django.utils import timezone

from anyons.band_reduction import FILAMENT_MODES
from anyons.exceptions import CyonLabError
from anyons.runner import RunManifest, run
from anyons.serializers import SimulationRunSerializer
from anyons.utils import ConfigFileProcessor

logger = logging.getLogger(__name__)


def add_spectrum_arguments(parser):
    parser.add_argument('--sectors', type=str, default='-5..5', help='Setores l na forma A..B')
    parser.add_argument('--levels', type=int, default=8, help='Níveis por setor')


def add_reduce_arguments(parser):
    parser.add_argument('--schedule', type=str, default='0.1,0.01,0.001',
                        help='Valores decrescentes de mu = omega_0/omega_c')
    parser.add_argument('--band-size', type=int, default=None, help='Estados da banda projetada')
    parser.add_argument('--filament', type=str, default='gauge', choices=FILAMENT_MODES,
                        help='Tratamento do filamento na banda')


def add_cyon_arguments(parser):
    parser.add_argument('--lambda-dot', type=float, default=None,
                        help='Derivada temporal da densidade de linha')


def spectrum_options(kwargs):
    return {
        'sectors': ConfigFileProcessor.parse_sectors(kwargs['sectors']),
        'levels': kwargs['levels'],
    }


def reduce_options(kwargs):
    options = {
        'schedule': ConfigFileProcessor.parse_schedule(kwargs['schedule']),
        'filament': kwargs['filament'],
    }
    if kwargs.get('band_size') is not None:
        options['band_size'] = kwargs['band_size']
    return options


def cyon_options(kwargs):
    if kwargs.get('lambda_dot') is None:
        return {}
    return {'lambda_dot': kwargs['lambda_dot']}


class CyonLabCommand(BaseCommand):
    """
    Base dos comandos do cyon_lab: --config, --out e --set comuns, execução
    registrada via runner.run e erros traduzidos em CommandError com o
    código de saída do erro (2 configuração, 3 numérico, 4 degenerescência).
    """
    command_name = None

    def add_arguments(self, parser):
        parser.add_argument('--config', type=str, required=True, help='Arquivo JSON de configuração')
        parser.add_argument('--out', type=str, default=None, help='Diretório de saída')
        parser.add_argument('--set', type=str, action='append', default=[], dest='set',
                            help='Substituição key=value (repetível)')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def build_options(self, kwargs):
        return {}

    def default_output_dir(self) -> Path:
        stamp = timezone.now().strftime('%Y%m%dT%H%M%S%f')
        return Path(settings.CYONLAB_OUTPUT_ROOT) / f"{self.command_name}-{stamp}"

    def handle(self, *args, **kwargs):
        try:
            manifest = RunManifest(
                command=self.command_name,
                config_path=kwargs['config'],
                output_dir=kwargs['out'] or self.default_output_dir(),
                overrides=ConfigFileProcessor.parse_overrides(kwargs['set']),
                options=self.build_options(kwargs),
            )
            self.stdout.write(f'Executando {self.command_name} com {manifest.config_path}...')
            outcome = run(manifest)
        except CyonLabError as e:
            self.stderr.write(self.style.ERROR(f'Erro: {str(e)}'))
            raise CommandError(str(e), returncode=e.exit_code)

        record = SimulationRunSerializer(outcome.run).data
        self.stdout.write(f"Execução {record['id']}: {record['status']} (código {record['exit_code']})")
        for path in outcome.artifacts:
            self.stdout.write(f'  {path}')
        self.stdout.write(self.style.SUCCESS(
            f'{self.command_name} concluído! Artefatos em {manifest.output_dir}'
        ))
