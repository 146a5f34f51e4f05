import json
import math
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand

from anyons.exceptions import ConfigError
from anyons.serializers import load_config

DEFAULT_CONFIGS = {
    'standard_natural.json': {
        'kind': 'MagneticHMW',
        'lambda': 0.6 * math.pi,
        'rho': 2.0,
        'm': 1.0,
        'd_or_mu': 1.0,
        'K': 1.0,
        'natural_units': True,
    },
    'ac_natural.json': {
        'kind': 'ElectricAC',
        'lambda': 0.6 * math.pi,
        'rho': 2.0,
        'm': 1.0,
        'd_or_mu': 1.0,
        'K': 1.0,
        'natural_units': True,
    },
}


class Command(BaseCommand):
    help = 'Cria as configurações padrão em unidades naturais (alpha = 0.3, omega_c = 2, omega_0 = 1)'

    def add_arguments(self, parser):
        parser.add_argument('--out', type=str, default=None, help='Diretório de destino')
        parser.add_argument('--force', action='store_true', help='Sobrescrever arquivos existentes')

    def handle(self, *args, **kwargs):
        out_dir = Path(kwargs['out'] or Path(settings.BASE_DIR) / 'configs')
        out_dir.mkdir(parents=True, exist_ok=True)

        for filename, document in DEFAULT_CONFIGS.items():
            path = out_dir / filename
            if path.exists() and not kwargs['force']:
                self.stdout.write(f'Configuração já existe: {path}')
                continue
            try:
                load_config(document)
            except ConfigError as e:
                self.stdout.write(self.style.ERROR(f'Erro: {str(e)}'))
                continue
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(document, f, indent=2, sort_keys=True)
                f.write('\n')
            self.stdout.write(self.style.SUCCESS(f'Configuração criada: {path}'))
