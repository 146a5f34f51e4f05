from anyons.management.base import (
    CyonLabCommand, add_cyon_arguments, add_reduce_arguments, add_spectrum_arguments,
    cyon_options, reduce_options, spectrum_options,
)
from anyons.runner import EXECUTORS
from anyons.utils import ConfigFileProcessor

INNER_OPTIONS = {
    'spectrum': spectrum_options,
    'reduce': reduce_options,
    'cyon': cyon_options,
}


class Command(CyonLabCommand):
    help = 'Varre uma grade de parâmetros executando um comando em cada ponto (index.csv)'
    command_name = 'sweep'

    def add_command_arguments(self, parser):
        parser.add_argument('--grid', type=str, action='append', default=[],
                            help='Eixo key=start:stop:count (repetível)')
        parser.add_argument('--command', type=str, default='spectrum', choices=sorted(EXECUTORS),
                            help='Comando executado em cada ponto')
        add_spectrum_arguments(parser)
        add_reduce_arguments(parser)
        add_cyon_arguments(parser)

    def build_options(self, kwargs):
        command = kwargs['command']
        options = {
            'command': command,
            'grid': ConfigFileProcessor.parse_grid(kwargs['grid']),
        }
        if command in INNER_OPTIONS:
            options.update(INNER_OPTIONS[command](kwargs))
        return options
