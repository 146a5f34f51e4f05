from anyons.management.base import CyonLabCommand, add_spectrum_arguments, spectrum_options


class Command(CyonLabCommand):
    help = 'Calcula o espectro por setor de momento angular (spectrum.csv)'
    command_name = 'spectrum'

    def add_command_arguments(self, parser):
        add_spectrum_arguments(parser)

    def build_options(self, kwargs):
        return spectrum_options(kwargs)
