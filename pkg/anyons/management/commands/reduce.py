from anyons.management.base import CyonLabCommand, add_reduce_arguments, reduce_options


class Command(CyonLabCommand):
    help = 'Estuda a convergência da projeção na banda mais baixa (reduction.csv e reduction.json)'
    command_name = 'reduce'

    def add_command_arguments(self, parser):
        add_reduce_arguments(parser)

    def build_options(self, kwargs):
        return reduce_options(kwargs)
