from anyons.management.base import CyonLabCommand, add_cyon_arguments, cyon_options


class Command(CyonLabCommand):
    help = 'Calcula spin, termo de superfície e taxa de variação do spin (cyon.json)'
    command_name = 'cyon'

    def add_command_arguments(self, parser):
        add_cyon_arguments(parser)

    def build_options(self, kwargs):
        return cyon_options(kwargs)
