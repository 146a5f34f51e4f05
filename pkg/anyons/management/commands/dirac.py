from anyons.management.base import CyonLabCommand


class Command(CyonLabCommand):
    help = 'Gera o relatório simbólico dos colchetes de Dirac (dirac.json)'
    command_name = 'dirac'
