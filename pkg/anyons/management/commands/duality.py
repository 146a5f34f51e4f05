from anyons.management.base import CyonLabCommand


class Command(CyonLabCommand):
    help = 'Aplica a dualidade: dr1 numa configuração AC, dr2 numa HMW (dual_config.json)'
    command_name = 'duality'
