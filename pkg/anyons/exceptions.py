"""Hierarquia de erros do cyon_lab.

Cada erro carrega o nome do módulo que o levantou e o código de saída
usado pelos comandos de linha de comando.
"""


class CyonLabError(Exception):
    """Erro base; renderiza como ``[modulo] mensagem``"""
    exit_code = 1

    def __init__(self, message: str, module: str = 'anyons'):
        super().__init__(message)
        self.message = message
        self.module = module

    def __str__(self):
        return f"[{self.module}] {self.message}"


class ConfigError(CyonLabError):
    """Configuração inválida, tipo de campo incompatível ou override desconhecido"""
    exit_code = 2

    def __init__(self, message: str, module: str = 'anyons', key: str = None):
        super().__init__(message, module=module)
        self.key = key


class NumericalError(CyonLabError):
    exit_code = 3


class SingularPointError(NumericalError):
    """Campo do filamento avaliado na origem"""


class GridResolutionError(NumericalError):
    """Malha grossa demais ou curta demais para os níveis pedidos"""


class EigensolverError(NumericalError):
    pass


class BandGapError(NumericalError):
    """A banda mais baixa não está isolada espectralmente"""

    def __init__(self, message: str, mu: float, gap: float, module: str = 'band_reduction'):
        super().__init__(message, module=module)
        self.mu = mu
        self.gap = gap


class InsufficientBandError(NumericalError):
    pass


class ConstraintDegeneracyError(CyonLabError):
    """Matriz de vínculos singular (rho = 0): não há redução simplética"""
    exit_code = 4


class ReductionUndefinedError(ConstraintDegeneracyError):
    pass
