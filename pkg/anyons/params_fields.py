"""
Parâmetros físicos, campos das fontes e dualidade eletromagnética.

Convenção de orientação: epsilon_12 = +1 e ângulo polar crescendo no
sentido anti-horário. O potencial efetivo visto pelo dipolo é
a_i = g * epsilon_ij * F_j, com g = d/c^2 (HMW) ou g = -mu/c^2 (AC) e F o
campo total das fontes (filamento + volume).
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import sympy
from scipy import constants

from .exceptions import ConfigError, ConstraintDegeneracyError, SingularPointError

logger = logging.getLogger(__name__)

MODULE = 'params_fields'

CONFIG_KEYS = (
    'kind', 'lambda', 'rho', 'm', 'd_or_mu', 'K', 'c', 'hbar', 'eps0', 'mu0', 'natural_units',
)
REQUIRED_KEYS = ('kind', 'lambda', 'rho', 'm', 'd_or_mu', 'K')
NUMERIC_KEYS = ('lambda', 'rho', 'm', 'd_or_mu', 'K', 'c', 'hbar', 'eps0', 'mu0')


class FieldKind(str, Enum):
    MAGNETIC_HMW = 'MagneticHMW'
    ELECTRIC_AC = 'ElectricAC'


def _require_finite(name: str, value: float):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"'{name}' deve ser um número finito, recebido {value!r}", module=MODULE, key=name)


@dataclass(frozen=True)
class SystemParams:
    """Constantes da partícula e da armadilha (m, K, c, hbar)"""
    m: float
    K: float
    c: float = constants.c
    hbar: float = constants.hbar
    natural_units: bool = False

    def __post_init__(self):
        for name in ('m', 'K', 'c', 'hbar'):
            _require_finite(name, getattr(self, name))
        for name in ('m', 'c', 'hbar'):
            if getattr(self, name) <= 0:
                raise ConfigError(f"'{name}' deve ser positivo", module=MODULE, key=name)
        if self.K < 0:
            raise ConfigError("'K' não pode ser negativo", module=MODULE, key='K')

    @property
    def omega_0(self) -> float:
        return math.sqrt(self.K / self.m)

    def with_mass(self, m: float) -> 'SystemParams':
        return replace(self, m=m)


@dataclass(frozen=True)
class FieldConfig:
    """
    Fontes do campo: filamento (lam) e densidade de volume (rho).

    Para MagneticHMW, dipole é o momento elétrico d; para ElectricAC é o
    momento magnético mu. O momento tem sinal porque as dualidades o invertem.
    """
    kind: FieldKind
    lam: float
    rho: float
    dipole: float
    eps0: float = constants.epsilon_0
    mu0: float = constants.mu_0

    def __post_init__(self):
        if not isinstance(self.kind, FieldKind):
            try:
                object.__setattr__(self, 'kind', FieldKind(self.kind))
            except ValueError:
                raise ConfigError(
                    f"'kind' deve ser MagneticHMW ou ElectricAC, recebido {self.kind!r}",
                    module=MODULE, key='kind',
                )
        for name, key in (('lam', 'lambda'), ('rho', 'rho'), ('dipole', 'd_or_mu'),
                          ('eps0', 'eps0'), ('mu0', 'mu0')):
            _require_finite(key, getattr(self, name))
        if self.dipole == 0:
            raise ConfigError("'d_or_mu' deve ser diferente de zero", module=MODULE, key='d_or_mu')
        for key in ('eps0', 'mu0'):
            if getattr(self, key) <= 0:
                raise ConfigError(f"'{key}' deve ser positivo", module=MODULE, key=key)

    @property
    def is_magnetic(self) -> bool:
        return self.kind == FieldKind.MAGNETIC_HMW

    @property
    def orientation(self) -> int:
        return 1 if self.is_magnetic else -1

    @property
    def source_scale(self) -> float:
        """Fator 1/eps0 das fontes elétricas"""
        return 1.0 if self.is_magnetic else 1.0 / self.eps0


@dataclass(frozen=True)
class ChargedReference:
    """Modelo de referência: carga q ligada a um solenoide de fluxo Phi"""
    q: float
    flux: float

    def __post_init__(self):
        _require_finite('q', self.q)
        _require_finite('flux', self.flux)


@dataclass(frozen=True)
class EffectiveCouplings:
    flux: float  # d*lambda_m ou -mu*lambda_e/eps0
    area: float  # kappa: d*rho_m ou -mu*rho_e/eps0


@dataclass(frozen=True)
class DimensionlessGroups:
    """
    Grupos adimensionais. alpha, omega_c e theta seguem a convenção de
    magnitude de cada configuração; alpha_eff, omega_c_eff e theta_eff
    carregam o sinal efetivo que entra no Hamiltoniano.
    """
    alpha: float
    beta: float
    theta: Optional[float]
    omega_c: float
    omega_0: float
    alpha_eff: float
    omega_c_eff: float
    theta_eff: Optional[float]
    orientation: int

    @property
    def Omega(self) -> float:
        return math.sqrt(self.omega_0 ** 2 + 0.25 * self.omega_c ** 2)

    @property
    def beta_is_infinite(self) -> bool:
        return math.isinf(self.beta)


def _check_family(cfg: FieldConfig, family: Optional[FieldKind]):
    if family is not None and FieldKind(family) != cfg.kind:
        raise ConfigError(
            f"campo {FieldKind(family).value} pedido para configuração {cfg.kind.value}",
            module=MODULE, key='kind',
        )


def filament_field(cfg: FieldConfig, point, family: Optional[FieldKind] = None) -> np.ndarray:
    """
    Campo do filamento, lambda * x_i / (2 pi r^2) (com 1/eps0 no caso AC).

    Args:
        cfg: Configuração das fontes
        point: Ponto (2,) ou lote de pontos (..., 2)
        family: Família de campo esperada (opcional)

    Returns:
        Campo com o mesmo formato de point
    """
    _check_family(cfg, family)
    x = np.asarray(point, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    if np.any(r2 == 0.0):
        raise SingularPointError("campo do filamento é singular na origem", module=MODULE)
    strength = cfg.lam * cfg.source_scale / (2.0 * math.pi)
    return strength * x / r2[..., np.newaxis]


def volume_field(cfg: FieldConfig, point, family: Optional[FieldKind] = None) -> np.ndarray:
    """Campo da densidade uniforme, rho * x_i / 2 (com 1/eps0 no caso AC)"""
    _check_family(cfg, family)
    x = np.asarray(point, dtype=float)
    return 0.5 * cfg.rho * cfg.source_scale * x


def dipole_coupling(cfg: FieldConfig, params: SystemParams) -> float:
    """g em a_i = g epsilon_ij F_j: d/c^2 (HMW) ou -mu/c^2 (AC)"""
    return cfg.orientation * cfg.dipole / params.c ** 2


def effective_gauge_potential(cfg: FieldConfig, params: SystemParams, point) -> np.ndarray:
    x = np.asarray(point, dtype=float)
    field = volume_field(cfg, x)
    if cfg.lam != 0:
        field = field + filament_field(cfg, x)
    g = dipole_coupling(cfg, params)
    # epsilon_12 = +1: a_1 = g F_2, a_2 = -g F_1
    return g * np.stack([field[..., 1], -field[..., 0]], axis=-1)


def effective_couplings(cfg: FieldConfig, params: SystemParams) -> EffectiveCouplings:
    g_c2 = dipole_coupling(cfg, params) * params.c ** 2
    return EffectiveCouplings(
        flux=g_c2 * cfg.lam * cfg.source_scale,
        area=g_c2 * cfg.rho * cfg.source_scale,
    )


def dimensionless_groups(cfg: FieldConfig, params: SystemParams,
                         require_theta: bool = False) -> DimensionlessGroups:
    couplings = effective_couplings(cfg, params)
    hbar_c2 = params.hbar * params.c ** 2
    sign = cfg.orientation

    alpha_eff = couplings.flux / (2.0 * math.pi * hbar_c2)
    omega_c_eff = couplings.area / (params.m * params.c ** 2)
    omega_0 = params.omega_0

    if couplings.area == 0:
        if require_theta:
            raise ConstraintDegeneracyError(
                "theta indefinido: acoplamento de área nulo (rho = 0)", module=MODULE,
            )
        theta_eff = None
    else:
        theta_eff = hbar_c2 / couplings.area

    omega_c = sign * omega_c_eff
    beta = math.inf if omega_0 == 0 else omega_c / omega_0

    return DimensionlessGroups(
        alpha=sign * alpha_eff,
        beta=beta,
        theta=None if theta_eff is None else sign * theta_eff,
        omega_c=omega_c,
        omega_0=omega_0,
        alpha_eff=alpha_eff,
        omega_c_eff=omega_c_eff,
        theta_eff=theta_eff,
        orientation=sign,
    )


def _duality_factors(eps0, mu0, sqrt: Callable = math.sqrt) -> Dict[str, Tuple]:
    """Fatores (lambda, rho, dipolo) de cada mapa de dualidade"""
    impedance = sqrt(mu0 / eps0)
    admittance = sqrt(eps0 / mu0)
    return {
        'dr1': (impedance, impedance, 1 / sqrt(eps0 * mu0)),
        'dr2': (-admittance, -admittance, -sqrt(eps0 * mu0)),
    }


def dual_map_dr1(cfg: FieldConfig) -> FieldConfig:
    """Leva a configuração AC (elétrica) na configuração HMW (magnética)"""
    if cfg.kind != FieldKind.ELECTRIC_AC:
        raise ConfigError("dr1 exige configuração ElectricAC", module=MODULE, key='kind')
    f_lam, f_rho, f_dip = _duality_factors(cfg.eps0, cfg.mu0)['dr1']
    return replace(cfg, kind=FieldKind.MAGNETIC_HMW,
                   lam=f_lam * cfg.lam, rho=f_rho * cfg.rho, dipole=f_dip * cfg.dipole)


def dual_map_dr2(cfg: FieldConfig) -> FieldConfig:
    """Leva a configuração HMW na AC, com os sinais negativos da dualidade"""
    if cfg.kind != FieldKind.MAGNETIC_HMW:
        raise ConfigError("dr2 exige configuração MagneticHMW", module=MODULE, key='kind')
    f_lam, f_rho, f_dip = _duality_factors(cfg.eps0, cfg.mu0)['dr2']
    return replace(cfg, kind=FieldKind.ELECTRIC_AC,
                   lam=f_lam * cfg.lam, rho=f_rho * cfg.rho, dipole=f_dip * cfg.dipole)


def dual_map(cfg: FieldConfig) -> FieldConfig:
    if cfg.kind == FieldKind.ELECTRIC_AC:
        return dual_map_dr1(cfg)
    return dual_map_dr2(cfg)


def symbolic_dual_map(direction: str, lam, rho, dipole, eps0, mu0) -> Tuple:
    """Mesmos mapas sobre expressões sympy (eps0, mu0 positivos)"""
    factors = _duality_factors(eps0, mu0, sqrt=sympy.sqrt)[direction]
    return tuple(sympy.simplify(f * v) for f, v in zip(factors, (lam, rho, dipole)))


def build_configuration(data: Dict) -> Tuple[SystemParams, FieldConfig]:
    """
    Constrói (SystemParams, FieldConfig) a partir do documento plano de configuração.

    Este é o único caminho de validação: o serializer e os comandos passam por aqui.
    """
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"chave desconhecida: {unknown[0]}", module=MODULE, key=unknown[0])
    for key in REQUIRED_KEYS:
        if key not in data:
            raise ConfigError(f"chave obrigatória ausente: {key}", module=MODULE, key=key)
    for key in NUMERIC_KEYS:
        if key in data:
            _require_finite(key, data[key])

    natural = data.get('natural_units', False)
    if not isinstance(natural, bool):
        raise ConfigError("'natural_units' deve ser booleano", module=MODULE, key='natural_units')

    if natural:
        for key in ('c', 'hbar'):
            if key in data and float(data[key]) != 1.0:
                raise ConfigError(f"'{key}' deve ser 1 em unidades naturais", module=MODULE, key=key)
        defaults = {'c': 1.0, 'hbar': 1.0, 'eps0': 1.0, 'mu0': 1.0}
    else:
        defaults = {'c': constants.c, 'hbar': constants.hbar,
                    'eps0': constants.epsilon_0, 'mu0': constants.mu_0}

    def value(key):
        return float(data.get(key, defaults.get(key)))

    params = SystemParams(m=value('m'), K=value('K'), c=value('c'), hbar=value('hbar'),
                          natural_units=natural)
    cfg = FieldConfig(kind=data['kind'], lam=value('lambda'), rho=value('rho'),
                      dipole=value('d_or_mu'), eps0=value('eps0'), mu0=value('mu0'))
    logger.debug(f"Configuração carregada: {cfg.kind.value}, natural_units={natural}")
    return params, cfg


def configuration_document(params: SystemParams, cfg: FieldConfig) -> Dict:
    """Documento plano (mesmas chaves do arquivo de entrada)"""
    return {
        'kind': cfg.kind.value,
        'lambda': cfg.lam,
        'rho': cfg.rho,
        'm': params.m,
        'd_or_mu': cfg.dipole,
        'K': params.K,
        'c': params.c,
        'hbar': params.hbar,
        'eps0': cfg.eps0,
        'mu0': cfg.mu0,
        'natural_units': params.natural_units,
    }
