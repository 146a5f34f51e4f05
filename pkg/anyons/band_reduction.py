"""
Limite de energia cinética desprezível: projeção na banda mais baixa.

O limite é realizado como omega_c/omega_0 -> infinito com a armadilha fixa
(m -> 0 com kappa e K fixos). Os observáveis do modelo reduzido são
construídos com as coordenadas projetadas X_i = P x_i P:

    R = -(kappa/2 c^2)(X_1^2 + X_2^2) - alpha_eff * hbar

Modos do filamento:
    'gauge'    o campo do filamento é nulo fora do eixo, mas o fluxo não é
               removível quando alpha_eff não é inteiro: ele desloca o rótulo
               de momento angular l -> l + alpha. A banda é resolvida sem esse
               deslocamento e o filamento entra só pela constante -alpha_eff
               de R (modelo reduzido).
    'threaded' o fluxo permanece no termo cinético (diagnóstico). Como o J
               canônico é inteiro, a parte fracionária de R se cancela.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from django.conf import settings

from .exceptions import BandGapError, ConfigError, InsufficientBandError, ReductionUndefinedError
from .params_fields import FieldConfig, SystemParams, dimensionless_groups, effective_couplings
from .spectral_solver import RadialGrid, SectorProblem, cell_moment_ratio, solve_sector

logger = logging.getLogger(__name__)

MODULE = 'band_reduction'

FILAMENT_MODES = ('gauge', 'threaded')
REDUCTION_COLUMNS = ['mu', 'n', 'projected_J_hbar', 'target_J_hbar', 'error_hbar']


@dataclass(frozen=True)
class BandProjection:
    """Matrizes projetadas na base dos estados n = 0 de cada setor da banda"""
    mu: float
    sectors: Tuple[int, ...]
    energies: np.ndarray
    gap: float
    R: np.ndarray
    X1: np.ndarray
    X2: np.ndarray
    length_scale: float
    alpha: float
    theta: float
    filament: str

    @property
    def band_size(self) -> int:
        return len(self.sectors)


@dataclass(frozen=True)
class CommutatorEstimate:
    value: complex
    truncation_error: float
    interior_states: int


@dataclass
class ReductionReport:
    schedule: List[float]
    projected_J: List[np.ndarray] = field(default_factory=list)
    target_J: List[np.ndarray] = field(default_factory=list)
    J_error: List[float] = field(default_factory=list)
    commutator_estimate: List[complex] = field(default_factory=list)
    commutator_error: List[float] = field(default_factory=list)
    gaps: List[float] = field(default_factory=list)
    rates: Dict[str, float] = field(default_factory=dict)
    alpha: float = 0.0
    theta: float = 0.0
    filament: str = 'gauge'

    def to_dataframe(self) -> pd.DataFrame:
        rows = []
        for mu, projected, target in zip(self.schedule, self.projected_J, self.target_J):
            for n, (value, expected) in enumerate(zip(projected, target)):
                rows.append((mu, n, float(value), float(expected), abs(float(value) - float(expected))))
        return pd.DataFrame(rows, columns=REDUCTION_COLUMNS)

    def summary(self) -> Dict:
        return {
            'schedule': list(self.schedule),
            'alpha': self.alpha,
            'theta': self.theta,
            'filament': self.filament,
            'J_error_hbar': list(self.J_error),
            'commutator_real': [z.real for z in self.commutator_estimate],
            'commutator_imag': [z.imag for z in self.commutator_estimate],
            'commutator_error': list(self.commutator_error),
            'gaps_hbarOmega': list(self.gaps),
            'rates': dict(self.rates),
        }


def _chirality(cfg: FieldConfig, params: SystemParams) -> int:
    area = effective_couplings(cfg, params).area
    if area == 0:
        raise ReductionUndefinedError(
            "redução indefinida: acoplamento de área nulo (rho = 0)", module=MODULE,
        )
    return 1 if area > 0 else -1


def reduced_J_analytic(n: int, cfg: FieldConfig, params: SystemParams) -> float:
    """
    J_n = -sgn(kappa)(n + 1/2) - alpha_eff, em unidades de hbar.

    Para HMW com rho > 0 dá -(n + 1/2) - alpha; para o dual AC dá
    (n + 1/2) + mu lambda_e/(2 pi hbar c^2 eps0).
    """
    if n < 0:
        raise ConfigError("n deve ser >= 0", module=MODULE)
    chirality = _chirality(cfg, params)
    return -chirality * (n + 0.5) - dimensionless_groups(cfg, params).alpha_eff


def ladder_reduced_spectrum(cfg: FieldConfig, params: SystemParams, size: int = 200) -> np.ndarray:
    """
    Espectro de R a partir de [x_1, x_2] = i theta por operadores escada truncados.

    X_1 + i X_2 = sqrt(2|theta|) a (ou a^dagger quando theta < 0). O estado
    mais alto sente o truncamento e é descartado.
    """
    chirality = _chirality(cfg, params)
    groups = dimensionless_groups(cfg, params)
    theta = groups.theta_eff
    area = effective_couplings(cfg, params).area

    lowering = np.diag(np.sqrt(np.arange(1, size, dtype=float)), k=1)
    ladder = lowering if chirality > 0 else lowering.T
    A = math.sqrt(2 * abs(theta)) * ladder
    X1 = 0.5 * (A + A.conj().T)
    X2 = (A - A.conj().T) / 2j
    radius_sq = (X1 @ X1 + X2 @ X2).real
    R = -(area / (2 * params.c ** 2 * params.hbar)) * radius_sq - groups.alpha_eff * np.eye(size)
    # o último estado sente o truncamento de a a^dagger
    values = np.linalg.eigvalsh(R[:-1, :-1])
    return values[::-1] if chirality > 0 else values


def band_ratio(cfg: FieldConfig, params: SystemParams) -> float:
    """mu = omega_0/|omega_c|"""
    groups = dimensionless_groups(cfg, params)
    if groups.omega_c_eff == 0:
        raise ReductionUndefinedError("omega_c nulo: não há banda de Landau", module=MODULE)
    return groups.omega_0 / abs(groups.omega_c_eff)


def mass_for_ratio(cfg: FieldConfig, params: SystemParams, mu: float) -> SystemParams:
    """Massa que dá omega_0/|omega_c| = mu com kappa e K fixos: m = (mu kappa/c^2)^2 / K"""
    if params.K <= 0:
        raise ConfigError("o esquema de resfriamento exige K > 0", module=MODULE, key='K')
    if mu <= 0:
        raise ConfigError(f"razão mu deve ser positiva, recebido {mu}", module=MODULE)
    _chirality(cfg, params)
    area = effective_couplings(cfg, params).area
    return params.with_mass((mu * abs(area) / params.c ** 2) ** 2 / params.K)


def band_sectors(chirality: int, alpha: float, band_size: int, filament: str) -> List[int]:
    """Setores l dos estados n = 0 da banda mais baixa, na ordem k = 0, 1, ..."""
    if filament == 'gauge':
        first = 0
    else:
        first = math.floor(-alpha) if chirality > 0 else math.ceil(-alpha)
    return [first - chirality * k for k in range(band_size)]


def project_lowest_band(cfg: FieldConfig, params: SystemParams, band_size: Optional[int] = None,
                        sectors: Optional[Sequence[int]] = None, grid: Optional[RadialGrid] = None,
                        filament: str = 'gauge') -> BandProjection:
    """
    Projeta R, X_1, X_2 na banda mais baixa.

    Args:
        band_size: Número de estados da banda (padrão CYONLAB_BAND_SIZE)
        sectors: Janela de setores resolvidos; precisa conter a banda
        filament: 'gauge' ou 'threaded'

    Raises:
        BandGapError: quando a banda não está isolada (carrega mu e o gap medido)
    """
    band_size = band_size or settings.CYONLAB_BAND_SIZE
    if band_size <= 3:
        raise InsufficientBandError(f"banda com {band_size} estados; mínimo 4", module=MODULE)
    if filament not in FILAMENT_MODES:
        raise ConfigError(f"modo de filamento desconhecido: {filament}", module=MODULE)

    chirality = _chirality(cfg, params)
    groups = dimensionless_groups(cfg, params)
    mu = band_ratio(cfg, params)
    kinetic_alpha = 0.0 if filament == 'gauge' else groups.alpha_eff
    grid = grid or RadialGrid.default()

    band = band_sectors(chirality, groups.alpha_eff, band_size, filament)
    neighbours = [band[0] + chirality, band[0] + 2 * chirality]
    window = sorted(set(sectors)) if sectors is not None else sorted(band + neighbours)
    missing = [ell for ell in band if ell not in window]
    if missing:
        raise ConfigError(f"janela de setores não contém a banda: faltam {missing}", module=MODULE)

    solutions = {}
    for ell in window:
        sp = SectorProblem(ell=ell, alpha=kinetic_alpha, omega_c=groups.omega_c_eff,
                           omega_0=groups.omega_0, grid=grid)
        solutions[ell] = solve_sector(sp, 2, extrapolate=False)

    energies = np.array([solutions[ell].energies[0] for ell in band])
    others = [solutions[ell].energies[1] for ell in band]
    others += [e for ell in window if ell not in band for e in solutions[ell].energies]
    gap = float(min(others) - energies.max())
    if gap <= 0:
        logger.warning(f"Banda não isolada em mu={mu:.4g}: gap={gap:.4g}")
        raise BandGapError(
            f"banda mais baixa não isolada em mu={mu:.6g}: gap medido {gap:.6g} hbar*Omega",
            mu=mu, gap=gap, module=MODULE,
        )

    n = band_size
    X1 = np.zeros((n, n))
    X2 = np.zeros((n, n), dtype=complex)
    for a in range(n - 1):
        b = a + 1
        sol_a, sol_b = solutions[band[a]], solutions[band[b]]
        s_a, s_b = sol_a.operator.exponent, sol_b.operator.exponent
        overlap = float(np.sum(
            sol_a.vectors[:, 0] * sol_b.vectors[:, 0] * cell_moment_ratio(grid, s_a + s_b + 2, s_a, s_b)
        ))
        X1[a, b] = X1[b, a] = 0.5 * overlap
        # <a| e^{i phi} |b> != 0 só quando l_a = l_b + 1
        if band[a] == band[b] + 1:
            X2[a, b], X2[b, a] = -0.5j * overlap, 0.5j * overlap
        else:
            X2[a, b], X2[b, a] = 0.5j * overlap, -0.5j * overlap

    ratio = groups.omega_c_eff / (2.0 * groups.Omega)
    radius_sq = (X1 @ X1 + X2 @ X2).real
    R = -ratio * radius_sq - groups.alpha_eff * np.eye(n)

    length_scale = math.sqrt(params.hbar / (params.m * groups.Omega))
    logger.debug(f"Banda projetada: mu={mu:.4g}, setores={band}, gap={gap:.4g}")
    return BandProjection(
        mu=mu,
        sectors=tuple(band),
        energies=energies,
        gap=gap,
        R=R,
        X1=X1 * length_scale,
        X2=X2 * length_scale,
        length_scale=length_scale,
        alpha=groups.alpha_eff,
        theta=groups.theta_eff,
        filament=filament,
    )


def interior_slice(band_size: int, edge: Optional[int] = None) -> slice:
    edge = settings.CYONLAB_EDGE_STATES if edge is None else edge
    return slice(0, band_size - edge)


def projected_J_values(projection: BandProjection, edge: Optional[int] = None) -> np.ndarray:
    """Autovalores de R no bloco interior, na ordem de n"""
    inner = interior_slice(projection.band_size, edge)
    values = np.linalg.eigvalsh(projection.R[inner, inner])
    return values[::-1] if projection.theta > 0 else values


def projected_commutator(X1: np.ndarray, X2: np.ndarray, edge: Optional[int] = None) -> CommutatorEstimate:
    """
    Média no bloco interior de (X1 X2 - X2 X1)/i.

    O erro de truncamento é o desvio máximo das entradas do bloco interior
    em relação ao valor médio (diagonal) ou a zero (fora da diagonal).
    """
    size = X1.shape[0]
    if size <= 3:
        raise InsufficientBandError(f"banda com {size} estados; mínimo 4", module=MODULE)
    inner = interior_slice(size, edge)
    C = ((X1 @ X2 - X2 @ X1) / 1j)[inner, inner]
    diagonal = np.diag(C)
    value = complex(np.mean(diagonal))
    off = C - np.diag(diagonal)
    spread = float(np.max(np.abs(diagonal - value)))
    leak = float(np.max(np.abs(off))) if off.size else 0.0
    return CommutatorEstimate(value, spread + leak, C.shape[0])


def _fitted_slope(schedule: Sequence[float], errors: Sequence[float]) -> float:
    errors = np.asarray(errors, dtype=float)
    if np.any(errors <= 0):
        return float('nan')
    return float(np.polyfit(np.log(schedule), np.log(errors), 1)[0])


def convergence_study(cfg: FieldConfig, params: SystemParams, schedule: Sequence[float],
                      band_size: Optional[int] = None, grid: Optional[RadialGrid] = None,
                      filament: str = 'gauge') -> ReductionReport:
    """
    Percorre o esquema de resfriamento mu_1 > mu_2 > ... e mede a convergência.

    Returns:
        ReductionReport com inclinações log-log ajustadas em rates
    """
    schedule = [float(mu) for mu in schedule]
    if len(schedule) < 3:
        raise ConfigError("o esquema precisa de pelo menos 3 valores de mu", module=MODULE)
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ConfigError("o esquema deve ser estritamente decrescente em mu", module=MODULE)

    groups = dimensionless_groups(cfg, params, require_theta=True)
    report = ReductionReport(schedule=schedule, alpha=groups.alpha_eff, filament=filament)

    for mu in schedule:
        cooled = mass_for_ratio(cfg, params, mu)
        projection = project_lowest_band(cfg, cooled, band_size=band_size, grid=grid, filament=filament)
        values = projected_J_values(projection)
        target = np.array([reduced_J_analytic(n, cfg, cooled) for n in range(len(values))])
        estimate = projected_commutator(projection.X1, projection.X2)

        report.theta = projection.theta
        report.projected_J.append(values)
        report.target_J.append(target)
        report.J_error.append(float(np.max(np.abs(values - target))))
        report.commutator_estimate.append(estimate.value)
        report.commutator_error.append(abs(estimate.value - projection.theta) / abs(projection.theta))
        report.gaps.append(projection.gap)

    report.rates = {
        'projected_J': _fitted_slope(schedule, report.J_error),
        'commutator': _fitted_slope(schedule, report.commutator_error),
    }
    logger.info(f"Estudo de convergência: {len(schedule)} pontos, taxas={report.rates}")
    return report
