"""
Oráculo independente: diagonalização do Hamiltoniano completo numa rede
polar 2D (r, phi), sem separação de variáveis.

O potencial efetivo é amostrado na forma cartesiana a = alpha (y, -x)/r^2 +
(omega_c/2 Omega)(y, -x) em cada nó e projetado em phi; os sinais (sigma, s)
da forma fechada saem dessa amostragem, não de uma fórmula por setor.

Radial: volumes finitos com medida r dr numa malha graduada r = r_max (j/N)^p,
genérica em l, que encolhe as células junto ao filamento onde R ~ r^|nu|.
Angular: derivada espectral (Fourier) com número ímpar de pontos.
Os níveis são rotulados pelo momento angular canônico medido.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np
from django.conf import settings
from scipy import sparse
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh, splu

from .exceptions import ConfigError, EigensolverError
from .params_fields import FieldConfig, SystemParams, dimensionless_groups

logger = logging.getLogger(__name__)

MODULE = 'lattice_oracle'

SIGN_TOLERANCE = 1e-3


@dataclass(frozen=True)
class LatticeSpec:
    n_radial: int
    n_angular: int
    r_max: float
    grading: float = 4.0

    def __post_init__(self):
        if self.n_angular % 2 == 0:
            raise ConfigError(f"n_angular deve ser ímpar, recebido {self.n_angular}", module=MODULE)
        if self.grading < 1.0:
            raise ConfigError(f"grading deve ser >= 1, recebido {self.grading}", module=MODULE)

    @classmethod
    def default(cls) -> 'LatticeSpec':
        return cls(**settings.CYONLAB_LATTICE_GRID)

    @property
    def faces(self) -> np.ndarray:
        return self.r_max * (np.arange(self.n_radial + 1) / self.n_radial) ** self.grading

    @property
    def radii(self) -> np.ndarray:
        f = self.faces
        return 0.5 * (f[:-1] + f[1:])

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_angular) / self.n_angular


@dataclass(frozen=True)
class LatticeLevels:
    energies: np.ndarray
    ell_expectations: np.ndarray
    alpha: float
    cyclotron_ratio: float
    spec: LatticeSpec = field(default_factory=LatticeSpec.default)

    @property
    def ell_labels(self) -> List[int]:
        return [int(round(v)) for v in self.ell_expectations]

    def radial_numbers(self) -> List[int]:
        """n de cada nível: quantos níveis mais baixos já ocupam o mesmo setor"""
        seen: Dict[int, int] = {}
        numbers = []
        for ell in self.ell_labels:
            numbers.append(seen.get(ell, 0))
            seen[ell] = seen.get(ell, 0) + 1
        return numbers


def angular_momentum_matrix(n_angular: int) -> np.ndarray:
    """L = -i d/dphi espectral: autovalores m = -(N-1)/2 .. (N-1)/2"""
    m = np.fft.fftfreq(n_angular, d=1.0 / n_angular)
    L = np.fft.ifft(m[:, np.newaxis] * np.fft.fft(np.eye(n_angular), axis=0), axis=0)
    return 0.5 * (L + L.conj().T)


def oracle_vector_potential(alpha: float, cyclotron_ratio: float, x, y) -> Tuple[np.ndarray, np.ndarray]:
    """a = alpha (y, -x)/r^2 + (omega_c/2 Omega)(y, -x) em unidades de l0"""
    r2 = x * x + y * y
    scale = alpha / r2 + cyclotron_ratio
    return scale * y, -scale * x


def radial_stiffness(spec: LatticeSpec) -> sparse.csr_matrix:
    """
    -(1/2r)(r R')' simetrizado pelas massas das células, Dirichlet em r_max.

    Fluxo nulo em r = 0; os nós ficam no meio das células.
    """
    f = spec.faces
    c = spec.radii
    mass = 0.5 * (f[1:] ** 2 - f[:-1] ** 2)
    inner = 0.5 * f[1:-1] / np.diff(c)
    wall = 0.5 * f[-1] / (f[-1] - c[-1])

    diagonal = np.zeros(spec.n_radial)
    diagonal[:-1] += inner
    diagonal[1:] += inner
    diagonal[-1] += wall
    diagonal /= mass
    off = -inner / np.sqrt(mass[:-1] * mass[1:])
    return sparse.diags([off, diagonal, off], [-1, 0, 1], format='csr')


def build_lattice_hamiltonian(alpha: float, cyclotron_ratio: float, trap_ratio_sq: float,
                              spec: LatticeSpec) -> sparse.csr_matrix:
    """
    Hamiltoniano 2D em unidades de l0 e hbar*Omega, nós ordenados (r, phi).

    Em cada raio o bloco angular é (1/2r^2) Pi^2 com Pi = L - r a_phi, mais a
    armadilha (1/2)(omega_0/Omega)^2 r^2; os raios se acoplam pela rigidez radial.
    """
    L = angular_momentum_matrix(spec.n_angular)
    phi = spec.angles
    identity = np.eye(spec.n_angular)

    blocks = []
    for r in spec.radii:
        x, y = r * np.cos(phi), r * np.sin(phi)
        a_x, a_y = oracle_vector_potential(alpha, cyclotron_ratio, x, y)
        a_phi = -a_x * np.sin(phi) + a_y * np.cos(phi)
        Pi = L - np.diag(r * a_phi)
        block = (Pi @ Pi) / (2.0 * r * r) + 0.5 * trap_ratio_sq * r * r * identity
        blocks.append(0.5 * (block + block.conj().T))

    kinetic = sparse.kron(radial_stiffness(spec), sparse.identity(spec.n_angular), format='csr')
    return (kinetic + sparse.block_diag(blocks, format='csr')).tocsr()


def angular_momentum_expectation(psi: np.ndarray, spec: LatticeSpec) -> float:
    """<L_z> com a derivada espectral em phi"""
    grid = psi.reshape(spec.n_radial, spec.n_angular)
    L_psi = grid @ angular_momentum_matrix(spec.n_angular).T
    return float(np.real(np.vdot(grid, L_psi)) / np.real(np.vdot(grid, grid)))


def lattice_levels(cfg: FieldConfig, params: SystemParams, n_levels: int = 6,
                   spec: Optional[LatticeSpec] = None) -> LatticeLevels:
    """Os n_levels níveis mais baixos da rede, com <L_z> de cada um"""
    spec = spec or LatticeSpec.default()
    groups = dimensionless_groups(cfg, params)
    ratio = groups.omega_c_eff / (2.0 * groups.Omega)
    trap_ratio_sq = (groups.omega_0 / groups.Omega) ** 2
    H = build_lattice_hamiltonian(groups.alpha_eff, ratio, trap_ratio_sq, spec)

    # eliminação simétrica com pivôs na diagonal: H é hermitiana positiva e
    # muito graduada nas células junto ao filamento
    lu = splu(H.tocsc(), permc_spec='MMD_AT_PLUS_A', diag_pivot_thresh=0.0,
              options={'SymmetricMode': True})
    inverse = LinearOperator(H.shape, matvec=lu.solve, dtype=complex)
    # todos os modos angulares presentes no vetor inicial
    rng = np.random.default_rng(0)
    v0 = rng.standard_normal(H.shape[0]) + 1j * rng.standard_normal(H.shape[0])
    try:
        energies, vectors = eigsh(H, k=n_levels + 2, sigma=0.0, which='LM', OPinv=inverse, v0=v0)
    except ArpackNoConvergence as e:
        raise EigensolverError(f"ARPACK não convergiu na rede: {str(e)}", module=MODULE) from e

    order = np.argsort(energies)[:n_levels]
    ell = np.array([angular_momentum_expectation(vectors[:, k], spec) for k in order])
    logger.debug(f"Níveis da rede: {energies[order].tolist()}")
    return LatticeLevels(energies[order].real, ell, groups.alpha_eff, ratio, spec)


def predicted_energy(n: int, ell: int, alpha: float, ratio: float, flux_sign: int, cyclotron_sign: int) -> float:
    nu = ell + flux_sign * alpha
    return 2 * n + abs(nu) + 1 + cyclotron_sign * ratio * nu


def sign_convention_errors(levels: LatticeLevels) -> Dict[Tuple[int, int], float]:
    """Maior erro relativo de cada combinação (sigma, s) contra os níveis da rede"""
    errors = {}
    for sigma, s in product((1, -1), repeat=2):
        worst = 0.0
        for energy, ell, n in zip(levels.energies, levels.ell_labels, levels.radial_numbers()):
            expected = predicted_energy(n, ell, levels.alpha, levels.cyclotron_ratio, sigma, s)
            worst = max(worst, abs(energy - expected) / abs(expected))
        errors[(sigma, s)] = worst
    return errors


def fit_sign_convention(levels: LatticeLevels, tolerance: float = SIGN_TOLERANCE) -> List[Tuple[int, int]]:
    """Combinações (sigma, s) que reproduzem todos os níveis dentro da tolerância"""
    errors = sign_convention_errors(levels)
    matches = [signs for signs, error in errors.items() if error < tolerance]
    logger.info(f"Ajuste de sinais na rede: {errors} -> {matches}")
    return matches
