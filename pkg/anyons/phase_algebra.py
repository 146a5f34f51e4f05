"""
Álgebra simbólica exata do espaço de fase.

Observáveis são polinômios em (x1, x2, p1, p2, u) com coeficientes no corpo
de funções racionais dos parâmetros físicos. O gerador u representa 1/r^2 e
todo polinômio é mantido na forma normal módulo a relação x1^2 u + x2^2 u = 1,
o que torna a igualdade decidível por comparação direta.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from sympy import Rational, Symbol, ZZ, sstr
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.fields import field
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import lex
from sympy.polys.polyerrors import CoercionFailed
from sympy.polys.rings import PolyElement, ring

from .exceptions import ConstraintDegeneracyError
from .params_fields import FieldConfig, FieldKind, SystemParams

logger = logging.getLogger(__name__)

MODULE = 'phase_algebra'

PARAMETER_NAMES = (
    'm', 'd', 'c', 'K', 'lambda_m', 'rho_m', 'hbar', 'pi',
    'q', 'Phi', 'mu', 'lambda_e', 'rho_e', 'eps0',
)
PHASE_VARIABLES = ('x1', 'x2', 'p1', 'p2', 'u')

PARAMS, *_param_gens = field(','.join(PARAMETER_NAMES), ZZ, lex)
PARAM_DOMAIN = PARAMS.to_domain()
P = dict(zip(PARAMETER_NAMES, _param_gens))

PHASE_RING, _x1, _x2, _p1, _p2, _u = ring(','.join(PHASE_VARIABLES), PARAM_DOMAIN, lex)
RADIAL_RELATION = _x1 ** 2 * _u + _x2 ** 2 * _u - 1

_PARSE_LOCALS = {name: Symbol(name) for name in PARAMETER_NAMES + PHASE_VARIABLES}
_PARSE_TRANSFORMATIONS = standard_transformations + (convert_xor,)

ParamField = type(PARAMS.one)


def _canonical(element: PolyElement) -> PolyElement:
    return element.rem([RADIAL_RELATION])


def param(value) -> ParamField:
    """Converte nome de parâmetro, inteiro, float ou expressão sympy em ParamField"""
    if isinstance(value, str):
        return P[value]
    if isinstance(value, float):
        value = Rational(repr(value))
    if isinstance(value, ParamField):
        return value
    return PARAM_DOMAIN.convert(value)


class PhasePoly:
    """Observável polinomial no espaço de fase, sempre em forma canônica"""

    __slots__ = ('element',)

    def __init__(self, element=None):
        if element is None:
            element = PHASE_RING.zero
        elif not isinstance(element, PolyElement):
            element = PHASE_RING.ground_new(param(element))
        self.element = _canonical(element)

    @staticmethod
    def _coerce(other) -> PolyElement:
        if isinstance(other, PhasePoly):
            return other.element
        return PHASE_RING.ground_new(param(other))

    def __add__(self, other):
        return PhasePoly(self.element + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PhasePoly(self.element - self._coerce(other))

    def __rsub__(self, other):
        return PhasePoly(self._coerce(other) - self.element)

    def __neg__(self):
        return PhasePoly(-self.element)

    def __mul__(self, other):
        return PhasePoly(self.element * self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        return PhasePoly(self.element ** exponent)

    def __eq__(self, other):
        try:
            return self.element == self._coerce(other)
        except (CoercionFailed, TypeError, KeyError):
            return NotImplemented

    def __hash__(self):
        return hash(self.element)

    def __repr__(self):
        return f"PhasePoly({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    @property
    def is_zero(self) -> bool:
        return not self.element

    @property
    def is_constant(self) -> bool:
        return self.element.is_ground

    def constant(self) -> ParamField:
        return self.element.const()

    def terms(self) -> List[Tuple[Tuple[int, ...], ParamField]]:
        return self.element.terms()

    def diff_x(self, i: int) -> 'PhasePoly':
        """Derivada total em x_i, com du/dx_i = -2 x_i u^2"""
        x = (_x1, _x2)[i]
        e = self.element
        return PhasePoly(e.diff(x) + e.diff(_u) * (-2 * x * _u ** 2))

    def diff_p(self, i: int) -> 'PhasePoly':
        return PhasePoly(self.element.diff((_p1, _p2)[i]))

    def subs(self, replacements: Dict[str, 'PhasePoly']) -> 'PhasePoly':
        gens = dict(zip(PHASE_VARIABLES, PHASE_RING.gens))
        pairs = [(gens[name], self._coerce(value)) for name, value in replacements.items()]
        return PhasePoly(self.element.compose(pairs))

    def evaluate(self, values: Dict[str, float]) -> float:
        """
        Avalia numericamente; u é calculado a partir de x1, x2.

        Args:
            values: Valores de x1, x2, p1, p2 e dos parâmetros usados (pi incluído)
        """
        point = dict(values)
        point['u'] = 1.0 / (point['x1'] ** 2 + point['x2'] ** 2)
        expr = self.element.as_expr()
        return float(expr.xreplace({Symbol(k): v for k, v in point.items()}))

    def to_text(self) -> str:
        if self.is_zero:
            return '0'
        parts = []
        for monom, coeff in self.element.terms():
            factors = [f"({coefficient_text(coeff)})"]
            for name, exponent in zip(PHASE_VARIABLES, monom):
                if exponent == 1:
                    factors.append(name)
                elif exponent > 1:
                    factors.append(f"{name}^{exponent}")
            parts.append('*'.join(factors))
        return ' + '.join(parts)

    @classmethod
    def from_text(cls, text: str) -> 'PhasePoly':
        expr = parse_expr(text, local_dict=dict(_PARSE_LOCALS), transformations=_PARSE_TRANSFORMATIONS)
        return cls(PHASE_RING.from_expr(expr))


def coefficient_text(coeff: ParamField) -> str:
    return sstr(PARAM_DOMAIN.to_sympy(coeff)).replace('**', '^')


x1, x2, p1, p2, u = (PhasePoly(g) for g in PHASE_RING.gens)
COORDINATES = (x1, x2)
MOMENTA = (p1, p2)


def epsilon(i: int, j: int) -> int:
    """Símbolo de Levi-Civita com epsilon_12 = +1"""
    return (0, 1, -1)[(j - i) % 3] if i != j else 0


def canonical_angular_momentum() -> PhasePoly:
    return x1 * p2 - x2 * p1


def poisson_bracket(f: PhasePoly, g: PhasePoly) -> PhasePoly:
    result = PhasePoly()
    for i in range(2):
        result = result + f.diff_x(i) * g.diff_p(i) - f.diff_p(i) * g.diff_x(i)
    return result


class Classification(str, Enum):
    SECOND_CLASS = 'SecondClass'
    NOT_SECOND_CLASS = 'NotSecondClass'
    UNCONSTRAINED = 'Unconstrained'


@dataclass(frozen=True)
class ConstraintSources:
    """Coeficientes (em ParamField) das fontes usadas nos vínculos"""
    kind: FieldKind
    dipole: ParamField
    c: ParamField
    lam: ParamField
    rho: ParamField
    eps0: ParamField

    @classmethod
    def symbolic(cls, kind: FieldKind = FieldKind.MAGNETIC_HMW) -> 'ConstraintSources':
        if FieldKind(kind) == FieldKind.MAGNETIC_HMW:
            return cls(FieldKind.MAGNETIC_HMW, P['d'], P['c'], P['lambda_m'], P['rho_m'], PARAMS.one)
        return cls(FieldKind.ELECTRIC_AC, P['mu'], P['c'], P['lambda_e'], P['rho_e'], P['eps0'])

    @classmethod
    def from_config(cls, cfg: FieldConfig, params: SystemParams) -> 'ConstraintSources':
        """Valores numéricos convertidos em racionais exatos"""
        eps0 = PARAMS.one if cfg.is_magnetic else param(cfg.eps0)
        return cls(cfg.kind, param(cfg.dipole), param(params.c), param(cfg.lam), param(cfg.rho), eps0)

    @property
    def coupling(self) -> ParamField:
        """g em a_i = g epsilon_ij F_j"""
        sign = 1 if self.kind == FieldKind.MAGNETIC_HMW else -1
        return sign * self.dipole / self.c ** 2

    def field(self) -> Tuple[PhasePoly, PhasePoly]:
        """Campo total das fontes: lambda x_i u/(2 pi) + rho x_i/2 (dividido por eps0 no caso AC)"""
        filament = self.lam / (2 * P['pi'] * self.eps0)
        volume = self.rho / (2 * self.eps0)
        return tuple(x * u * filament + x * volume for x in COORDINATES)

    def filament_field(self) -> Tuple[PhasePoly, PhasePoly]:
        filament = self.lam / (2 * P['pi'] * self.eps0)
        return tuple(x * u * filament for x in COORDINATES)

    def gauge_potential(self, include_volume: bool = True) -> Tuple[PhasePoly, PhasePoly]:
        F = self.field() if include_volume else self.filament_field()
        g = self.coupling
        return (F[1] * g, F[0] * (-g))


@dataclass(frozen=True)
class ConstraintSystem:
    constraints: Tuple[PhasePoly, ...]
    bracket_matrix: Tuple[Tuple[ParamField, ...], ...]
    determinant: ParamField
    classification: Classification
    inverse: Optional[Tuple[Tuple[ParamField, ...], ...]]
    sources: Optional[ConstraintSources] = None

    @property
    def is_second_class(self) -> bool:
        return self.classification == Classification.SECOND_CLASS


def classify_constraints(constraints, sources: Optional[ConstraintSources] = None) -> ConstraintSystem:
    """
    Monta a matriz {phi_a, phi_b}, classifica e inverte quando possível.

    A inversão é feita por eliminação exata sobre ParamField (DomainMatrix),
    válida para qualquer número de vínculos.
    """
    constraints = tuple(constraints)
    n = len(constraints)
    if n == 0:
        return ConstraintSystem((), (), PARAMS.one, Classification.UNCONSTRAINED, (), sources)

    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            entry = poisson_bracket(constraints[a], constraints[b])
            if not entry.is_constant:
                raise ConstraintDegeneracyError(
                    f"colchete de vínculos não constante: {entry.to_text()}", module=MODULE,
                )
            row.append(entry.constant())
        rows.append(tuple(row))

    matrix = DomainMatrix([list(r) for r in rows], (n, n), PARAM_DOMAIN)
    det = matrix.det()
    if det == PARAMS.zero:
        logger.info("Vínculos não são de segunda classe (determinante nulo)")
        return ConstraintSystem(constraints, tuple(rows), det, Classification.NOT_SECOND_CLASS, None, sources)

    inverse_matrix = matrix.inv().to_Matrix()
    inverse = tuple(
        tuple(PARAM_DOMAIN.from_sympy(inverse_matrix[a, b]) for b in range(n)) for a in range(n)
    )
    return ConstraintSystem(constraints, tuple(rows), det, Classification.SECOND_CLASS, inverse, sources)


def build_reduced_constraints(cfg: Optional[FieldConfig] = None, params: Optional[SystemParams] = None,
                              kind: FieldKind = FieldKind.MAGNETIC_HMW,
                              sources: Optional[ConstraintSources] = None) -> ConstraintSystem:
    """
    Vínculos primários phi_i = p_i - a_i do modelo reduzido (sem termo cinético).

    Sem cfg os parâmetros ficam simbólicos; com cfg e params os valores
    numéricos entram como racionais exatos.
    """
    if sources is None:
        if cfg is not None:
            sources = ConstraintSources.from_config(cfg, params)
        else:
            sources = ConstraintSources.symbolic(kind)
    a = sources.gauge_potential()
    constraints = (p1 - a[0], p2 - a[1])
    return classify_constraints(constraints, sources)


def dirac_bracket(f: PhasePoly, g: PhasePoly, cs: ConstraintSystem) -> PhasePoly:
    if cs.classification == Classification.UNCONSTRAINED:
        return poisson_bracket(f, g)
    if not cs.is_second_class:
        raise ConstraintDegeneracyError(
            "vínculos não são de segunda classe: não há colchete de Dirac", module=MODULE,
        )
    result = poisson_bracket(f, g)
    left = [poisson_bracket(f, phi) for phi in cs.constraints]
    right = [poisson_bracket(phi, g) for phi in cs.constraints]
    for a, row in enumerate(cs.inverse):
        for b, w in enumerate(row):
            if w != PARAMS.zero and not left[a].is_zero and not right[b].is_zero:
                result = result - left[a] * right[b] * w
    return result


def reduced_angular_momentum(cs: ConstraintSystem) -> PhasePoly:
    """J = epsilon_ij x_i p_j com p_i resolvido nos vínculos (p_i = p_i - phi_i)"""
    solved = {name: mom - phi for name, mom, phi in zip(('p1', 'p2'), MOMENTA, cs.constraints)}
    return canonical_angular_momentum().subs(solved)


def model_hamiltonian(model: str, sources: Optional[ConstraintSources] = None) -> PhasePoly:
    """
    Hamiltonianos dos modelos de cyon.

    model: 'atom' (só filamento), 'trapped' (filamento + volume + armadilha K r^2/2)
    ou 'charged' (carga q com solenoide de fluxo Phi).
    """
    inv_2m = PARAMS.one / (2 * P['m'])
    if model == 'charged':
        A = _charged_potential()
        kinetic = [mom + A[i] * (P['q'] / P['c']) for i, mom in enumerate(MOMENTA)]
        return (kinetic[0] ** 2 + kinetic[1] ** 2) * inv_2m
    sources = sources or ConstraintSources.symbolic()
    if model == 'atom':
        a = sources.gauge_potential(include_volume=False)
        trap = PhasePoly()
    elif model == 'trapped':
        a = sources.gauge_potential()
        trap = (x1 ** 2 + x2 ** 2) * (P['K'] / 2)
    else:
        raise ValueError(f"Modelo desconhecido: {model}")
    kinetic = [mom - a[i] for i, mom in enumerate(MOMENTA)]
    return (kinetic[0] ** 2 + kinetic[1] ** 2) * inv_2m + trap


def _charged_potential() -> Tuple[PhasePoly, PhasePoly]:
    """A_i = -(Phi/2pi) epsilon_ij x_j / r^2 (gauge simétrico)"""
    scale = -P['Phi'] / (2 * P['pi'])
    return (x2 * u * scale, x1 * u * (-scale))


@dataclass(frozen=True)
class IdentityReport:
    charged_shift: ParamField
    atom_shift: ParamField
    charged_verified: bool
    atom_verified: bool

    @property
    def verified(self) -> bool:
        return self.charged_verified and self.atom_verified


def charged_model_identities() -> IdentityReport:
    """
    Verifica J_c = J_k + deslocamento constante nos dois modelos de cyon.

    Modelo carregado: p = m xdot - (q/c) A, deslocamento -q Phi/(2 pi c).
    Modelo atômico: p = m xdot + (d/c^2) epsilon B, deslocamento -lambda_m d/(2 pi c^2).
    """
    A = _charged_potential()
    charged = -(x1 * A[1] - x2 * A[0]) * (P['q'] / P['c'])

    sources = ConstraintSources.symbolic()
    a = sources.gauge_potential(include_volume=False)
    atom = x1 * a[1] - x2 * a[0]

    expected_charged = -P['q'] * P['Phi'] / (2 * P['pi'] * P['c'])
    expected_atom = -P['lambda_m'] * P['d'] / (2 * P['pi'] * P['c'] ** 2)

    report = IdentityReport(
        charged_shift=charged.constant() if charged.is_constant else None,
        atom_shift=atom.constant() if atom.is_constant else None,
        charged_verified=charged == expected_charged,
        atom_verified=atom == expected_atom,
    )
    logger.debug(f"Identidades dos modelos de cyon verificadas: {report.verified}")
    return report


def quantized_commutator(f: PhasePoly, g: PhasePoly, cs: Optional[ConstraintSystem] = None) -> str:
    """Comutador [f, g] = i*hbar*{f, g} (Dirac quando há vínculos)"""
    bracket = dirac_bracket(f, g, cs) if cs is not None else poisson_bracket(f, g)
    if bracket.is_zero:
        return '0'
    return f"i*hbar*({bracket.to_text()})"


def bracket_report(cs: ConstraintSystem) -> Dict:
    """Relatório textual canônico de todos os colchetes do modelo reduzido"""
    variables = dict(zip(('x1', 'x2', 'p1', 'p2'), COORDINATES + MOMENTA))
    dirac = {}
    commutators = {}
    for (name_a, f), (name_b, g) in combinations(variables.items(), 2):
        dirac[f"{{{name_a},{name_b}}}_D"] = dirac_bracket(f, g, cs).to_text()
        commutators[f"[{name_a},{name_b}]"] = quantized_commutator(f, g, cs)
    return {
        'classification': cs.classification.value,
        'constraints': [phi.to_text() for phi in cs.constraints],
        'bracket_matrix': [[coefficient_text(e) for e in row] for row in cs.bracket_matrix],
        'determinant': coefficient_text(cs.determinant),
        'dirac_brackets': dirac,
        'commutators': commutators,
        'reduced_angular_momentum': reduced_angular_momentum(cs).to_text(),
    }
