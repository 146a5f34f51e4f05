import math
import random

from django.test import SimpleTestCase

from anyons.exceptions import ConstraintDegeneracyError
from anyons.params_fields import FieldConfig, FieldKind, SystemParams
from anyons.phase_algebra import (
    P, PhasePoly, Classification, bracket_report, build_reduced_constraints,
    canonical_angular_momentum, charged_model_identities, dirac_bracket, epsilon,
    ParamField, classify_constraints, p1, p2, param, poisson_bracket, quantized_commutator,
    reduced_angular_momentum, u, x1, x2,
)

NATURAL = SystemParams(m=1.0, K=1.0, c=1.0, hbar=1.0, natural_units=True)


def random_poly(rng: random.Random, terms: int = 3) -> PhasePoly:
    """Polinômio aleatório de grau baixo com coeficientes nos parâmetros"""
    coefficients = [1, P['d'], P['rho_m'], P['c'], P['lambda_m']]
    result = PhasePoly()
    for _ in range(terms):
        monomial = PhasePoly(1)
        for var in (x1, x2, p1, p2):
            monomial = monomial * var ** rng.randint(0, 2)
        if rng.random() < 0.2:
            monomial = monomial * u
        coeff = rng.choice([-3, -2, -1, 1, 2, 3]) * rng.choice(coefficients)
        result = result + monomial * coeff
    return result


class PhasePolyTest(SimpleTestCase):
    """Testes para a forma canônica dos observáveis"""

    def test_radial_relation_normal_form(self):
        """Testar x1^2 u + x2^2 u = 1"""
        self.assertEqual(x1 ** 2 * u + x2 ** 2 * u, PhasePoly(1))

    def test_text_round_trip(self):
        """Testar que from_text(to_text(f)) reconstrói f"""
        rng = random.Random(3)
        for _ in range(10):
            f = random_poly(rng)
            self.assertEqual(PhasePoly.from_text(f.to_text()), f)

    def test_zero_text(self):
        """Testar texto do polinômio nulo"""
        self.assertEqual(PhasePoly().to_text(), '0')

    def test_evaluate(self):
        """Testar avaliação numérica com u = 1/r^2"""
        f = x1 * p2 * P['d'] + u
        value = f.evaluate({'x1': 1.0, 'x2': 1.0, 'p1': 0.0, 'p2': 2.0, 'd': 3.0})
        self.assertAlmostEqual(value, 6.5, places=14)

    def test_epsilon(self):
        """Testar símbolo de Levi-Civita com epsilon_12 = +1"""
        self.assertEqual(epsilon(1, 2), 1)
        self.assertEqual(epsilon(2, 1), -1)
        self.assertEqual(epsilon(1, 1), 0)

    def test_param_conversion(self):
        """Testar conversão de nomes, números e elementos do corpo de parâmetros"""
        self.assertIsInstance(ParamField, type)
        self.assertIs(param(P['d']), P['d'])
        self.assertEqual(param('rho_m'), P['rho_m'])
        self.assertEqual(param(0.5), P['d'] / (2 * P['d']))
        self.assertIsInstance(param(3), ParamField)


class PoissonBracketTest(SimpleTestCase):
    """Testes para o colchete de Poisson canônico"""

    def test_canonical_pairs(self):
        """Testar {x_i, p_j} = delta_ij"""
        self.assertEqual(poisson_bracket(x1, p1), PhasePoly(1))
        self.assertEqual(poisson_bracket(x2, p2), PhasePoly(1))
        self.assertTrue(poisson_bracket(x1, p2).is_zero)
        self.assertTrue(poisson_bracket(x1, x2).is_zero)

    def test_radial_generator(self):
        """Testar {u, p_1} = -2 x_1 u^2"""
        self.assertEqual(poisson_bracket(u, p1), x1 * u ** 2 * (-2))

    def test_antisymmetry(self):
        """Testar antissimetria em 50 instâncias aleatórias"""
        rng = random.Random(101)
        for _ in range(50):
            f, g = random_poly(rng), random_poly(rng)
            self.assertTrue((poisson_bracket(f, g) + poisson_bracket(g, f)).is_zero)

    def test_leibniz(self):
        """Testar regra de Leibniz em 50 instâncias aleatórias"""
        rng = random.Random(202)
        for _ in range(50):
            f, g, h = random_poly(rng), random_poly(rng), random_poly(rng)
            lhs = poisson_bracket(f, g * h)
            rhs = poisson_bracket(f, g) * h + g * poisson_bracket(f, h)
            self.assertEqual(lhs, rhs)

    def test_jacobi(self):
        """Testar identidade de Jacobi em 50 instâncias aleatórias"""
        rng = random.Random(303)
        for _ in range(50):
            f, g, h = random_poly(rng, 2), random_poly(rng, 2), random_poly(rng, 2)
            total = (poisson_bracket(f, poisson_bracket(g, h))
                     + poisson_bracket(g, poisson_bracket(h, f))
                     + poisson_bracket(h, poisson_bracket(f, g)))
            self.assertTrue(total.is_zero)


class DiracBracketTest(SimpleTestCase):
    """Testes para os vínculos do modelo reduzido e o colchete de Dirac"""

    def setUp(self):
        self.cs = build_reduced_constraints()

    def test_second_class(self):
        """Testar classificação de segunda classe"""
        self.assertEqual(self.cs.classification, Classification.SECOND_CLASS)
        self.assertEqual(self.cs.determinant, (P['d'] * P['rho_m'] / P['c'] ** 2) ** 2)

    def test_coordinate_bracket(self):
        """Testar {x1, x2}_D = c^2/(d rho_m)"""
        expected = PhasePoly(P['c'] ** 2 / (P['d'] * P['rho_m']))
        self.assertEqual(dirac_bracket(x1, x2, self.cs), expected)
        self.assertEqual(dirac_bracket(x2, x1, self.cs), -expected)

    def test_reduced_angular_momentum(self):
        """Testar J = -(d/2c^2)(rho_m r^2 + lambda_m/pi)"""
        d, c = P['d'], P['c']
        expected = (x1 ** 2 + x2 ** 2) * (-d * P['rho_m'] / (2 * c ** 2)) \
            + PhasePoly(-d * P['lambda_m'] / (2 * P['pi'] * c ** 2))
        self.assertEqual(reduced_angular_momentum(self.cs), expected)

    def test_electric_constraints(self):
        """Testar {x1, x2}_D = -c^2 eps0/(mu rho_e) e J reduzido do caso AC"""
        cs = build_reduced_constraints(kind=FieldKind.ELECTRIC_AC)
        c, mu, eps0 = P['c'], P['mu'], P['eps0']
        self.assertEqual(dirac_bracket(x1, x2, cs), PhasePoly(-c ** 2 * eps0 / (mu * P['rho_e'])))
        expected = (x1 ** 2 + x2 ** 2) * (mu * P['rho_e'] / (2 * c ** 2 * eps0)) \
            + PhasePoly(mu * P['lambda_e'] / (2 * P['pi'] * c ** 2 * eps0))
        self.assertEqual(reduced_angular_momentum(cs), expected)

    def test_numeric_configuration(self):
        """Testar colchete com valores numéricos exatos (theta = 0.5)"""
        cfg = FieldConfig(FieldKind.MAGNETIC_HMW, 0.6 * math.pi, 2.0, 1.0, eps0=1.0, mu0=1.0)
        cs = build_reduced_constraints(cfg, NATURAL)
        bracket = dirac_bracket(x1, x2, cs)
        self.assertTrue(bracket.is_constant)
        self.assertEqual(bracket, PhasePoly(0.5))

    def test_degenerate_without_rho(self):
        """Testar rho = 0: vínculos não são de segunda classe"""
        cfg = FieldConfig(FieldKind.MAGNETIC_HMW, 1.0, 0.0, 1.0, eps0=1.0, mu0=1.0)
        cs = build_reduced_constraints(cfg, NATURAL)
        self.assertEqual(cs.classification, Classification.NOT_SECOND_CLASS)
        with self.assertRaises(ConstraintDegeneracyError):
            dirac_bracket(x1, x2, cs)

    def test_empty_constraint_set(self):
        """Testar conjunto vazio de vínculos: sem classificação de segunda classe e Dirac = Poisson"""
        cs = classify_constraints([])
        self.assertEqual(cs.classification, Classification.UNCONSTRAINED)
        self.assertFalse(cs.is_second_class)
        self.assertEqual(dirac_bracket(x1, p1, cs), PhasePoly(1))
        self.assertTrue(dirac_bracket(x1, x2, cs).is_zero)

    def test_dirac_antisymmetry_and_leibniz(self):
        """Testar antissimetria e Leibniz do colchete de Dirac em 50 instâncias"""
        rng = random.Random(404)
        for _ in range(50):
            f, g, h = random_poly(rng, 2), random_poly(rng, 2), random_poly(rng, 2)
            self.assertTrue((dirac_bracket(f, g, self.cs) + dirac_bracket(g, f, self.cs)).is_zero)
            lhs = dirac_bracket(f, g * h, self.cs)
            rhs = dirac_bracket(f, g, self.cs) * h + g * dirac_bracket(f, h, self.cs)
            self.assertEqual(lhs, rhs)

    def test_constraints_annihilate(self):
        """Testar {phi_a, f}_D = 0 em 50 instâncias"""
        rng = random.Random(505)
        for _ in range(50):
            f = random_poly(rng)
            for phi in self.cs.constraints:
                self.assertTrue(dirac_bracket(phi, f, self.cs).is_zero)

    def test_quantized_commutator(self):
        """Testar [x1, x2] = i hbar c^2/(d rho_m)"""
        text = quantized_commutator(x1, x2, self.cs)
        self.assertTrue(text.startswith('i*hbar*('))
        inner = PhasePoly.from_text(text[len('i*hbar*('):-1])
        self.assertEqual(inner, PhasePoly(P['c'] ** 2 / (P['d'] * P['rho_m'])))
        self.assertEqual(quantized_commutator(x1, x1, self.cs), '0')

    def test_bracket_report(self):
        """Testar relatório textual dos colchetes"""
        report = bracket_report(self.cs)
        self.assertEqual(report['classification'], 'SecondClass')
        self.assertEqual(len(report['constraints']), 2)
        self.assertIn('{x1,x2}_D', report['dirac_brackets'])
        self.assertIn('[x1,x2]', report['commutators'])
        self.assertEqual(
            PhasePoly.from_text(report['reduced_angular_momentum']),
            reduced_angular_momentum(self.cs),
        )


class CyonModelIdentityTest(SimpleTestCase):
    """Testes para as identidades J_c = J_k + constante"""

    def test_identities(self):
        """Testar deslocamentos -q Phi/(2 pi c) e -lambda_m d/(2 pi c^2)"""
        report = charged_model_identities()
        self.assertTrue(report.verified)
        self.assertEqual(report.atom_shift, -P['lambda_m'] * P['d'] / (2 * P['pi'] * P['c'] ** 2))

    def test_canonical_angular_momentum(self):
        """Testar {J_c, x1} = x2 e {J_c, x2} = -x1"""
        J = canonical_angular_momentum()
        self.assertEqual(poisson_bracket(J, x1), x2)
        self.assertEqual(poisson_bracket(J, x2), -x1)
