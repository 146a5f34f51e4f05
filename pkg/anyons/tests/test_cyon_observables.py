import math
import random

from django.test import SimpleTestCase

from anyons.cyon_observables import (
    CyonReport, boundary_term_split, canonical_J_conserved, canonical_J_rate, cyon_report, cyon_spin,
    spin_boundary_complementarity, spin_rate, symbolic_boundary_term, symbolic_spin,
)
from anyons.params_fields import ChargedReference, FieldConfig, FieldKind, SystemParams, dual_map
from anyons.phase_algebra import P
from anyons.serializers import CyonReportSerializer

NATURAL = SystemParams(m=1.0, K=1.0, c=1.0, hbar=1.0, natural_units=True)


def hmw(lam=0.6 * math.pi, rho=2.0, dipole=1.0):
    return FieldConfig(FieldKind.MAGNETIC_HMW, lam, rho, dipole, eps0=1.0, mu0=1.0)


class CyonSpinTest(SimpleTestCase):
    """Testes para o spin fracionário"""

    def test_spin_value(self):
        """Testar s = 0.3 com lambda_m = 0.6 pi"""
        self.assertAlmostEqual(cyon_spin(hmw(), NATURAL), 0.3, places=15)

    def test_zero_line_density(self):
        """Testar s = 0 sem filamento"""
        self.assertEqual(cyon_spin(hmw(lam=0.0), NATURAL), 0.0)

    def test_linearity(self):
        """Testar linearidade em lambda_m e em d"""
        rng = random.Random(17)
        base = cyon_spin(hmw(), NATURAL)
        for _ in range(10):
            k = rng.uniform(-5, 5)
            self.assertAlmostEqual(cyon_spin(hmw(lam=k * 0.6 * math.pi), NATURAL), k * base, places=12)
            self.assertAlmostEqual(cyon_spin(hmw(dipole=k), NATURAL), k * base, places=12)

    def test_duality_consistency(self):
        """Testar spin do dual AC igual ao spin HMW, em unidades naturais e SI"""
        self.assertAlmostEqual(cyon_spin(dual_map(hmw()), NATURAL), 0.3, places=14)
        si = SystemParams(m=1e-26, K=1e-20)
        cfg = FieldConfig(FieldKind.MAGNETIC_HMW, 1.0e3, 1.0, 1.0e-29)
        ratio = cyon_spin(dual_map(cfg), si) / cyon_spin(cfg, si)
        self.assertAlmostEqual(ratio, 1.0, places=12)


class BoundaryTermTest(SimpleTestCase):
    """Testes para a separação J_c = J_k + J_s"""

    def test_atom_split(self):
        """Testar (J_k - J_c, J_s) = (0.3, -0.3) hbar"""
        shift, boundary = boundary_term_split(hmw(), NATURAL)
        self.assertAlmostEqual(shift, 0.3, places=15)
        self.assertAlmostEqual(boundary, -0.3, places=15)

    def test_no_sources(self):
        """Testar separação nula sem fontes"""
        self.assertEqual(boundary_term_split(hmw(lam=0.0, rho=0.0), NATURAL), (0.0, 0.0))

    def test_charged_model_agrees(self):
        """Testar modelo carregado com q Phi/(2 pi c) = 0.3 hbar"""
        charged = boundary_term_split(ChargedReference(q=1.0, flux=0.6 * math.pi), NATURAL)
        atom = boundary_term_split(hmw(), NATURAL)
        self.assertAlmostEqual(charged[0], atom[0], places=15)
        self.assertAlmostEqual(charged[1], atom[1], places=15)

    def test_electric_shift_orientation(self):
        """Testar deslocamento cinético -s no caso AC"""
        cfg = FieldConfig(FieldKind.ELECTRIC_AC, 0.6 * math.pi, 2.0, 1.0, eps0=1.0, mu0=1.0)
        report = cyon_report(cfg, NATURAL)
        self.assertAlmostEqual(report.spin, 0.3, places=15)
        self.assertAlmostEqual(report.kinetic_shift, -0.3, places=15)
        self.assertEqual(report.boundary_term, -report.kinetic_shift)


class SpinRateTest(SimpleTestCase):
    """Testes para a não conservação do spin"""

    def test_rate_values(self):
        """Testar ds/dt = d lambda_dot/(2 pi hbar c^2)"""
        self.assertAlmostEqual(spin_rate(2 * math.pi, hmw(), NATURAL), 1.0, places=15)
        self.assertEqual(spin_rate(0.0, hmw(), NATURAL), 0.0)

    def test_finite_difference(self):
        """Testar diferença central de s ao longo de lambda(t) = lambda_0 + t lambda_dot"""
        lambda_dot, h = 0.7, 1e-5
        forward = cyon_spin(hmw(lam=0.6 * math.pi + h * lambda_dot), NATURAL)
        backward = cyon_spin(hmw(lam=0.6 * math.pi - h * lambda_dot), NATURAL)
        self.assertAlmostEqual((forward - backward) / (2 * h), spin_rate(lambda_dot, hmw(), NATURAL), delta=1e-10)

    def test_canonical_rate_is_zero(self):
        """Testar J_c conservado"""
        self.assertEqual(canonical_J_rate(), 0.0)


class SymbolicIdentityTest(SimpleTestCase):
    """Testes simbólicos das identidades de cyon"""

    def test_boundary_term_symbolic(self):
        """Testar J_s = -lambda_m d/(2 pi c^2)"""
        expected = -P['lambda_m'] * P['d'] / (2 * P['pi'] * P['c'] ** 2)
        self.assertEqual(symbolic_boundary_term(), expected)

    def test_complementarity(self):
        """Testar s hbar + J_s = 0 nos dois tipos de campo"""
        self.assertTrue(spin_boundary_complementarity(FieldKind.MAGNETIC_HMW))
        self.assertTrue(spin_boundary_complementarity(FieldKind.ELECTRIC_AC))

    def test_dual_spin_formula(self):
        """Testar fórmula dual mu lambda_e/(2 pi hbar c^2 eps0)"""
        expected = P['mu'] * P['lambda_e'] / (2 * P['pi'] * P['hbar'] * P['c'] ** 2 * P['eps0'])
        self.assertEqual(symbolic_spin(FieldKind.ELECTRIC_AC), expected)

    def test_canonical_J_conserved(self):
        """Testar {J_c, H} = 0 nos três modelos"""
        for model in ('atom', 'trapped', 'charged'):
            self.assertTrue(canonical_J_conserved(model), msg=model)


class CyonReportTest(SimpleTestCase):
    """Testes para o relatório de cyon"""

    def test_report_fields(self):
        """Testar relatório completo com lambda_dot"""
        report = cyon_report(hmw(), NATURAL, lambda_dot=2 * math.pi)
        self.assertIsInstance(report, CyonReport)
        self.assertAlmostEqual(report.kinetic_shift, report.spin, places=15)
        self.assertAlmostEqual(report.spin_rate, 1.0, places=15)

    def test_json_keys(self):
        """Testar chaves do JSON do relatório"""
        report = cyon_report(hmw(), NATURAL)
        data = CyonReportSerializer(report).data
        self.assertEqual(set(data), {'spin', 'boundary_term_hbar', 'kinetic_shift_hbar', 'spin_rate_per_s'})
        self.assertIsNone(data['spin_rate_per_s'])
        self.assertEqual(dict(data), report.to_dict())
