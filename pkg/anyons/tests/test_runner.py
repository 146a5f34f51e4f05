import json
import math
import shutil
import tempfile
from pathlib import Path
from unittest.mock import patch

import pandas as pd
from django.test import SimpleTestCase, TestCase, override_settings

from anyons.exceptions import ConfigError, ConstraintDegeneracyError
from anyons.export_utils import ArtifactExporter, validate_artifact_name
from anyons.models import SimulationRun
from anyons.runner import RunManifest, execute, run
from anyons.serializers import ConfigDocumentSerializer, SimulationRunSerializer, load_config
from anyons.utils import ConfigFileProcessor

STANDARD_DOCUMENT = {
    'kind': 'MagneticHMW',
    'lambda': 0.6 * math.pi,
    'rho': 2.0,
    'm': 1.0,
    'd_or_mu': 1.0,
    'K': 1.0,
    'natural_units': True,
}

SCHEDULE = [0.2, 0.1, 0.05]


class RunnerTestMixin:
    """Diretório temporário com a configuração padrão"""

    def setUp(self):
        super().setUp()
        self.tmp = Path(tempfile.mkdtemp())
        self.config_path = self.tmp / 'standard.json'
        self.config_path.write_text(json.dumps(STANDARD_DOCUMENT), encoding='utf-8')

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)
        super().tearDown()

    def manifest(self, name, out, overrides=None, **options):
        return RunManifest(name, self.config_path, self.tmp / out, overrides or {}, options)


class RunTest(RunnerTestMixin, TestCase):
    """Testes para run() e o registro SimulationRun"""

    def test_spectrum_run(self):
        """Testar execução do espectro com setores -5..5 e 8 níveis"""
        outcome = run(self.manifest('spectrum', 'spectrum'))
        frame = pd.read_csv(self.tmp / 'spectrum' / 'spectrum.csv')
        self.assertEqual(len(frame), 88)
        self.assertEqual(outcome.run.status, 'completed')
        self.assertEqual(outcome.run.exit_code, 0)
        self.assertIsNotNone(outcome.run.completed_at)
        self.assertTrue((self.tmp / 'spectrum' / 'manifest.json').exists())

    def test_deterministic_artifacts(self):
        """Testar artefatos idênticos byte a byte em duas execuções"""
        run(self.manifest('spectrum', 'a', sectors=[-1, 0, 1], levels=3))
        run(self.manifest('spectrum', 'b', sectors=[-1, 0, 1], levels=3))
        self.assertEqual((self.tmp / 'a' / 'spectrum.csv').read_bytes(),
                         (self.tmp / 'b' / 'spectrum.csv').read_bytes())

    def test_invalid_override_fails_run(self):
        """Testar execução marcada como falha com código 2"""
        with self.assertRaises(ConfigError) as ctx:
            run(self.manifest('cyon', 'bad', overrides={'m': -1.0}))
        self.assertEqual(ctx.exception.key, 'm')
        record = SimulationRun.objects.get()
        self.assertEqual(record.status, 'failed')
        self.assertEqual(record.exit_code, 2)
        self.assertIn('[params_fields]', record.error_message)

    def test_degenerate_dirac_run(self):
        """Testar dirac com rho = 0: execução falha com código 4"""
        with self.assertRaises(ConstraintDegeneracyError):
            run(self.manifest('dirac', 'dirac', overrides={'rho': 0.0}))
        record = SimulationRun.objects.get()
        self.assertEqual(record.status, 'failed')
        self.assertEqual(record.exit_code, 4)

    def test_cyon_without_filament(self):
        """Testar spin nulo com lambda = 0"""
        run(self.manifest('cyon', 'cyon', overrides={'lambda': 0}))
        payload = json.loads((self.tmp / 'cyon' / 'cyon.json').read_text(encoding='utf-8'))
        self.assertEqual(payload['spin'], 0.0)
        self.assertIsNone(payload['spin_rate_per_s'])

    def test_duality_twice(self):
        """Testar dr1(dr2(cfg)) = (-lambda, -rho, -d) em unidades naturais"""
        run(self.manifest('duality', 'first'))
        first = self.tmp / 'first' / 'dual_config.json'
        execute(RunManifest('duality', first, self.tmp / 'second'))
        document = json.loads((self.tmp / 'second' / 'dual_config.json').read_text(encoding='utf-8'))
        self.assertEqual(document['kind'], 'MagneticHMW')
        self.assertEqual(document['lambda'], -STANDARD_DOCUMENT['lambda'])
        self.assertEqual(document['rho'], -STANDARD_DOCUMENT['rho'])
        self.assertEqual(document['d_or_mu'], -STANDARD_DOCUMENT['d_or_mu'])

    def test_manifest_records_config(self):
        """Testar manifesto com overrides e documento efetivo"""
        run(self.manifest('cyon', 'cyon', overrides={'lambda': 0.2 * math.pi}))
        payload = json.loads((self.tmp / 'cyon' / 'manifest.json').read_text(encoding='utf-8'))
        self.assertEqual(payload['command'], 'cyon')
        self.assertEqual(payload['config']['lambda'], 0.2 * math.pi)
        self.assertIn('written_at', payload)

    def test_unknown_command(self):
        """Testar comando desconhecido"""
        with self.assertRaises(ConfigError):
            self.manifest('plot', 'plot')

    def test_unexpected_error_fails_run(self):
        """Testar erro fora da hierarquia do cyon_lab: execução falha com código 1"""
        with patch('anyons.runner.spectrum_table', side_effect=MemoryError('sem memória')):
            with self.assertRaises(MemoryError):
                run(self.manifest('spectrum', 'oom'))
        record = SimulationRun.objects.get()
        self.assertEqual(record.status, 'failed')
        self.assertEqual(record.exit_code, 1)
        self.assertIsNotNone(record.completed_at)
        self.assertIn('MemoryError', record.error_message)

    def test_run_record_serializer(self):
        """Testar serialização do registro da execução"""
        outcome = run(self.manifest('cyon', 'cyon'))
        data = SimulationRunSerializer(outcome.run).data
        self.assertEqual(data['id'], str(outcome.run.id))
        self.assertEqual(data['command'], 'cyon')
        self.assertEqual(data['status'], 'completed')
        self.assertEqual(data['exit_code'], 0)
        self.assertIsNone(data['error_message'])


class SweepTest(RunnerTestMixin, TestCase):
    """Testes para as varreduras de parâmetros"""

    def test_reduce_sweep_over_lambda(self):
        """Testar alpha = 0.1, 0.2, 0.3 ao longo de lambda"""
        grid = {'lambda': [0.2 * math.pi, 0.4 * math.pi, 0.6 * math.pi]}
        outcome = run(self.manifest('sweep', 'sweep', command='reduce', grid=grid, schedule=SCHEDULE))
        self.assertEqual(outcome.run.status, 'completed')
        index = pd.read_csv(self.tmp / 'sweep' / 'index.csv')
        self.assertEqual(list(index['status']), ['ok'] * 3)
        for point, expected in zip(index['point'], (0.1, 0.2, 0.3)):
            summary = json.loads((self.tmp / 'sweep' / point / 'reduction.json').read_text(encoding='utf-8'))
            self.assertAlmostEqual(summary['alpha'], expected, places=12)

    def test_axis_order_does_not_matter(self):
        """Testar que permutar os eixos não altera os artefatos"""
        first = {'lambda': [0.2, 0.4], 'd_or_mu': [1.0, 2.0]}
        second = {'d_or_mu': [1.0, 2.0], 'lambda': [0.2, 0.4]}
        execute(self.manifest('sweep', 'one', command='cyon', grid=first))
        execute(self.manifest('sweep', 'two', command='cyon', grid=second))
        self.assertEqual((self.tmp / 'one' / 'index.csv').read_bytes(),
                         (self.tmp / 'two' / 'index.csv').read_bytes())
        for index in range(4):
            point = f"point_{index:04d}"
            self.assertEqual((self.tmp / 'one' / point / 'cyon.json').read_bytes(),
                             (self.tmp / 'two' / point / 'cyon.json').read_bytes())

    def test_point_cap(self):
        """Testar recusa de grade acima do limite"""
        grid = {'lambda': [0.1, 0.2, 0.3]}
        with override_settings(CYONLAB_SWEEP_POINT_CAP=2):
            with self.assertRaises(ConfigError) as ctx:
                execute(self.manifest('sweep', 'cap', command='cyon', grid=grid))
        self.assertIn('3', ctx.exception.message)
        self.assertFalse((self.tmp / 'cap' / 'index.csv').exists())

    def test_empty_grid(self):
        """Testar grade vazia: index.csv só com cabeçalho"""
        execute(self.manifest('sweep', 'empty', command='cyon', grid={}))
        text = (self.tmp / 'empty' / 'index.csv').read_text(encoding='utf-8')
        self.assertEqual(text, 'point,status,exit_code,message\n')

    def test_failed_point_becomes_error_row(self):
        """Testar ponto com rho = 0 registrado com código 4 sem abortar a varredura"""
        grid = {'rho': [0.0, 2.0]}
        execute(self.manifest('sweep', 'mixed', command='reduce', grid=grid, schedule=SCHEDULE))
        index = pd.read_csv(self.tmp / 'mixed' / 'index.csv')
        self.assertEqual(list(index['status']), ['error', 'ok'])
        self.assertEqual(list(index['exit_code']), [4, 0])
        self.assertIn('theta indefinido', index['message'][0])

    def test_unexpected_point_error_becomes_error_row(self):
        """Testar erro inesperado num ponto registrado com código 1"""
        with patch('anyons.runner.spectrum_table', side_effect=MemoryError('sem memória')):
            execute(self.manifest('sweep', 'oom', command='spectrum', grid={'rho': [1.0, 2.0]}))
        index = pd.read_csv(self.tmp / 'oom' / 'index.csv')
        self.assertEqual(list(index['status']), ['error', 'error'])
        self.assertEqual(list(index['exit_code']), [1, 1])
        self.assertIn('MemoryError', index['message'][0])

    def test_invalid_base_config(self):
        """Testar varredura recusada com configuração base inválida"""
        with self.assertRaises(ConfigError):
            execute(self.manifest('sweep', 'bad', overrides={'kind': 'Gravitational'},
                                  command='cyon', grid={'lambda': [0.1]}))


class ConfigFileProcessorTest(RunnerTestMixin, SimpleTestCase):
    """Testes para a leitura de configurações e argumentos"""

    def test_read_config(self):
        """Testar leitura do arquivo de configuração"""
        self.assertEqual(ConfigFileProcessor.read_config_file(self.config_path), STANDARD_DOCUMENT)

    def test_json_error_position(self):
        """Testar diagnóstico com linha e coluna"""
        broken = self.tmp / 'broken.json'
        broken.write_text('{\n  "m": 1.0,\n  "K": \n}', encoding='utf-8')
        with self.assertRaises(ConfigError) as ctx:
            ConfigFileProcessor.read_config_file(broken)
        self.assertIn('linha 4', ctx.exception.message)

    def test_missing_file(self):
        """Testar arquivo inexistente"""
        with self.assertRaises(ConfigError):
            ConfigFileProcessor.read_config_file(self.tmp / 'missing.json')

    def test_overrides(self):
        """Testar key=value com valores JSON e texto"""
        overrides = ConfigFileProcessor.parse_overrides(['rho=0', 'kind=ElectricAC', 'natural_units=true'])
        self.assertEqual(overrides, {'rho': 0, 'kind': 'ElectricAC', 'natural_units': True})
        with self.assertRaises(ConfigError) as ctx:
            ConfigFileProcessor.parse_override('temperature=3')
        self.assertEqual(ctx.exception.key, 'temperature')
        with self.assertRaises(ConfigError):
            ConfigFileProcessor.parse_override('rho')

    def test_sectors(self):
        """Testar intervalo de setores A..B"""
        self.assertEqual(ConfigFileProcessor.parse_sectors('-2..1'), [-2, -1, 0, 1])
        self.assertEqual(ConfigFileProcessor.parse_sectors('3..3'), [3])
        for text in ('2..1', '1-3', ''):
            with self.assertRaises(ConfigError):
                ConfigFileProcessor.parse_sectors(text)

    def test_schedule(self):
        """Testar esquema de mu separado por vírgulas"""
        self.assertEqual(ConfigFileProcessor.parse_schedule('0.1,0.01,0.001'), [0.1, 0.01, 0.001])
        with self.assertRaises(ConfigError):
            ConfigFileProcessor.parse_schedule('0.1,abc')

    def test_grid(self):
        """Testar eixos start:stop:count"""
        grid = ConfigFileProcessor.parse_grid(['lambda=0:1:3', 'rho=2:2:1'])
        self.assertEqual(grid, {'lambda': [0.0, 0.5, 1.0], 'rho': [2.0]})
        for items in (['kind=0:1:2'], ['rho=0:1'], ['rho=0:1:0'], ['rho=0:1:2', 'rho=1:2:2']):
            with self.assertRaises(ConfigError):
                ConfigFileProcessor.parse_grid(items)


class ArtifactExporterTest(RunnerTestMixin, SimpleTestCase):
    """Testes para a gravação dos artefatos"""

    def test_artifact_names(self):
        """Testar validação dos nomes de artefato"""
        self.assertTrue(validate_artifact_name('spectrum.csv'))
        self.assertFalse(validate_artifact_name('../spectrum.csv'))
        self.assertFalse(validate_artifact_name('spectrum.png'))
        with self.assertRaises(ValueError):
            ArtifactExporter(self.tmp).path('sub/dir.json')

    def test_series_format(self):
        """Testar arquivo .dat com cabeçalho comentado"""
        path = ArtifactExporter(self.tmp).export_series([0.1, 0.05], [1.0, 0.25], 'errors.dat', header='mu erro')
        lines = path.read_text(encoding='utf-8').splitlines()
        self.assertEqual(lines[0], '# mu erro')
        self.assertEqual(lines[1].split(), ['0.10000000000000001', '1'])


class ConfigSerializerTest(SimpleTestCase):
    """Testes para o serializer do documento de configuração"""

    def test_valid_document(self):
        """Testar documento válido"""
        params, cfg = load_config(STANDARD_DOCUMENT)
        self.assertEqual(params.c, 1.0)
        self.assertEqual(cfg.rho, 2.0)

    def test_error_names_key(self):
        """Testar erro apontando a chave problemática"""
        serializer = ConfigDocumentSerializer(data={**STANDARD_DOCUMENT, 'K': 'abc'})
        self.assertFalse(serializer.is_valid())
        self.assertIn('K', serializer.errors)
        with self.assertRaises(ConfigError) as ctx:
            load_config({key: value for key, value in STANDARD_DOCUMENT.items() if key != 'm'})
        self.assertEqual(ctx.exception.key, 'm')
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_non_object(self):
        """Testar documento que não é objeto"""
        with self.assertRaises(ConfigError) as ctx:
            load_config([1, 2, 3])
        self.assertIsNone(ctx.exception.key)
