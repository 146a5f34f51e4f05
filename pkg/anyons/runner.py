"""
Execução dos comandos do cyon_lab e varreduras de parâmetros.

run() registra um SimulationRun (pending -> processing -> completed | failed)
e delega a execute(), que não toca o banco e é reutilizada por cada ponto
de uma varredura.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import pandas as pd
from django.conf import settings
from django.utils import timezone

from .band_reduction import convergence_study
from .cyon_observables import cyon_report
from .exceptions import ConfigError, CyonLabError
from .export_utils import ArtifactExporter
from .models import SimulationRun
from .params_fields import FieldConfig, SystemParams, configuration_document, dual_map
from .phase_algebra import bracket_report, build_reduced_constraints, charged_model_identities
from .serializers import CyonReportSerializer, load_config
from .spectral_solver import spectrum_table
from .utils import ConfigFileProcessor

logger = logging.getLogger(__name__)

MODULE = 'cli_runner'

COMMANDS = ('spectrum', 'reduce', 'dirac', 'cyon', 'duality', 'sweep')

DEFAULT_SECTORS = list(range(-5, 6))
DEFAULT_LEVELS = 8
DEFAULT_SCHEDULE = [0.1, 0.01, 0.001]


@dataclass
class RunManifest:
    """
    Descrição completa de uma execução. Não há geração aleatória em nenhum
    ponto: manifestos iguais produzem artefatos idênticos.
    """
    command: str
    config_path: str
    output_dir: str
    overrides: Dict = field(default_factory=dict)
    options: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"comando desconhecido: {self.command}", module=MODULE)
        self.config_path = str(self.config_path)
        self.output_dir = str(self.output_dir)

    def to_dict(self) -> Dict:
        return asdict(self)

    def for_point(self, command: str, overrides: Dict, output_dir: Path) -> 'RunManifest':
        options = {k: v for k, v in self.options.items() if k not in ('grid', 'command')}
        return RunManifest(command, self.config_path, str(output_dir),
                           {**self.overrides, **overrides}, options)


@dataclass(frozen=True)
class RunOutcome:
    run: SimulationRun
    artifacts: List[Path]


def load_manifest_config(manifest: RunManifest) -> Tuple[Dict, SystemParams, FieldConfig]:
    """Arquivo + overrides, validados pelo único caminho de validação"""
    document = ConfigFileProcessor.read_config_file(manifest.config_path)
    document = ConfigFileProcessor.apply_overrides(document, manifest.overrides)
    params, cfg = load_config(document)
    return document, params, cfg


def _run_spectrum(params, cfg, options, exporter) -> List[Path]:
    table = spectrum_table(cfg, params, options.get('sectors', DEFAULT_SECTORS),
                           options.get('levels', DEFAULT_LEVELS))
    return [exporter.export_dataframe(table.to_dataframe(), 'spectrum.csv')]


def _run_reduce(params, cfg, options, exporter) -> List[Path]:
    report = convergence_study(
        cfg, params, options.get('schedule', DEFAULT_SCHEDULE),
        band_size=options.get('band_size'), filament=options.get('filament', 'gauge'),
    )
    return [
        exporter.export_dataframe(report.to_dataframe(), 'reduction.csv'),
        exporter.export_json(report.summary(), 'reduction.json'),
        exporter.export_series(report.schedule, report.J_error, 'reduction_J_error.dat',
                               header='mu max|J_n - J_n(alvo)| [hbar]'),
        exporter.export_series(report.schedule, report.commutator_error, 'reduction_commutator_error.dat',
                               header='mu |[X1,X2]/i - theta|/|theta|'),
    ]


def _run_dirac(params, cfg, options, exporter) -> List[Path]:
    identities = charged_model_identities()
    payload = {
        'kind': cfg.kind.value,
        'symbolic': bracket_report(build_reduced_constraints(kind=cfg.kind)),
        'configured': bracket_report(build_reduced_constraints(cfg, params)),
        'cyon_identities_verified': identities.verified,
    }
    return [exporter.export_json(payload, 'dirac.json')]


def _run_cyon(params, cfg, options, exporter) -> List[Path]:
    report = cyon_report(cfg, params, lambda_dot=options.get('lambda_dot'))
    return [exporter.export_json(dict(CyonReportSerializer(report).data), 'cyon.json')]


def _run_duality(params, cfg, options, exporter) -> List[Path]:
    dual = dual_map(cfg)
    logger.info(f"Dualidade: {cfg.kind.value} -> {dual.kind.value}")
    return [exporter.export_json(configuration_document(params, dual), 'dual_config.json')]


EXECUTORS: Dict[str, Callable] = {
    'spectrum': _run_spectrum,
    'reduce': _run_reduce,
    'dirac': _run_dirac,
    'cyon': _run_cyon,
    'duality': _run_duality,
}


def execute(manifest: RunManifest) -> List[Path]:
    """
    Executa o manifesto e grava os artefatos, sem registro no banco.

    Returns:
        Caminhos dos artefatos gravados (manifest.json incluído)
    """
    if manifest.command == 'sweep':
        return sweep(manifest, manifest.options.get('grid', {}))

    document, params, cfg = load_manifest_config(manifest)
    exporter = ArtifactExporter(manifest.output_dir)
    manifest_path = exporter.export_manifest({**manifest.to_dict(), 'config': document})
    artifacts = EXECUTORS[manifest.command](params, cfg, manifest.options, exporter)
    return [manifest_path] + artifacts


def _run_point(point_manifest: RunManifest) -> Tuple[str, int, str]:
    try:
        execute(point_manifest)
        return 'ok', 0, ''
    except CyonLabError as e:
        logger.warning(f"Ponto da varredura falhou ({point_manifest.output_dir}): {str(e)}")
        return 'error', e.exit_code, str(e)
    except Exception as e:
        logger.error(f"Erro inesperado no ponto {point_manifest.output_dir}: {type(e).__name__}: {str(e)}")
        return 'error', CyonLabError.exit_code, f"[{MODULE}] {type(e).__name__}: {str(e)}"


def sweep(manifest: RunManifest, grid: Dict[str, List[float]]) -> List[Path]:
    """
    Avalia o comando interno em cada ponto do produto cartesiano da grade.

    Os eixos são ordenados pela chave antes da expansão, então a ordem de
    declaração não altera nenhum artefato. Cada ponto grava em point_NNNN/;
    um ponto que falha vira uma linha de erro no index.csv, gravado por último.
    """
    command = manifest.options.get('command', 'spectrum')
    if command not in EXECUTORS:
        raise ConfigError(f"comando interno da varredura inválido: {command}", module=MODULE)
    load_manifest_config(manifest)

    axes = sorted(grid.items())
    keys = [key for key, _ in axes]
    cardinality = 0
    if axes:
        cardinality = 1
        for _, values in axes:
            cardinality *= len(values)
    cap = settings.CYONLAB_SWEEP_POINT_CAP
    if cardinality > cap:
        logger.warning(f"Varredura recusada: {cardinality} pontos > limite {cap}")
        raise ConfigError(f"varredura com {cardinality} pontos excede o limite de {cap}", module=MODULE)

    exporter = ArtifactExporter(manifest.output_dir)
    manifest_path = exporter.export_manifest({**manifest.to_dict(), 'axes': dict(axes)})

    points = list(product(*(values for _, values in axes))) if axes else []
    point_manifests = [
        manifest.for_point(command, dict(zip(keys, values)),
                           Path(manifest.output_dir) / f"point_{index:04d}")
        for index, values in enumerate(points)
    ]
    with ThreadPoolExecutor(max_workers=settings.CYONLAB_MAX_WORKERS) as pool:
        results = list(pool.map(_run_point, point_manifests))

    rows = []
    for index, (values, (status, exit_code, message)) in enumerate(zip(points, results)):
        rows.append([f"point_{index:04d}", *values, status, exit_code, message])
    index_frame = pd.DataFrame(rows, columns=['point', *keys, 'status', 'exit_code', 'message'])
    index_path = exporter.export_dataframe(index_frame, 'index.csv')

    failed = sum(1 for status, _, _ in results if status == 'error')
    logger.info(f"Varredura concluída: {len(points)} pontos, {failed} com erro")
    return [manifest_path, index_path]


def run(manifest: RunManifest) -> RunOutcome:
    """
    Função principal: executa o manifesto registrando o SimulationRun.

    Raises:
        CyonLabError: repassado depois de marcar a execução como falha
        Exception: qualquer outro erro também marca a execução (código 1)
    """
    simulation_run = SimulationRun.objects.create(
        command=manifest.command,
        config_path=manifest.config_path,
        output_dir=manifest.output_dir,
        overrides=manifest.overrides,
        options=manifest.options,
    )
    try:
        simulation_run.status = 'processing'
        simulation_run.save()

        artifacts = execute(manifest)

        simulation_run.status = 'completed'
        simulation_run.exit_code = 0
        simulation_run.completed_at = timezone.now()
        simulation_run.save()

        logger.info(f"Execução concluída com sucesso: {simulation_run.id} ({manifest.command})")
        return RunOutcome(simulation_run, artifacts)

    except CyonLabError as e:
        simulation_run.status = 'failed'
        simulation_run.exit_code = e.exit_code
        simulation_run.error_message = str(e)
        simulation_run.completed_at = timezone.now()
        simulation_run.save()
        logger.error(f"Erro na execução {simulation_run.id}: {str(e)}")
        raise

    except Exception as e:
        simulation_run.status = 'failed'
        simulation_run.exit_code = CyonLabError.exit_code
        simulation_run.error_message = f"[{MODULE}] {type(e).__name__}: {str(e)}"
        simulation_run.completed_at = timezone.now()
        simulation_run.save()
        logger.error(f"Erro inesperado na execução {simulation_run.id}: {str(e)}")
        raise
