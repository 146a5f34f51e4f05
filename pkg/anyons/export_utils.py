import json
import logging
import os
from pathlib import Path
from typing import Dict, Iterable, Optional

import pandas as pd
from django.conf import settings
from django.utils import timezone

logger = logging.getLogger(__name__)


class ArtifactExporter:
    """
    Classe para gravar os artefatos de uma execução.

    CSV com 17 algarismos significativos e JSON com chaves ordenadas: duas
    execuções do mesmo manifesto produzem arquivos idênticos byte a byte.
    Só o manifest.json carrega carimbo de tempo.
    """

    def __init__(self, output_dir):
        self.output_dir = Path(output_dir)
        os.makedirs(self.output_dir, exist_ok=True)

    def path(self, name: str) -> Path:
        if not validate_artifact_name(name):
            raise ValueError(f"Nome de artefato inválido: {name}")
        return self.output_dir / name

    def export_dataframe(self, frame: pd.DataFrame, name: str) -> Path:
        output_path = self.path(name)
        frame.to_csv(output_path, index=False, float_format=settings.CYONLAB_CSV_FLOAT_FORMAT,
                     lineterminator='\n')
        logger.info(f"Artefato CSV gravado: {output_path} ({len(frame)} linhas)")
        return output_path

    def export_json(self, payload: Dict, name: str) -> Path:
        output_path = self.path(name)
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(payload, f, sort_keys=True, indent=2, ensure_ascii=False)
            f.write('\n')
        logger.info(f"Artefato JSON gravado: {output_path}")
        return output_path

    def export_series(self, x: Iterable[float], y: Iterable[float], name: str,
                      header: Optional[str] = None) -> Path:
        """Arquivo .dat de duas colunas para gráficos log-log"""
        output_path = self.path(name)
        fmt = settings.CYONLAB_CSV_FLOAT_FORMAT
        with open(output_path, 'w', encoding='utf-8') as f:
            if header:
                f.write(f"# {header}\n")
            for a, b in zip(x, y):
                f.write(f"{fmt % a} {fmt % b}\n")
        return output_path

    def export_manifest(self, manifest: Dict) -> Path:
        payload = dict(manifest)
        payload['written_at'] = timezone.now().isoformat()
        return self.export_json(payload, 'manifest.json')


def validate_artifact_name(name: str) -> bool:
    """Nomes de artefato são simples (sem diretórios) e têm extensão conhecida"""
    if os.path.basename(name) != name:
        logger.error(f"Nome de artefato inválido: {name}")
        return False
    return name.rsplit('.', 1)[-1] in ('csv', 'json', 'dat')
