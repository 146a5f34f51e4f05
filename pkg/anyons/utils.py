import json
import logging
import re
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from .exceptions import ConfigError
from .params_fields import CONFIG_KEYS, NUMERIC_KEYS

logger = logging.getLogger(__name__)

MODULE = 'cli_runner'

SECTORS_PATTERN = re.compile(r'^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$')


class ConfigFileProcessor:
    """Classe para ler configurações e interpretar os argumentos da linha de comando"""

    @staticmethod
    def read_config_file(path) -> Dict:
        """Ler o arquivo JSON de configuração (erros de sintaxe citam linha e coluna)"""
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"arquivo de configuração não encontrado: {path}", module=MODULE)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                document = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(
                f"JSON inválido em {path}, linha {e.lineno}, coluna {e.colno}: {e.msg}", module=MODULE,
            )
        if not isinstance(document, dict):
            raise ConfigError(f"{path}: o documento deve ser um objeto JSON", module=MODULE)
        return document

    @staticmethod
    def parse_override(text: str) -> Tuple[str, object]:
        """key=value; o valor é lido como JSON e, se falhar, como texto"""
        if '=' not in text:
            raise ConfigError(f"override sem '=': {text!r}", module=MODULE)
        key, raw = (part.strip() for part in text.split('=', 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"override desconhecido: {key}", module=MODULE, key=key)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        return key, value

    @staticmethod
    def parse_overrides(items: List[str]) -> Dict:
        overrides = {}
        for item in items or []:
            key, value = ConfigFileProcessor.parse_override(item)
            overrides[key] = value
        return overrides

    @staticmethod
    def apply_overrides(document: Dict, overrides: Dict) -> Dict:
        merged = dict(document)
        merged.update(overrides)
        return merged

    @staticmethod
    def parse_sectors(text: str) -> List[int]:
        """'A..B' inclusivo nas duas pontas"""
        match = SECTORS_PATTERN.match(text or '')
        if not match:
            raise ConfigError(f"setores devem ter a forma A..B, recebido {text!r}", module=MODULE)
        first, last = int(match.group(1)), int(match.group(2))
        if first > last:
            raise ConfigError(f"setores vazios: {first} > {last}", module=MODULE)
        return list(range(first, last + 1))

    @staticmethod
    def parse_schedule(text: str) -> List[float]:
        try:
            return [float(part) for part in text.split(',') if part.strip()]
        except ValueError:
            raise ConfigError(f"esquema de mu inválido: {text!r}", module=MODULE)

    @staticmethod
    def parse_grid_axis(text: str) -> Tuple[str, List[float]]:
        """key=start:stop:count, com count pontos igualmente espaçados"""
        if '=' not in text:
            raise ConfigError(f"eixo de varredura sem '=': {text!r}", module=MODULE)
        key, spec = (part.strip() for part in text.split('=', 1))
        if key not in NUMERIC_KEYS:
            raise ConfigError(f"chave de varredura não numérica ou desconhecida: {key}", module=MODULE, key=key)
        parts = spec.split(':')
        if len(parts) != 3:
            raise ConfigError(f"eixo {key}: use start:stop:count", module=MODULE, key=key)
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"eixo {key}: valores inválidos em {spec!r}", module=MODULE, key=key)
        if count < 1:
            raise ConfigError(f"eixo {key}: count deve ser >= 1", module=MODULE, key=key)
        return key, np.linspace(start, stop, count).tolist()

    @staticmethod
    def parse_grid(items: List[str]) -> Dict[str, List[float]]:
        grid = {}
        for item in items or []:
            key, values = ConfigFileProcessor.parse_grid_axis(item)
            if key in grid:
                raise ConfigError(f"eixo de varredura repetido: {key}", module=MODULE, key=key)
            grid[key] = values
        return grid
