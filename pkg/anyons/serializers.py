from typing import Dict, Tuple

from rest_framework import serializers

from .exceptions import ConfigError
from .models import SimulationRun
from .params_fields import FieldConfig, SystemParams, build_configuration


class ConfigDocumentSerializer(serializers.Serializer):
    """
    Serializer para o documento de configuração (arquivo JSON plano).

    A validação delega a build_configuration, de modo que o serializer, os
    comandos e os módulos rejeitam exatamente as mesmas configurações com o
    mesmo diagnóstico.
    """

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            raise serializers.ValidationError({
                'non_field_errors': ["O documento de configuração deve ser um objeto JSON"],
            })
        try:
            params, cfg = build_configuration(data)
        except ConfigError as e:
            raise serializers.ValidationError({e.key or 'non_field_errors': [e.message]})
        return {'params': params, 'cfg': cfg}


class CyonReportSerializer(serializers.Serializer):
    spin = serializers.FloatField()
    boundary_term_hbar = serializers.FloatField(source='boundary_term')
    kinetic_shift_hbar = serializers.FloatField(source='kinetic_shift')
    spin_rate_per_s = serializers.FloatField(source='spin_rate', allow_null=True)


class SimulationRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = SimulationRun
        fields = [
            'id', 'command', 'config_path', 'output_dir', 'overrides', 'options',
            'status', 'started_at', 'completed_at', 'exit_code', 'error_message',
        ]
        read_only_fields = ['id', 'started_at', 'completed_at']


def load_config(document: Dict) -> Tuple[SystemParams, FieldConfig]:
    """
    Valida o documento e devolve (SystemParams, FieldConfig).

    Raises:
        ConfigError: com a chave problemática em e.key
    """
    serializer = ConfigDocumentSerializer(data=document)
    if not serializer.is_valid():
        key, messages = next(iter(serializer.errors.items()))
        raise ConfigError(
            str(messages[0]),
            module='params_fields',
            key=None if key == 'non_field_errors' else key,
        )
    return serializer.validated_data['params'], serializer.validated_data['cfg']
