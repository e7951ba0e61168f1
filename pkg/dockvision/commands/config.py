import sys

from dockvision.models import BaseCommand
from dockvision.settings import config_document, dump_config


class ConfigCommand(BaseCommand):
    """Print the effective, validated run config as YAML."""

    command_name = 'config'

    def exec(self) -> dict:
        dump_config(self.run_config, sys.stdout)
        return config_document(self.run_config)
