"""Subcommands of the `dockvision` entrypoint, keyed by their command name."""
from typing import Type

from dockvision import exceptions
from dockvision.commands.bench_pnp import BenchPnpCommand
from dockvision.commands.config import ConfigCommand
from dockvision.commands.deform import DeformCommand
from dockvision.commands.detect import DetectCommand
from dockvision.commands.evaluate import EvalCommand
from dockvision.commands.gen import GenCommand
from dockvision.commands.pose import PoseCommand
from dockvision.commands.sweep import SweepCommand
from dockvision.commands.train import TrainCommand
from dockvision.models import BaseCommand

COMMANDS: dict[str, Type[BaseCommand]] = {
    i.command_name: i
    for i in (
        GenCommand,
        DeformCommand,
        TrainCommand,
        DetectCommand,
        EvalCommand,
        PoseCommand,
        BenchPnpCommand,
        SweepCommand,
        ConfigCommand,
    )
}


def get_command(command_name: str) -> Type[BaseCommand]:
    if command_name not in COMMANDS:
        raise exceptions.UnknownCommand(command_name, list(COMMANDS))
    return COMMANDS[command_name]


__all__ = [
    'COMMANDS',
    'BaseCommand',
    'get_command',
]
