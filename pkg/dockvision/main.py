from typing import Any

from pydantic import ValidationError

from dockvision import exceptions
from dockvision.commands import get_command


def run(command_name: str, **kwargs: Any) -> Any:
    """
    Run a subcommand programmatically, ie `run('gen', config='run.yaml')`, the same as
     `dockvision gen --config run.yaml` from the command line.

    Args:
        command_name (str): Name of the subcommand, see `dockvision --help`.
        kwargs (dict): Field values of the command, ie `config`, `overrides`.

    Returns:
        The output of the command's `exec`, a JSON serializable summary.
    """
    command_cls = get_command(command_name)
    try:
        command = command_cls(**kwargs)
    except ValidationError as e:
        raise exceptions.ConfigInvalid(
            f"Invalid arguments for command={command_name}:\n{e}"
        ) from None
    return command.exec()
