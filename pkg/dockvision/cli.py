"""Main `dockvision` CLI."""
import argparse
import json
import sys
import types
import typing
from typing import Literal, Type

from dockvision import __version__, exceptions
from dockvision.commands import COMMANDS
from dockvision.main import run
from dockvision.models import BaseCommand
from dockvision.settings import settings
from dockvision.utils.files import json_default
from dockvision.utils.log import configure_logger

GLOBAL_ARGS = ('verbose', 'debug_file', 'print', 'command')


def _strip_optional(annotation):
    if typing.get_origin(annotation) in (typing.Union, types.UnionType):
        args = [i for i in typing.get_args(annotation) if i is not type(None)]
        if len(args) == 1:
            return args[0]
    return annotation


def add_command_arguments(parser: argparse.ArgumentParser, command: Type[BaseCommand]):
    """Turn the fields of a command into flags. Unset flags keep the field default."""
    for name, field in command.model_fields.items():
        extra = field.json_schema_extra or {}
        flags = [extra.get('flag', f"--{name.replace('_', '-')}")]
        if 'short' in extra:
            flags.append(extra['short'])
        kwargs = {
            'dest': name,
            'help': field.description,
            'default': argparse.SUPPRESS,
        }

        annotation = _strip_optional(field.annotation)
        origin = typing.get_origin(annotation)
        if annotation is bool:
            kwargs['action'] = 'store_true'
        elif origin is list:
            (item_type,) = typing.get_args(annotation)
            if item_type is str:
                kwargs.update(action='append', metavar='')
            else:
                kwargs.update(nargs='+', type=item_type, metavar='')
        elif origin is Literal:
            kwargs['choices'] = typing.get_args(annotation)
        else:
            kwargs.update(type=annotation, metavar='')
        parser.add_argument(*flags, **kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='dockvision',
        description="Synthetic underwater docking scenes, a grid detector, landmark "
        "based pose recovery and the harness to evaluate them.",
    )
    parser.add_argument(
        '--version', action='version', version=f'dockvision {__version__}'
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--verbose', '-v', action='store_true', help="Execute in verbose mode."
    )
    common.add_argument(
        '--debug-file',
        dest='debug_file',
        default=None,
        metavar="",
        help="Also write DEBUG logs to this file.",
    )
    common.add_argument(
        '--print',
        '-p',
        action='store_true',
        help="Print the command's result as JSON.",
    )

    subparsers = parser.add_subparsers(dest='command', metavar='command', required=True)
    for command_name, command in COMMANDS.items():
        subparser = subparsers.add_parser(
            command_name,
            parents=[common],
            help=(command.__doc__ or '').strip().split('\n')[0],
            description=command.__doc__,
        )
        add_command_arguments(subparser, command)
    return parser


def main(raw_args=None):
    """Main cli entrypoint."""
    if raw_args is None:
        raw_args = sys.argv[1:]

    args = build_parser().parse_args(raw_args)
    configure_logger(
        stream_level='DEBUG' if args.verbose else settings.log_level,
        debug_file=args.debug_file,
    )
    kwargs = {k: v for k, v in vars(args).items() if k not in GLOBAL_ARGS}

    try:
        output = run(args.command, **kwargs)
    except exceptions.DockvisionException as e:
        sys.stderr.write(json.dumps(e.to_dict()) + '\n')
        sys.exit(e.code)

    if args.print and args.command != 'config':
        print(json.dumps(output, indent=2, sort_keys=True, default=json_default))


if __name__ == "__main__":
    main(sys.argv[1:])
