"""Reading and writing of config documents, JSONL manifests and CSV reports."""
import csv
import errno
import json
import logging
import os
from typing import Any, Iterable, Iterator

import numpy as np
from ruyaml import YAML
from ruyaml.composer import ComposerError
from ruyaml.constructor import ConstructorError
from ruyaml.parser import ParserError

from dockvision import exceptions

logger = logging.getLogger(__name__)


def make_sure_path_exists(path: str) -> bool:
    """Ensure that a directory exists.

    :param path: A directory path.
    """
    logger.debug('Making sure path exists: %s', path)
    try:
        os.makedirs(path)
        logger.debug('Created directory at: %s', path)
    except OSError as exception:
        if exception.errno != errno.EEXIST:
            return False
    return True


def ensure_parent(path: str):
    """Create the parent directory of a file path or raise IoFailure."""
    parent = os.path.dirname(os.path.abspath(path))
    if not make_sure_path_exists(parent) or not os.access(parent, os.W_OK):
        raise exceptions.IoFailure(f"Unable to write to directory={parent}.")


def read_config_file(file: str, file_extension: str | None = None) -> Any:
    """Read yaml / json / toml files into objects."""
    if not file_extension:
        file_extension = file.split('.')[-1]

    if not os.path.exists(file):
        raise exceptions.IoFailure(f"Can't find the file {file}.") from None

    logger.debug(
        'Using \"{}\" as input file and \"{}\" as file extension'.format(
            file, file_extension
        )
    )
    try:
        if file_extension == 'json':
            with open(file) as f:
                return json.load(f)
        elif file_extension in ('yaml', 'yml'):
            yaml = YAML(typ="safe")
            try:
                with open(file, encoding='utf-8') as f:
                    return yaml.load(f)
            except (ComposerError, ConstructorError, ParserError) as e:
                raise exceptions.ConfigInvalid(
                    f"Error loading file={file}\n{e}",
                ) from None
        elif file_extension == 'toml':
            try:
                from tomli import load as toml_load
            except ModuleNotFoundError:
                from tomllib import load as toml_load
            with open(file, 'rb') as f:
                return toml_load(f)
        else:
            raise exceptions.ConfigInvalid(
                f'Unable to parse file {file}. Error: Unsupported extension '
                f'(yaml/json/toml only)'
            )
    except ValueError as e:
        message = f'Error while loading file=`{file}`. \n' f'Details: "{str(e)}"'
        raise exceptions.ConfigInvalid(message) from None


def dump_yaml(data: Any, stream):
    """Write a plain python document as block style yaml."""
    yaml = YAML()
    yaml.default_flow_style = False
    yaml.indent(mapping=2, sequence=4, offset=2)
    yaml.dump(data, stream)


def write_jsonl(path: str, records: Iterable[dict]):
    """Write one compact, key sorted JSON document per line."""
    ensure_parent(path)
    try:
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            for record in records:
                f.write(dumps_compact(record))
                f.write('\n')
    except OSError as e:
        raise exceptions.IoFailure(f"Unable to write {path}: {e}") from None


def read_jsonl(path: str) -> Iterator[dict]:
    if not os.path.exists(path):
        raise exceptions.IoFailure(f"Can't find the file {path}.")
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as e:
                raise exceptions.IoFailure(
                    f"Malformed record in {path} at line {line_number}: {e}"
                ) from None


def write_json(path: str, data: Any):
    ensure_parent(path)
    try:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, sort_keys=True, default=json_default)
            f.write('\n')
    except OSError as e:
        raise exceptions.IoFailure(f"Unable to write {path}: {e}") from None


def write_csv(path: str, header: list[str], rows: Iterable[Iterable], comment=None):
    """
    Write a CSV report. An optional leading `# comment` line carries the schema
     version so artifacts stay self describing.
    """
    ensure_parent(path)
    try:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            if comment is not None:
                f.write(f'# {comment}\n')
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_cell(i) for i in row])
    except OSError as e:
        raise exceptions.IoFailure(f"Unable to write {path}: {e}") from None


def read_csv(path: str) -> list[dict]:
    """Read a CSV written by `write_csv`, skipping comment lines."""
    if not os.path.exists(path):
        raise exceptions.IoFailure(f"Can't find the file {path}.")
    with open(path, encoding='utf-8') as f:
        lines = [i for i in f if not i.startswith('#')]
    return list(csv.DictReader(lines))


def format_cell(value) -> str:
    # repr keeps the full float64 precision so reruns compare byte for byte
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def json_default(value):
    """Serialize numpy scalars and arrays that leak into reports."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps_compact(record: Any) -> str:
    return json.dumps(
        record, sort_keys=True, separators=(',', ':'), default=json_default
    )
